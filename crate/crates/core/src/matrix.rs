//! Symmetric matrix storage used by the quadratic part of the objective.
//!
//! Small test problems use dense storage; the assembled finite element
//! operator uses compressed sparse rows. Both support the same operations:
//! matrix-vector products, a symmetry check and a Cholesky factorization
//! that doubles as the positive-definiteness test.

use nalgebra::DMatrix;
use nalgebra_sparse::factorization::CscCholesky;
use nalgebra_sparse::{CooMatrix, CscMatrix, CsrMatrix};

use crate::error::{ensure_dim, Error, Result};
use crate::linalg;

#[derive(Debug, Clone)]
pub enum SymMatrix {
    Dense(DMatrix<f64>),
    Sparse(CsrMatrix<f64>),
}

impl SymMatrix {
    /// Dense matrix from row-major data.
    pub fn dense_from_rows(n: usize, data: &[f64]) -> Result<Self> {
        ensure_dim(n * n, data.len())?;
        Ok(Self::Dense(DMatrix::from_row_slice(n, n, data)))
    }

    pub fn diagonal(diag: &[f64]) -> Self {
        Self::Dense(DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(
            diag,
        )))
    }

    pub fn identity(n: usize) -> Self {
        Self::Dense(DMatrix::identity(n, n))
    }

    /// Sparse matrix from `(row, col, value)` triplets; duplicates are summed.
    pub fn sparse_from_triplets(n: usize, triplets: &[(usize, usize, f64)]) -> Result<Self> {
        let mut coo = CooMatrix::new(n, n);
        for &(i, j, v) in triplets {
            if i >= n || j >= n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: i.max(j) + 1,
                });
            }
            coo.push(i, j, v);
        }
        Ok(Self::Sparse(CsrMatrix::from(&coo)))
    }

    pub fn scaled(&self, alpha: f64) -> Self {
        match self {
            Self::Dense(m) => Self::Dense(m * alpha),
            Self::Sparse(m) => Self::Sparse(m * alpha),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Dense(m) => m.nrows(),
            Self::Sparse(m) => m.nrows(),
        }
    }

    /// `out = A x`
    pub fn mul_into(&self, x: &[f64], out: &mut [f64]) {
        debug_assert_eq!(x.len(), self.dim());
        debug_assert_eq!(out.len(), self.dim());
        match self {
            Self::Dense(m) => {
                let n = m.nrows();
                for (i, o) in out.iter_mut().enumerate() {
                    let mut s = 0.0;
                    for j in 0..n {
                        s += m[(i, j)] * x[j];
                    }
                    *o = s;
                }
            }
            Self::Sparse(m) => {
                let offsets = m.row_offsets();
                let cols = m.col_indices();
                let vals = m.values();
                for (i, o) in out.iter_mut().enumerate() {
                    let range = offsets[i]..offsets[i + 1];
                    *o = cols[range.clone()]
                        .iter()
                        .zip(&vals[range])
                        .map(|(&j, &a)| a * x[j])
                        .sum();
                }
            }
        }
    }

    pub fn mul(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dim()];
        self.mul_into(x, &mut out);
        out
    }

    /// `<A x, x>`
    pub fn quad_form(&self, x: &[f64]) -> f64 {
        linalg::dot(&self.mul(x), x)
    }

    /// Largest absolute entry.
    pub fn max_abs_entry(&self) -> f64 {
        match self {
            Self::Dense(m) => m.iter().fold(0.0, |a, v| a.max(v.abs())),
            Self::Sparse(m) => linalg::max_abs(m.values()),
        }
    }

    /// Frobenius norm.
    pub fn frobenius_norm(&self) -> f64 {
        match self {
            Self::Dense(m) => m.norm(),
            Self::Sparse(m) => linalg::norm(m.values()),
        }
    }

    /// Checks `|a_ij - a_ji| <= rel_tol * max|a|` for every entry.
    pub fn check_symmetric(&self, rel_tol: f64) -> Result<()> {
        let tol = rel_tol * self.max_abs_entry();
        match self {
            Self::Dense(m) => {
                let n = m.nrows();
                for i in 0..n {
                    for j in (i + 1)..n {
                        let (a_ij, a_ji) = (m[(i, j)], m[(j, i)]);
                        if (a_ij - a_ji).abs() > tol {
                            return Err(Error::NotSymmetric {
                                row: i,
                                col: j,
                                a_ij,
                                a_ji,
                            });
                        }
                    }
                }
            }
            Self::Sparse(m) => {
                for (i, j, &a_ij) in m.triplet_iter() {
                    let a_ji = sparse_entry(m, j, i);
                    if (a_ij - a_ji).abs() > tol {
                        return Err(Error::NotSymmetric {
                            row: i,
                            col: j,
                            a_ij,
                            a_ji,
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn cholesky(&self) -> Result<Cholesky> {
        match self {
            Self::Dense(m) => m
                .clone()
                .cholesky()
                .map(Cholesky::Dense)
                .ok_or(Error::NotPositiveDefinite),
            Self::Sparse(m) => {
                let csc = CscMatrix::from(m);
                CscCholesky::factor(&csc)
                    .map(|c| Cholesky::Sparse(Box::new(c)))
                    .map_err(|_| Error::NotPositiveDefinite)
            }
        }
    }

    /// Dense copy, row-major.
    pub fn to_dense_rows(&self) -> Vec<f64> {
        let n = self.dim();
        let mut out = vec![0.0; n * n];
        match self {
            Self::Dense(m) => {
                for i in 0..n {
                    for j in 0..n {
                        out[i * n + j] = m[(i, j)];
                    }
                }
            }
            Self::Sparse(m) => {
                for (i, j, &v) in m.triplet_iter() {
                    out[i * n + j] = v;
                }
            }
        }
        out
    }
}

fn sparse_entry(m: &CsrMatrix<f64>, row: usize, col: usize) -> f64 {
    let range = m.row_offsets()[row]..m.row_offsets()[row + 1];
    match m.col_indices()[range.clone()].binary_search(&col) {
        Ok(k) => m.values()[range.start + k],
        Err(_) => 0.0,
    }
}

/// Cholesky factor of a [`SymMatrix`].
pub enum Cholesky {
    Dense(nalgebra::Cholesky<f64, nalgebra::Dyn>),
    Sparse(Box<CscCholesky<f64>>),
}

impl Cholesky {
    pub fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let b = DMatrix::from_column_slice(rhs.len(), 1, rhs);
        let x = match self {
            Self::Dense(c) => c.solve(&b),
            Self::Sparse(c) => c.solve(&b),
        };
        x.as_slice().to_vec()
    }

    /// Smallest-eigenvalue estimate by inverse power iteration.
    pub fn smallest_eigenvalue(&self, a: &SymMatrix, iters: usize) -> f64 {
        let n = a.dim();
        // deterministic start with components in every direction
        let mut x: Vec<f64> = (0..n).map(|i| 1.0 + ((i * 7919) % 13) as f64 / 13.0).collect();
        let nx = linalg::norm(&x);
        x.iter_mut().for_each(|v| *v /= nx);
        for _ in 0..iters {
            let y = self.solve(&x);
            let ny = linalg::norm(&y);
            x = y.into_iter().map(|v| v / ny).collect();
        }
        a.quad_form(&x)
    }
}
