//! Change of variables `u = L⁻ᵀ w` with `A = L Lᵀ`.
//!
//! Under it `½⟨Au, u⟩ = ½‖w‖²`, so the quadratic part becomes perfectly
//! conditioned while values are unchanged. Subgradients map as
//! `∂_w = L⁻¹ ∂_u` (linear bijection, so the chain rule is exact for the
//! Clarke subdifferential).

use nalgebra_sparse::CscMatrix;

use crate::error::{ensure_dim, ensure_finite, Error, Result};
use crate::linalg;
use crate::matrix::{Cholesky, SymMatrix};
use crate::objective::{EvalResult, NonsmoothTerm, Objective, QuadPlusJ};

/// Lower-triangular factor in compressed-column form with the diagonal
/// stored first in each column.
#[derive(Debug, Clone)]
pub struct LowerFactor {
    n: usize,
    col_ptr: Vec<usize>,
    rows: Vec<usize>,
    vals: Vec<f64>,
}

impl LowerFactor {
    pub fn new(a: &SymMatrix) -> Result<Self> {
        Ok(Self::from_cholesky(&a.cholesky()?))
    }

    pub fn from_cholesky(chol: &Cholesky) -> Self {
        let mut cols: Vec<Vec<(usize, f64)>> = match chol {
            Cholesky::Dense(c) => {
                let l = c.l();
                (0..l.ncols())
                    .map(|j| (j..l.nrows()).map(|i| (i, l[(i, j)])).filter(|e| e.1 != 0.0 || e.0 == j).collect())
                    .collect()
            }
            Cholesky::Sparse(c) => {
                let l: &CscMatrix<f64> = c.l();
                (0..l.ncols())
                    .map(|j| {
                        let col = l.col(j);
                        col.row_indices()
                            .iter()
                            .copied()
                            .zip(col.values().iter().copied())
                            .filter(|&(i, _)| i >= j)
                            .collect()
                    })
                    .collect()
            }
        };
        let n = cols.len();
        let mut col_ptr = Vec::with_capacity(n + 1);
        let mut rows = Vec::new();
        let mut vals = Vec::new();
        col_ptr.push(0);
        for (j, col) in cols.iter_mut().enumerate() {
            col.sort_by_key(|e| e.0);
            debug_assert_eq!(col.first().map(|e| e.0), Some(j));
            for &(i, v) in col.iter() {
                rows.push(i);
                vals.push(v);
            }
            col_ptr.push(rows.len());
        }
        Self {
            n,
            col_ptr,
            rows,
            vals,
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    /// In place `x ← L⁻¹ x`.
    pub fn solve_lower(&self, x: &mut [f64]) {
        for j in 0..self.n {
            let (s, e) = (self.col_ptr[j], self.col_ptr[j + 1]);
            let xj = x[j] / self.vals[s];
            x[j] = xj;
            for k in s + 1..e {
                x[self.rows[k]] -= self.vals[k] * xj;
            }
        }
    }

    /// In place `x ← L⁻ᵀ x`.
    pub fn solve_upper(&self, x: &mut [f64]) {
        for j in (0..self.n).rev() {
            let (s, e) = (self.col_ptr[j], self.col_ptr[j + 1]);
            let mut acc = x[j];
            for k in s + 1..e {
                acc -= self.vals[k] * x[self.rows[k]];
            }
            x[j] = acc / self.vals[s];
        }
    }

    /// `Lᵀ u`.
    pub fn mul_upper(&self, u: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|j| {
                (self.col_ptr[j]..self.col_ptr[j + 1])
                    .map(|k| self.vals[k] * u[self.rows[k]])
                    .sum()
            })
            .collect()
    }
}

/// `w ↦ inner(L⁻ᵀ w)` for the Cholesky factor `L` of a given matrix.
#[derive(Debug, Clone)]
pub struct CholeskyScaled<O> {
    inner: O,
    factor: LowerFactor,
}

impl<O: Objective> CholeskyScaled<O> {
    /// `a` is normally the quadratic part of `inner`, but any SPD matrix of
    /// the right size is accepted.
    pub fn new(inner: O, a: &SymMatrix) -> Result<Self> {
        ensure_dim(inner.dim(), a.dim())?;
        Ok(Self {
            factor: LowerFactor::new(a)?,
            inner,
        })
    }

    pub fn with_factor(inner: O, factor: LowerFactor) -> Result<Self> {
        ensure_dim(inner.dim(), factor.dim())?;
        Ok(Self { inner, factor })
    }

    pub fn inner(&self) -> &O {
        &self.inner
    }

    pub fn factor(&self) -> &LowerFactor {
        &self.factor
    }

    /// `u = L⁻ᵀ w`.
    pub fn to_original(&self, w: &[f64]) -> Vec<f64> {
        let mut u = w.to_vec();
        self.factor.solve_upper(&mut u);
        u
    }

    /// `w = Lᵀ u`.
    pub fn to_scaled(&self, u: &[f64]) -> Vec<f64> {
        self.factor.mul_upper(u)
    }
}

impl<O: Objective> Objective for CholeskyScaled<O> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn eval(&self, w: &[f64]) -> Result<EvalResult> {
        ensure_dim(self.dim(), w.len())?;
        let mut r = self.inner.eval(&self.to_original(w))?;
        self.factor.solve_lower(&mut r.subgradient);
        Ok(r)
    }

    fn value(&self, w: &[f64]) -> Result<f64> {
        ensure_dim(self.dim(), w.len())?;
        self.inner.value(&self.to_original(w))
    }
}

/// `½‖w‖² + ⟨L⁻¹b, w⟩ + J(L⁻ᵀw)`: a [`QuadPlusJ`] in scaled variables.
///
/// Same function as `CholeskyScaled<QuadPlusJ<J>>`, but the quadratic part
/// is evaluated in `w`. For an ill-conditioned `A` this removes the
/// cancellation in `⟨Au, u⟩`, which otherwise puts a noise floor under the
/// computed values.
#[derive(Debug, Clone)]
pub struct ScaledQuadPlusJ<J> {
    factor: LowerFactor,
    /// `L⁻¹ b`.
    c: Vec<f64>,
    term: J,
}

impl<J: NonsmoothTerm + Clone> ScaledQuadPlusJ<J> {
    pub fn new(q: &QuadPlusJ<J>) -> Result<Self> {
        Self::with_factor(q, LowerFactor::new(q.matrix())?)
    }

    /// `factor` must come from the matrix of `q`.
    pub fn with_factor(q: &QuadPlusJ<J>, factor: LowerFactor) -> Result<Self> {
        ensure_dim(q.dim(), factor.dim())?;
        let mut c = q.linear().to_vec();
        factor.solve_lower(&mut c);
        Ok(Self {
            factor,
            c,
            term: q.term().clone(),
        })
    }
}

impl<J> ScaledQuadPlusJ<J> {
    pub fn factor(&self) -> &LowerFactor {
        &self.factor
    }

    pub fn term(&self) -> &J {
        &self.term
    }

    /// `u = L⁻ᵀ w`.
    pub fn to_original(&self, w: &[f64]) -> Vec<f64> {
        let mut u = w.to_vec();
        self.factor.solve_upper(&mut u);
        u
    }

    /// `w = Lᵀ u`.
    pub fn to_scaled(&self, u: &[f64]) -> Vec<f64> {
        self.factor.mul_upper(u)
    }

    fn smooth(&self, w: &[f64]) -> f64 {
        0.5 * linalg::norm_sq(w) + linalg::dot(&self.c, w)
    }
}

impl<J: NonsmoothTerm> Objective for ScaledQuadPlusJ<J> {
    fn dim(&self) -> usize {
        self.c.len()
    }

    fn eval(&self, w: &[f64]) -> Result<EvalResult> {
        ensure_dim(self.dim(), w.len())?;
        ensure_finite(w, "evaluation point")?;
        let u = self.to_original(w);
        let mut g = vec![0.0; u.len()];
        let j = self.term.eval_add(&u, &mut g);
        self.factor.solve_lower(&mut g);
        for ((gi, wi), ci) in g.iter_mut().zip(w).zip(&self.c) {
            *gi += wi + ci;
        }
        let value = self.smooth(w) + j;
        if !value.is_finite() {
            return Err(Error::NonFinite("objective value"));
        }
        ensure_finite(&g, "subgradient")?;
        Ok(EvalResult {
            value,
            subgradient: g,
        })
    }

    fn value(&self, w: &[f64]) -> Result<f64> {
        ensure_dim(self.dim(), w.len())?;
        ensure_finite(w, "evaluation point")?;
        let value = self.smooth(w) + self.term.value(&self.to_original(w));
        if !value.is_finite() {
            return Err(Error::NonFinite("objective value"));
        }
        Ok(value)
    }
}
