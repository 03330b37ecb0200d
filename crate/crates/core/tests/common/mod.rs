#![allow(dead_code)]

use hemivar_core::{EvalResult, Objective, Result, SymMatrix};
use rand::Rng;

/// `max_i (⟨a_i, u⟩ + c_i)`; the subgradient is the first maximizing row.
pub struct MaxAffine {
    pub rows: Vec<Vec<f64>>,
    pub offsets: Vec<f64>,
}

impl MaxAffine {
    /// Rows drawn around zero plus `±e_j` rows so the function is coercive.
    pub fn random<R: Rng>(rng: &mut R, n: usize, extra: usize) -> Self {
        let mut rows = Vec::new();
        let mut offsets = Vec::new();
        for j in 0..n {
            for s in [1.0, -1.0] {
                let mut r = vec![0.0; n];
                r[j] = s * rng.random_range(0.5..2.0);
                rows.push(r);
                offsets.push(rng.random_range(-1.0..1.0));
            }
        }
        for _ in 0..extra {
            rows.push((0..n).map(|_| rng.random_range(-1.5..1.5)).collect());
            offsets.push(rng.random_range(-1.0..1.0));
        }
        Self { rows, offsets }
    }
}

impl Objective for MaxAffine {
    fn dim(&self) -> usize {
        self.rows[0].len()
    }

    fn eval(&self, u: &[f64]) -> Result<EvalResult> {
        let mut best = (f64::NEG_INFINITY, 0);
        for (k, (r, c)) in self.rows.iter().zip(&self.offsets).enumerate() {
            let v = r.iter().zip(u).map(|(a, b)| a * b).sum::<f64>() + c;
            if v > best.0 {
                best = (v, k);
            }
        }
        Ok(EvalResult {
            value: best.0,
            subgradient: self.rows[best.1].clone(),
        })
    }
}

/// Two wells joined at `u = 5/12`: `min((u+1)², (u−2)² − 0.5)`.
/// Global minimum −0.5 at `u = 2`, local minimum 0 at `u = −1`.
pub fn two_well(u: &[f64]) -> (f64, Vec<f64>) {
    let x = u[0];
    let left = (x + 1.0).powi(2);
    let right = (x - 2.0).powi(2) - 0.5;
    if left <= right {
        (left, vec![2.0 * (x + 1.0)])
    } else {
        (right, vec![2.0 * (x - 2.0)])
    }
}

/// Symmetric positive definite matrix `QᵀDQ` with spectrum in `[lo, hi]`,
/// `Q` from Gram–Schmidt on a random matrix.
pub fn random_spd<R: Rng>(rng: &mut R, n: usize, lo: f64, hi: f64) -> SymMatrix {
    let mut q: Vec<Vec<f64>> = Vec::with_capacity(n);
    while q.len() < n {
        let mut v: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        for w in &q {
            let p: f64 = v.iter().zip(w).map(|(a, b)| a * b).sum();
            v.iter_mut().zip(w).for_each(|(a, b)| *a -= p * b);
        }
        let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        if norm > 1e-8 {
            q.push(v.into_iter().map(|a| a / norm).collect());
        }
    }
    let d: Vec<f64> = (0..n).map(|_| rng.random_range(lo..=hi)).collect();
    let mut data = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..=i {
            let s: f64 = (0..n).map(|k| q[k][i] * d[k] * q[k][j]).sum();
            data[i * n + j] = s;
            data[j * n + i] = s;
        }
    }
    SymMatrix::dense_from_rows(n, &data).unwrap()
}
