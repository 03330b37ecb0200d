//! The objective-function contract and the composite quadratic-plus-nonsmooth
//! objective `L(u) = ½<Au, u> + <b, u> + J(u)`.

use crate::error::{ensure_dim, ensure_finite, Error, Result};
use crate::linalg;
use crate::matrix::SymMatrix;

/// Function value together with one element of the Clarke subdifferential.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalResult {
    pub value: f64,
    pub subgradient: Vec<f64>,
}

/// A locally Lipschitz function that can report its value and one
/// subgradient at any point.
///
/// Implementations carry no mutable evaluation state, so a single objective
/// can be shared across threads.
pub trait Objective: Send + Sync {
    fn dim(&self) -> usize;

    fn eval(&self, u: &[f64]) -> Result<EvalResult>;

    fn value(&self, u: &[f64]) -> Result<f64> {
        self.eval(u).map(|r| r.value)
    }
}

impl<T: Objective + ?Sized> Objective for &T {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn eval(&self, u: &[f64]) -> Result<EvalResult> {
        (**self).eval(u)
    }
    fn value(&self, u: &[f64]) -> Result<f64> {
        (**self).value(u)
    }
}

impl<T: Objective + ?Sized> Objective for Box<T> {
    fn dim(&self) -> usize {
        (**self).dim()
    }
    fn eval(&self, u: &[f64]) -> Result<EvalResult> {
        (**self).eval(u)
    }
    fn value(&self, u: &[f64]) -> Result<f64> {
        (**self).value(u)
    }
}

/// The nonsmooth term `J` of a [`QuadPlusJ`] objective.
pub trait NonsmoothTerm: Send + Sync {
    /// Returns `J(u)` and adds one element of `∂J(u)` to `grad`.
    fn eval_add(&self, u: &[f64], grad: &mut [f64]) -> f64;

    fn value(&self, u: &[f64]) -> f64 {
        let mut g = vec![0.0; u.len()];
        self.eval_add(u, &mut g)
    }
}

/// `J ≡ 0`.
#[derive(Debug, Clone, Copy, Default)]
pub struct NoTerm;

impl NonsmoothTerm for NoTerm {
    fn eval_add(&self, _u: &[f64], _grad: &mut [f64]) -> f64 {
        0.0
    }
}

/// `J(u) = Σ w_i |u_i|` with subgradient selection `sign(0) = 0`.
#[derive(Debug, Clone)]
pub struct WeightedL1 {
    pub weights: Vec<f64>,
}

impl NonsmoothTerm for WeightedL1 {
    fn eval_add(&self, u: &[f64], grad: &mut [f64]) -> f64 {
        let mut val = 0.0;
        for ((ui, wi), gi) in u.iter().zip(&self.weights).zip(grad.iter_mut()) {
            val += wi * ui.abs();
            if *ui > 0.0 {
                *gi += wi;
            } else if *ui < 0.0 {
                *gi -= wi;
            }
        }
        val
    }
}

/// `L(u) = ½<Au, u> + <b, u> + J(u)` with `A` symmetric positive definite.
#[derive(Debug, Clone)]
pub struct QuadPlusJ<J> {
    a: SymMatrix,
    b: Vec<f64>,
    term: J,
}

impl QuadPlusJ<NoTerm> {
    pub fn quadratic(a: SymMatrix, b: Vec<f64>) -> Result<Self> {
        Self::new(a, b, NoTerm)
    }
}

impl<J: NonsmoothTerm> QuadPlusJ<J> {
    /// Validates symmetry (relative tolerance 1e-12) and positive
    /// definiteness (Cholesky success) of `a`.
    pub fn new(a: SymMatrix, b: Vec<f64>, term: J) -> Result<Self> {
        ensure_dim(a.dim(), b.len())?;
        ensure_finite(&b, "linear term b")?;
        a.check_symmetric(1e-12)?;
        a.cholesky()?;
        Ok(Self { a, b, term })
    }

    pub fn matrix(&self) -> &SymMatrix {
        &self.a
    }

    pub fn linear(&self) -> &[f64] {
        &self.b
    }

    pub fn term(&self) -> &J {
        &self.term
    }

    /// Smooth part `½<Au, u> + <b, u>` only.
    pub fn quadratic_value(&self, u: &[f64]) -> f64 {
        0.5 * self.a.quad_form(u) + linalg::dot(&self.b, u)
    }
}

impl<J: NonsmoothTerm> Objective for QuadPlusJ<J> {
    fn dim(&self) -> usize {
        self.b.len()
    }

    fn eval(&self, u: &[f64]) -> Result<EvalResult> {
        ensure_dim(self.dim(), u.len())?;
        ensure_finite(u, "evaluation point")?;
        let mut grad = self.a.mul(u);
        let quad = 0.5 * linalg::dot(&grad, u) + linalg::dot(&self.b, u);
        linalg::axpy(1.0, &self.b, &mut grad);
        let value = quad + self.term.eval_add(u, &mut grad);
        if !value.is_finite() {
            return Err(Error::NonFinite("objective value"));
        }
        ensure_finite(&grad, "subgradient")?;
        Ok(EvalResult {
            value,
            subgradient: grad,
        })
    }
}

/// Objective backed by a closure returning `(value, subgradient)`.
pub struct FnObjective<F> {
    dim: usize,
    f: F,
}

impl<F> FnObjective<F>
where
    F: Fn(&[f64]) -> (f64, Vec<f64>) + Send + Sync,
{
    pub fn new(dim: usize, f: F) -> Self {
        Self { dim, f }
    }
}

impl<F> Objective for FnObjective<F>
where
    F: Fn(&[f64]) -> (f64, Vec<f64>) + Send + Sync,
{
    fn dim(&self) -> usize {
        self.dim
    }

    fn eval(&self, u: &[f64]) -> Result<EvalResult> {
        ensure_dim(self.dim, u.len())?;
        ensure_finite(u, "evaluation point")?;
        let (value, subgradient) = (self.f)(u);
        ensure_dim(self.dim, subgradient.len())?;
        if !value.is_finite() {
            return Err(Error::NonFinite("objective value"));
        }
        ensure_finite(&subgradient, "subgradient")?;
        Ok(EvalResult { value, subgradient })
    }
}

/// Minimizes `φ(λ) = ‖λv + (1 − λ)ṽ‖²` over `λ ∈ [0, 1]`.
///
/// Returns `(λ, λv + (1 − λ)ṽ)`. When `v = ṽ` every `λ` is optimal and
/// `λ = 0` is returned.
pub fn solve_lambda(v: &[f64], vtilde: &[f64]) -> Result<(f64, Vec<f64>)> {
    ensure_dim(v.len(), vtilde.len())?;
    let mut out = vec![0.0; v.len()];
    let lambda = aggregate_into(v, vtilde, &mut out);
    Ok((lambda, out))
}

pub(crate) fn aggregate_into(v: &[f64], vtilde: &[f64], out: &mut [f64]) -> f64 {
    let mut diff_sq = 0.0;
    let mut num = 0.0;
    for (vi, ti) in v.iter().zip(vtilde) {
        let diff = vi - ti;
        diff_sq += diff * diff;
        num -= ti * diff;
    }
    let lambda = if diff_sq > 0.0 {
        (num / diff_sq).clamp(0.0, 1.0)
    } else {
        0.0
    };
    for ((o, vi), ti) in out.iter_mut().zip(v).zip(vtilde) {
        *o = lambda * vi + (1.0 - lambda) * ti;
    }
    lambda
}

/// Diagnostic for the secant condition `L(u + τd) − L(u) ≤ τ<v, d>` with
/// `v` the subgradient returned at `u + τd`.
///
/// Uses the tolerance `1e-9 (1 + |L(u)|)`. Never used to gate a solver.
pub fn check_secant<O: Objective + ?Sized>(
    obj: &O,
    u: &[f64],
    d: &[f64],
    tau: f64,
) -> Result<bool> {
    ensure_dim(obj.dim(), u.len())?;
    ensure_dim(obj.dim(), d.len())?;
    if !(tau > 0.0) {
        return Err(Error::InvalidConfig(format!("tau must be positive, got {tau}")));
    }
    if (linalg::norm(d) - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidConfig("direction must have unit norm".into()));
    }
    let at_u = obj.value(u)?;
    let shifted = obj.eval(&linalg::offset(u, tau, d))?;
    let tol = 1e-9 * (1.0 + at_u.abs());
    Ok(shifted.value - at_u <= tau * linalg::dot(&shifted.subgradient, d) + tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b}");
    }

    #[test]
    fn eval_identity_quadratic() {
        let obj = QuadPlusJ::quadratic(SymMatrix::identity(2), vec![0.0, 0.0]).unwrap();
        let r = obj.eval(&[3.0, 4.0]).unwrap();
        assert_eq!(r.value, 12.5);
        assert_eq!(r.subgradient, vec![3.0, 4.0]);
    }

    #[test]
    fn eval_unconstrained_minimum() {
        let obj = QuadPlusJ::quadratic(SymMatrix::identity(2), vec![-1.0, -1.0]).unwrap();
        let r = obj.eval(&[1.0, 1.0]).unwrap();
        assert_eq!(r.value, -1.0);
        assert_eq!(r.subgradient, vec![0.0, 0.0]);
    }

    #[test]
    fn eval_with_l1_term_matches_hand_computation() {
        // A = diag(2, 8), b = (1, -3), J(u) = |u1|, u = (0.5, 0.25):
        //   ½<Au,u> = ½(2·0.25 + 8·0.0625) = 0.5
        //   <b,u>   = 0.5 − 0.75 = −0.25
        //   J(u)    = 0.5
        //   L       = 0.75
        //   Au + b + sign(u1) e1 = (1 + 1 + 1, 2 − 3) = (3, −1)
        let obj = QuadPlusJ::new(
            SymMatrix::diagonal(&[2.0, 8.0]),
            vec![1.0, -3.0],
            WeightedL1 {
                weights: vec![1.0, 0.0],
            },
        )
        .unwrap();
        let r = obj.eval(&[0.5, 0.25]).unwrap();
        assert_close(r.value, 0.75, 1e-15);
        assert_close(r.subgradient[0], 3.0, 1e-15);
        assert_close(r.subgradient[1], -1.0, 1e-15);
    }

    #[test]
    fn eval_rejects_bad_input() {
        let obj = QuadPlusJ::quadratic(SymMatrix::identity(2), vec![0.0, 0.0]).unwrap();
        assert_eq!(
            obj.eval(&[1.0]).err(),
            Some(Error::DimensionMismatch {
                expected: 2,
                got: 1
            })
        );
        assert!(matches!(
            obj.eval(&[f64::NAN, 0.0]),
            Err(Error::NonFinite(_))
        ));
    }

    #[test]
    fn construction_rejects_non_pd_and_asymmetric() {
        let indef = SymMatrix::dense_from_rows(2, &[1.0, 3.0, 3.0, 1.0]).unwrap();
        assert_eq!(
            QuadPlusJ::quadratic(indef, vec![0.0; 2]).err(),
            Some(Error::NotPositiveDefinite)
        );
        let asym = SymMatrix::dense_from_rows(2, &[2.0, 0.1, 0.0, 2.0]).unwrap();
        assert!(matches!(
            QuadPlusJ::quadratic(asym, vec![0.0; 2]),
            Err(Error::NotSymmetric { .. })
        ));
        assert!(QuadPlusJ::quadratic(SymMatrix::identity(3), vec![0.0; 2]).is_err());
    }

    #[test]
    fn solve_lambda_examples() {
        let (l, vb) = solve_lambda(&[1.0, 0.0], &[-1.0, 0.0]).unwrap();
        assert_eq!(l, 0.5);
        assert_eq!(vb, vec![0.0, 0.0]);

        let (l, vb) = solve_lambda(&[2.0, 3.0], &[2.0, 3.0]).unwrap();
        assert_eq!(l, 0.0);
        assert_eq!(vb, vec![2.0, 3.0]);

        let (l, vb) = solve_lambda(&[2.0, 0.0], &[0.0, 2.0]).unwrap();
        assert_eq!(l, 0.5);
        assert_eq!(vb, vec![1.0, 1.0]);
        assert_close(linalg::norm(&vb), 2f64.sqrt(), 1e-15);

        // clamping at both ends
        let (l, _) = solve_lambda(&[1.0, 0.0], &[2.0, 0.0]).unwrap();
        assert_eq!(l, 1.0);
        let (l, _) = solve_lambda(&[2.0, 0.0], &[1.0, 0.0]).unwrap();
        assert_eq!(l, 0.0);

        assert!(solve_lambda(&[1.0], &[1.0, 2.0]).is_err());
    }

    #[test]
    fn secant_holds_for_convex_functions() {
        let smooth =
            QuadPlusJ::quadratic(SymMatrix::diagonal(&[1.0, 5.0]), vec![0.3, -2.0]).unwrap();
        let l1 = QuadPlusJ::new(
            SymMatrix::diagonal(&[1e-3, 1e-3]),
            vec![0.0, 0.0],
            WeightedL1 {
                weights: vec![1.0, 0.0],
            },
        )
        .unwrap();
        for k in 0..50 {
            let t = k as f64 * 0.37;
            let u = [t.sin() * 3.0, t.cos() * 2.0];
            let d = [(1.3 * t).cos(), (1.3 * t).sin()];
            let tau = 0.01 + (k % 7) as f64;
            assert!(check_secant(&smooth, &u, &d, tau).unwrap());
            assert!(check_secant(&l1, &u, &d, tau).unwrap());
        }
        assert!(check_secant(&smooth, &[0.0, 0.0], &[2.0, 0.0], 1.0).is_err());
        assert!(check_secant(&smooth, &[0.0, 0.0], &[1.0, 0.0], 0.0).is_err());
    }

    #[test]
    fn secant_fails_for_concave_kink() {
        // L(u) = -|u| has a concave kink; stepping across it breaks the secant bound
        let obj = FnObjective::new(1, |u: &[f64]| {
            (-u[0].abs(), vec![if u[0] >= 0.0 { -1.0 } else { 1.0 }])
        });
        assert!(!check_secant(&obj, &[-0.5], &[1.0], 1.0).unwrap());
    }
}
