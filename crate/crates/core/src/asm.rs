//! Aggregate subgradient method.
//!
//! For a fixed sampling radius `η` the inner loop builds a search direction
//! from exactly two subgradients: the one computed at the latest trial point
//! `u + η d_k` and the aggregate carried over from the previous null step.
//! Their minimum-norm convex combination `v̄_k` either becomes small
//! (`‖v̄_k‖ ≤ δ`, the radius is shrunk by `γ`) or yields a direction
//! `d = −v̄_k / ‖v̄_k‖` that passes the sufficient-decrease test
//!
//! ```text
//! L(u + η d) − L(u) ≤ −c1 η ‖v̄_k‖
//! ```
//!
//! in which case a serious step `u ← u + σ d` is taken with the largest
//! tested `σ ≥ η` satisfying the same test with `c2 < c1`. The method stops
//! once `η < ε`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{ensure_dim, ensure_finite, Error, Result};
use crate::linalg;
use crate::objective::{aggregate_into, Objective};
use crate::rng::{self, SolverRng};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverConfig {
    /// Outer stopping tolerance on `η`.
    pub eps: f64,
    /// Aggregate-norm threshold that triggers an `η` reduction.
    pub delta: f64,
    /// `η` reduction factor.
    pub gamma: f64,
    /// Sufficient-decrease constant of the descent test.
    pub c1: f64,
    /// Sufficient-decrease constant of the step-length search, `c2 < c1`.
    pub c2: f64,
    /// Initial sampling radius.
    pub eta0: f64,
    /// Null steps allowed per inner loop (also caps line-search expansions).
    pub max_inner: usize,
    /// Serious steps allowed per solve.
    pub max_serious: usize,
    /// Growth factor of the step-length search.
    pub expansion_factor: f64,
    pub record_trajectory: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            eps: 1e-6,
            delta: 1e-6,
            gamma: 0.5,
            c1: 0.2,
            c2: 0.05,
            eta0: 1.0,
            max_inner: 10_000,
            max_serious: 1_000_000,
            expansion_factor: 2.0,
            record_trajectory: false,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        if !(self.eps > 0.0) || !(self.delta > 0.0) {
            return bad(format!(
                "eps and delta must be positive (eps={}, delta={})",
                self.eps, self.delta
            ));
        }
        if !(self.gamma > 0.0 && self.gamma < 1.0) {
            return bad(format!("gamma must lie in (0, 1), got {}", self.gamma));
        }
        if !(self.c2 > 0.0 && self.c2 < self.c1 && self.c1 < 1.0) {
            return bad(format!(
                "need 0 < c2 < c1 < 1 (c1={}, c2={})",
                self.c1, self.c2
            ));
        }
        if !(self.eta0 > self.eps) || !self.eta0.is_finite() {
            return bad(format!(
                "eta0 must be finite and exceed eps (eta0={}, eps={})",
                self.eta0, self.eps
            ));
        }
        if self.max_inner == 0 || self.max_serious == 0 {
            return bad("max_inner and max_serious must be positive".into());
        }
        if !(self.expansion_factor > 1.0) || !self.expansion_factor.is_finite() {
            return bad(format!(
                "expansion_factor must exceed 1, got {}",
                self.expansion_factor
            ));
        }
        Ok(())
    }
}

/// Working state of one inner loop.
#[derive(Debug, Clone)]
pub struct InnerState {
    /// Iteration counter, starting at 1.
    pub k: usize,
    /// Subgradient at the latest trial point.
    pub v: Vec<f64>,
    /// Aggregate carried from the previous step.
    pub vtilde: Vec<f64>,
    /// Minimum-norm combination of `v` and `vtilde`.
    pub vbar: Vec<f64>,
    pub lambda: f64,
    /// Latest direction (unit norm).
    pub d: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum InnerOutcome {
    /// `‖v̄‖ ≤ δ`: the radius should shrink.
    Switch { vbar: Vec<f64> },
    /// The descent test passed along `d = −v̄/‖v̄‖`; `trial_value` is
    /// `L(u + η d)`.
    Descent {
        d: Vec<f64>,
        vbar: Vec<f64>,
        trial_value: f64,
    },
    /// `max_inner` null steps without switching or descending.
    CapHit { vbar: Vec<f64> },
}

/// Result of one inner loop together with its per-step history.
#[derive(Debug, Clone)]
pub struct InnerLoop {
    pub outcome: InnerOutcome,
    pub state: InnerState,
    /// `‖v̄_k‖` for `k = 1, 2, …`.
    pub vbar_norms: Vec<f64>,
    /// `‖v_k‖` for `k = 1, 2, …`.
    pub subgradient_norms: Vec<f64>,
    /// Objective evaluations (each returns value and subgradient).
    pub evals: usize,
}

impl InnerLoop {
    pub fn steps(&self) -> usize {
        self.state.k
    }
}

/// Runs the inner loop at `u` with radius `eta`, drawing the initial
/// direction from a generator seeded with `seed`.
pub fn inner_loop<O: Objective + ?Sized>(
    obj: &O,
    u: &[f64],
    eta: f64,
    cfg: &SolverConfig,
    seed: u64,
) -> Result<InnerLoop> {
    ensure_dim(obj.dim(), u.len())?;
    let l_u = obj.value(u)?;
    inner_loop_with(obj, u, l_u, eta, cfg, &mut rng::seeded(seed))
}

/// Inner loop with a known `L(u)` and a caller-owned generator.
pub fn inner_loop_with<O: Objective + ?Sized, R: Rng + ?Sized>(
    obj: &O,
    u: &[f64],
    l_u: f64,
    eta: f64,
    cfg: &SolverConfig,
    rng: &mut R,
) -> Result<InnerLoop> {
    if !(eta > 0.0) {
        return Err(Error::InvalidConfig(format!("eta must be positive, got {eta}")));
    }
    ensure_finite(u, "inner loop base point")?;
    let n = u.len();
    let mut trial = vec![0.0; n];

    let d = rng::unit_sphere(rng, n);
    linalg::offset_into(u, eta, &d, &mut trial);
    let first = obj.eval(&trial)?;
    let mut evals = 1;

    let mut state = InnerState {
        k: 1,
        vtilde: first.subgradient.clone(),
        v: first.subgradient,
        vbar: vec![0.0; n],
        lambda: 0.0,
        d,
    };
    let mut vbar_norms = Vec::new();
    let mut subgradient_norms = vec![linalg::norm(&state.v)];

    loop {
        state.lambda = aggregate_into(&state.v, &state.vtilde, &mut state.vbar);
        let vbar_norm = linalg::norm(&state.vbar);
        vbar_norms.push(vbar_norm);

        if vbar_norm <= cfg.delta {
            return Ok(InnerLoop {
                outcome: InnerOutcome::Switch {
                    vbar: state.vbar.clone(),
                },
                state,
                vbar_norms,
                subgradient_norms,
                evals,
            });
        }

        for (di, vi) in state.d.iter_mut().zip(&state.vbar) {
            *di = -vi / vbar_norm;
        }
        linalg::offset_into(u, eta, &state.d, &mut trial);
        let at_trial = obj.eval(&trial)?;
        evals += 1;

        if at_trial.value - l_u <= -cfg.c1 * eta * vbar_norm {
            return Ok(InnerLoop {
                outcome: InnerOutcome::Descent {
                    d: state.d.clone(),
                    vbar: state.vbar.clone(),
                    trial_value: at_trial.value,
                },
                state,
                vbar_norms,
                subgradient_norms,
                evals,
            });
        }

        if state.k >= cfg.max_inner {
            return Ok(InnerLoop {
                outcome: InnerOutcome::CapHit {
                    vbar: state.vbar.clone(),
                },
                state,
                vbar_norms,
                subgradient_norms,
                evals,
            });
        }

        // null step
        std::mem::swap(&mut state.vtilde, &mut state.vbar);
        state.v = at_trial.subgradient;
        subgradient_norms.push(linalg::norm(&state.v));
        state.k += 1;
    }
}

/// Outcome of the step-length search.
#[derive(Debug, Clone, PartialEq)]
pub struct StepLength {
    pub sigma: f64,
    /// `L(u + σ d)`.
    pub value: f64,
    pub point: Vec<f64>,
    pub evals: usize,
}

/// Largest tested `σ ∈ {η, fη, f²η, …}` with
/// `L(u + σd) − L(u) ≤ −c2 σ ‖v̄‖`.
///
/// `σ = η` is assumed feasible (the descent test with `c1 > c2` already
/// passed there). Expansion stops at the first failing value, at a
/// non-finite evaluation, or after `cfg.max_inner` expansions.
pub fn line_search<O: Objective + ?Sized>(
    obj: &O,
    u: &[f64],
    d: &[f64],
    eta: f64,
    vbar_norm: f64,
    cfg: &SolverConfig,
) -> Result<StepLength> {
    ensure_dim(obj.dim(), u.len())?;
    ensure_dim(obj.dim(), d.len())?;
    let l_u = obj.value(u)?;
    let at_eta = linalg::offset(u, eta, d);
    let l_eta = obj.value(&at_eta)?;
    let mut step = expand_step(obj, u, l_u, d, eta, l_eta, at_eta, vbar_norm, cfg);
    step.evals += 2;
    Ok(step)
}

#[allow(clippy::too_many_arguments)]
fn expand_step<O: Objective + ?Sized>(
    obj: &O,
    u: &[f64],
    l_u: f64,
    d: &[f64],
    eta: f64,
    l_eta: f64,
    at_eta: Vec<f64>,
    vbar_norm: f64,
    cfg: &SolverConfig,
) -> StepLength {
    let mut best = StepLength {
        sigma: eta,
        value: l_eta,
        point: at_eta,
        evals: 0,
    };
    let mut sigma = eta;
    for _ in 0..cfg.max_inner {
        sigma *= cfg.expansion_factor;
        if !sigma.is_finite() {
            break;
        }
        let point = linalg::offset(u, sigma, d);
        best.evals += 1;
        match obj.value(&point) {
            Ok(value) if value - l_u <= -cfg.c2 * sigma * vbar_norm => {
                best.sigma = sigma;
                best.value = value;
                best.point = point;
            }
            _ => break,
        }
    }
    best
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Termination {
    /// `η` dropped below `ε`.
    EtaBelowEps,
    /// An inner loop reached `max_inner` null steps.
    InnerCapHit,
    /// `max_serious` serious steps were taken.
    SeriousCapHit,
    /// A zero subgradient was returned (used by methods without an `η` schedule).
    Stationary,
}

/// One serious step of a solve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryPoint {
    /// Serious-step index `l`, starting at 1.
    pub serious_step: usize,
    /// `L(u_l)` after the step.
    pub value: f64,
    /// `‖v̄‖` of the aggregate that produced the direction.
    pub vbar_norm: f64,
    pub eta: f64,
    pub sigma: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub u_final: Vec<f64>,
    pub l_final: f64,
    pub l_initial: f64,
    pub serious_steps: usize,
    pub inner_steps_total: usize,
    pub eta_reductions: usize,
    pub eta_final: f64,
    pub function_evals: usize,
    pub subgradient_evals: usize,
    pub trajectory: Option<Vec<TrajectoryPoint>>,
    pub termination: Termination,
}

/// Runs the aggregate subgradient method from `u0`.
pub fn solve<O: Objective + ?Sized>(
    obj: &O,
    u0: &[f64],
    cfg: &SolverConfig,
    seed: u64,
) -> Result<SolveReport> {
    solve_with_rng(obj, u0, cfg, &mut rng::seeded(seed))
}

pub fn solve_with_rng<O: Objective + ?Sized>(
    obj: &O,
    u0: &[f64],
    cfg: &SolverConfig,
    rng: &mut SolverRng,
) -> Result<SolveReport> {
    cfg.validate()?;
    ensure_dim(obj.dim(), u0.len())?;
    ensure_finite(u0, "starting point")?;

    let mut u = u0.to_vec();
    let mut l_u = obj.value(&u)?;
    let mut report = SolveReport {
        u_final: Vec::new(),
        l_final: l_u,
        l_initial: l_u,
        serious_steps: 0,
        inner_steps_total: 0,
        eta_reductions: 0,
        eta_final: cfg.eta0,
        function_evals: 1,
        subgradient_evals: 0,
        trajectory: cfg.record_trajectory.then(Vec::new),
        termination: Termination::EtaBelowEps,
    };
    let mut eta = cfg.eta0;

    report.termination = loop {
        let inner = inner_loop_with(obj, &u, l_u, eta, cfg, rng)?;
        report.inner_steps_total += inner.steps();
        report.function_evals += inner.evals;
        report.subgradient_evals += inner.evals;

        match inner.outcome {
            InnerOutcome::Switch { .. } => {
                eta *= cfg.gamma;
                report.eta_reductions += 1;
                if eta < cfg.eps {
                    break Termination::EtaBelowEps;
                }
            }
            InnerOutcome::Descent {
                d,
                vbar,
                trial_value,
            } => {
                let vbar_norm = linalg::norm(&vbar);
                let at_eta = linalg::offset(&u, eta, &d);
                let step =
                    expand_step(obj, &u, l_u, &d, eta, trial_value, at_eta, vbar_norm, cfg);
                report.function_evals += step.evals;
                u = step.point;
                l_u = step.value;
                report.serious_steps += 1;
                if let Some(traj) = report.trajectory.as_mut() {
                    traj.push(TrajectoryPoint {
                        serious_step: report.serious_steps,
                        value: l_u,
                        vbar_norm,
                        eta,
                        sigma: step.sigma,
                    });
                }
                if report.serious_steps >= cfg.max_serious {
                    break Termination::SeriousCapHit;
                }
            }
            InnerOutcome::CapHit { .. } => break Termination::InnerCapHit,
        }
    };

    report.eta_final = eta;
    report.l_final = l_u;
    report.u_final = u;
    Ok(report)
}

/// Sampled estimate of `min{‖v‖ : v ∈ conv ∂L(u + ηd), d ∈ S1}`.
///
/// Draws `n_samples` directions, evaluates subgradients at `u + ηd`, and
/// approximates the minimum-norm point of their convex hull by repeated
/// two-point aggregation against the sample with the smallest inner product
/// with the current estimate. The result over-estimates the true minimum
/// norm over the sampled hull.
pub fn stationarity_diagnostic<O: Objective + ?Sized>(
    obj: &O,
    u: &[f64],
    eta: f64,
    n_samples: usize,
    seed: u64,
) -> Result<f64> {
    ensure_dim(obj.dim(), u.len())?;
    if !(eta > 0.0) {
        return Err(Error::InvalidConfig(format!("eta must be positive, got {eta}")));
    }
    if n_samples == 0 {
        return Err(Error::InvalidConfig("n_samples must be positive".into()));
    }
    let mut rng = rng::seeded(seed);
    let n = u.len();
    let mut samples = Vec::with_capacity(n_samples);
    for _ in 0..n_samples {
        let d = rng::unit_sphere(&mut rng, n);
        samples.push(obj.eval(&linalg::offset(u, eta, &d))?.subgradient);
    }
    Ok(min_norm_in_hull(&samples))
}

/// Minimum-norm point of `conv(points)` by two-point aggregation; returns
/// its norm. Stops when an aggregation improves `‖x‖²` by at most 1e-12.
pub fn min_norm_in_hull(points: &[Vec<f64>]) -> f64 {
    let Some(first) = points.iter().min_by(|a, b| {
        linalg::norm_sq(a)
            .partial_cmp(&linalg::norm_sq(b))
            .unwrap_or(std::cmp::Ordering::Equal)
    }) else {
        return f64::NAN;
    };
    let mut x = first.clone();
    let mut next = vec![0.0; x.len()];
    let max_iters = 1000 * points.len().max(10);
    for _ in 0..max_iters {
        let Some(vertex) = points.iter().min_by(|a, b| {
            linalg::dot(a, &x)
                .partial_cmp(&linalg::dot(b, &x))
                .unwrap_or(std::cmp::Ordering::Equal)
        }) else {
            break;
        };
        aggregate_into(vertex, &x, &mut next);
        let before = linalg::norm_sq(&x);
        let after = linalg::norm_sq(&next);
        if before - after <= 1e-12 {
            if after < before {
                std::mem::swap(&mut x, &mut next);
            }
            break;
        }
        std::mem::swap(&mut x, &mut next);
    }
    linalg::norm(&x)
}
