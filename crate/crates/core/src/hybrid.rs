//! Simulated-annealing driver that chooses restart points for the
//! aggregate subgradient method.
//!
//! After each local solve a trial point is produced by moving one randomly
//! chosen coordinate of the local solution by a uniform amount in `[0, 1]`.
//! A trial that beats the best value seen so far becomes the next starting
//! point right away; otherwise it is accepted with the Metropolis
//! probability `min{1, exp((L(u) − L(w)) / T)}`. A rejected trial cools the
//! temperature by `α`, and the run stops once `T < T_min`.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::asm::{self, SolveReport, SolverConfig, Termination};
use crate::error::{ensure_dim, ensure_finite, Error, Result};
use crate::objective::Objective;
use crate::rng;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AnnealConfig {
    /// Initial temperature, `> 1`.
    pub t0: f64,
    /// Stop once the temperature falls below this value.
    pub tmin: f64,
    /// Cooling factor in `(0, 1)`.
    pub alpha: f64,
    pub max_local_searches: usize,
    /// Draw the perturbation sign at random (`±μ e_i`) instead of `+μ e_i`.
    pub symmetric_perturbation: bool,
}

impl Default for AnnealConfig {
    fn default() -> Self {
        Self {
            t0: 10.0,
            tmin: 0.01,
            alpha: 0.9,
            max_local_searches: 10_000,
            symmetric_perturbation: false,
        }
    }
}

impl AnnealConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.t0 > 1.0) || !self.t0.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "t0 must be finite and exceed 1, got {}",
                self.t0
            )));
        }
        if !(self.tmin > 0.0 && self.tmin < self.t0) {
            return Err(Error::InvalidConfig(format!(
                "tmin must lie in (0, t0), got tmin={} t0={}",
                self.tmin, self.t0
            )));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "alpha must lie in (0, 1), got {}",
                self.alpha
            )));
        }
        if self.max_local_searches == 0 {
            return Err(Error::InvalidConfig(
                "max_local_searches must be positive".into(),
            ));
        }
        Ok(())
    }

    /// Temperature after `j` cooling steps.
    pub fn temperature(&self, j: usize) -> f64 {
        self.t0 * self.alpha.powi(j as i32)
    }
}

/// Metropolis acceptance probability `min{1, exp((L_u − L_w) / T)}`.
pub fn metropolis(l_u: f64, l_w: f64, t: f64) -> f64 {
    let exponent = (l_u - l_w) / t;
    if exponent >= 0.0 {
        1.0
    } else {
        // underflows to 0 for very negative exponents
        exponent.exp()
    }
}

/// Returns `u + μ e_i` with `i` uniform on the coordinates and `μ` uniform
/// on `[0, 1)`.
pub fn perturb<R: Rng + ?Sized>(u: &[f64], rng: &mut R) -> Vec<f64> {
    let (i, mu) = draw_perturbation(rng, u.len(), false);
    apply_perturbation(u, i, mu)
}

/// Draws the coordinate index and signed step of a perturbation.
pub fn draw_perturbation<R: Rng + ?Sized>(rng: &mut R, n: usize, symmetric: bool) -> (usize, f64) {
    let i = rng.random_range(0..n);
    let mu: f64 = rng.random();
    if symmetric && rng.random_bool(0.5) {
        (i, -mu)
    } else {
        (i, mu)
    }
}

pub fn apply_perturbation(u: &[f64], i: usize, mu: f64) -> Vec<f64> {
    let mut w = u.to_vec();
    w[i] += mu;
    w
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RestartTrigger {
    /// The local solve from the user-supplied starting point.
    Initial,
    /// The trial point improved on the best value seen so far.
    NewBest,
    /// The trial point passed the Metropolis test.
    MetropolisAccept,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Restart {
    pub trigger: RestartTrigger,
    /// `L` at the point the local solve started from.
    pub start_value: f64,
    /// `L` at the local solution.
    pub local_value: f64,
    /// Best value after this local solve.
    pub best_after: f64,
    /// Temperature when the local solve was launched.
    pub temperature: f64,
    pub local_termination: Termination,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum HybridTermination {
    /// Temperature fell below `tmin`.
    Frozen,
    LocalCapHit,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HybridReport {
    pub u_best: Vec<f64>,
    pub l_best: f64,
    pub local_searches: usize,
    pub cooling_steps: usize,
    /// Trials accepted by the Metropolis test.
    pub accepted_uphill: usize,
    /// Trials that improved the best value.
    pub accepted_best: usize,
    pub trials: usize,
    pub function_evals: usize,
    pub final_temperature: f64,
    pub per_restart: Vec<Restart>,
    pub termination: HybridTermination,
}

/// Runs the hybrid method from `u0`.
///
/// The first local solve uses `seed` unchanged, so it reproduces
/// `asm::solve(obj, u0, lcfg, seed)` exactly; the annealing draws and the
/// seeds of later local solves come from a separate stream.
pub fn solve_hybrid<O: Objective + ?Sized>(
    obj: &O,
    u0: &[f64],
    acfg: &AnnealConfig,
    lcfg: &SolverConfig,
    seed: u64,
) -> Result<HybridReport> {
    acfg.validate()?;
    lcfg.validate()?;
    ensure_dim(obj.dim(), u0.len())?;
    ensure_finite(u0, "starting point")?;

    let mut anneal_rng: ChaCha8Rng = rng::seeded(seed);
    anneal_rng.set_stream(1);

    let l0 = obj.value(u0)?;
    let mut report = HybridReport {
        u_best: u0.to_vec(),
        l_best: l0,
        local_searches: 0,
        cooling_steps: 0,
        accepted_uphill: 0,
        accepted_best: 0,
        trials: 0,
        function_evals: 1,
        final_temperature: acfg.t0,
        per_restart: Vec::new(),
        termination: HybridTermination::Frozen,
    };

    let mut start = u0.to_vec();
    let mut start_value = l0;
    let mut trigger = RestartTrigger::Initial;
    let mut local_seed = seed;
    let mut temperature = acfg.t0;

    'restart: loop {
        if report.local_searches >= acfg.max_local_searches {
            report.termination = HybridTermination::LocalCapHit;
            break;
        }
        let local: SolveReport = asm::solve(obj, &start, lcfg, local_seed)?;
        report.local_searches += 1;
        report.function_evals += local.function_evals;
        if local.l_final < report.l_best {
            report.l_best = local.l_final;
            report.u_best.clone_from(&local.u_final);
        }
        report.per_restart.push(Restart {
            trigger,
            start_value,
            local_value: local.l_final,
            best_after: report.l_best,
            temperature,
            local_termination: local.termination,
        });
        let (u_local, l_local) = (local.u_final, local.l_final);

        loop {
            let (i, mu) = draw_perturbation(&mut anneal_rng, u_local.len(), acfg.symmetric_perturbation);
            let trial = apply_perturbation(&u_local, i, mu);
            let l_trial = obj.value(&trial)?;
            report.trials += 1;
            report.function_evals += 1;

            if l_trial < report.l_best {
                report.l_best = l_trial;
                report.u_best.clone_from(&trial);
                report.accepted_best += 1;
                start = trial;
                start_value = l_trial;
                trigger = RestartTrigger::NewBest;
                local_seed = anneal_rng.random();
                continue 'restart;
            }

            let beta: f64 = anneal_rng.random();
            if beta <= metropolis(l_local, l_trial, temperature) {
                report.accepted_uphill += 1;
                start = trial;
                start_value = l_trial;
                trigger = RestartTrigger::MetropolisAccept;
                local_seed = anneal_rng.random();
                continue 'restart;
            }

            report.cooling_steps += 1;
            temperature = acfg.temperature(report.cooling_steps);
            if temperature < acfg.tmin {
                report.termination = HybridTermination::Frozen;
                break 'restart;
            }
        }
    }

    report.final_temperature = temperature;
    Ok(report)
}
