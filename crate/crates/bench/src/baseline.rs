//! Classic subgradient method, used only as a comparison baseline.

use hemivar_core::asm::TrajectoryPoint;
use hemivar_core::{linalg, Objective, SolveReport, Termination};

use crate::config::PlainConfig;
use crate::error::{BenchError, Result};

/// `u ← u − t_k v / ‖v‖` with `t_k = t₀ / √k`, returning the best point seen.
///
/// Stops at once on a zero subgradient. The trajectory, when requested,
/// holds the best value after each iteration.
pub fn baseline_plain_subgradient<O: Objective + ?Sized>(
    obj: &O,
    u0: &[f64],
    cfg: &PlainConfig,
) -> Result<SolveReport> {
    if !(cfg.t0 > 0.0) || cfg.max_iters == 0 {
        return Err(BenchError::Config(
            "plain baseline needs t0 > 0 and max_iters > 0".into(),
        ));
    }
    let mut u = u0.to_vec();
    let mut best_u = u.clone();
    let mut best = f64::INFINITY;
    let mut l_initial = f64::NAN;
    let mut evals = 0;
    let mut trajectory = cfg.record_trajectory.then(Vec::new);
    let mut termination = Termination::SeriousCapHit;
    let mut iters = 0;

    for k in 1..=cfg.max_iters {
        let r = obj.eval(&u)?;
        evals += 1;
        if k == 1 {
            l_initial = r.value;
        }
        if r.value < best {
            best = r.value;
            best_u.clone_from(&u);
        }
        let norm = linalg::norm(&r.subgradient);
        let t = cfg.t0 / (k as f64).sqrt();
        if let Some(traj) = trajectory.as_mut() {
            traj.push(TrajectoryPoint {
                serious_step: k,
                value: best,
                vbar_norm: norm,
                eta: t,
                sigma: t,
            });
        }
        if norm == 0.0 {
            termination = Termination::Stationary;
            break;
        }
        linalg::axpy(-t / norm, &r.subgradient, &mut u);
        iters = k;
    }
    if termination == Termination::SeriousCapHit {
        // the last update has not been evaluated yet
        let l = obj.value(&u)?;
        evals += 1;
        if l < best {
            best = l;
            best_u = u;
        }
    }

    Ok(SolveReport {
        u_final: best_u,
        l_final: best,
        l_initial,
        serious_steps: iters,
        inner_steps_total: 0,
        eta_reductions: 0,
        eta_final: cfg.t0 / (iters.max(1) as f64).sqrt(),
        function_evals: evals,
        subgradient_evals: evals,
        trajectory,
        termination,
    })
}
