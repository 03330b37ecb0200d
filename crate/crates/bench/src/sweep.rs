//! Multistart load sweeps.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use hemivar_contact::{build_energy_problem, ContactFunctional, ContactProblem, LawSpec};
use hemivar_core::rng::seeded;
use hemivar_core::{asm, solve_hybrid, EvalResult, Objective, ScaledQuadPlusJ};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::baseline::baseline_plain_subgradient;
use crate::categorize::{categorize, Category};
use crate::config::{BenchConfig, SolverKind};
use crate::error::{BenchError, Result};

/// CSV header, in column order.
pub const CSV_COLUMNS: [&str; 8] = [
    "law",
    "load",
    "solver",
    "start",
    "energy",
    "wall_time_s",
    "fevals",
    "category",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseResult {
    pub law: String,
    pub load: f64,
    pub solver: SolverKind,
    /// 1-based start index.
    pub start: usize,
    /// Energy at the final point; NaN on error.
    pub energy: f64,
    pub wall_time_s: f64,
    pub fevals: usize,
    /// Set once every solver of the case has finished.
    pub category: Option<Category>,
    /// Solver stop reason, or the error message.
    pub termination: String,
    /// True when the stop reason is a safety cap or an error.
    pub cap_hit: bool,
    /// Final displacement over the free dofs.
    #[serde(skip)]
    pub u_final: Vec<f64>,
}

/// The energy of one (law, load) case in the coordinates the solvers work
/// in: `w = Lᵀu` with `A = LLᵀ` when scaling is on, `u` itself otherwise.
pub struct PreparedCase {
    problem: ContactProblem,
    scaled: Option<ScaledQuadPlusJ<ContactFunctional>>,
}

impl PreparedCase {
    pub fn new(problem: ContactProblem, cholesky_scaling: bool) -> Result<Self> {
        let scaled = if cholesky_scaling {
            Some(ScaledQuadPlusJ::new(&problem.energy)?)
        } else {
            None
        };
        Ok(Self { problem, scaled })
    }

    pub fn build(cfg: &BenchConfig, law: &LawSpec, load: f64) -> Result<Self> {
        let problem = build_energy_problem(&cfg.geometry, &cfg.material, &law.build()?, load)?;
        Self::new(problem, cfg.cholesky_scaling)
    }

    pub fn problem(&self) -> &ContactProblem {
        &self.problem
    }

    /// Displacement to solver coordinates.
    pub fn to_scaled(&self, u: &[f64]) -> Vec<f64> {
        self.scaled.as_ref().map_or_else(|| u.to_vec(), |s| s.to_scaled(u))
    }

    /// Solver coordinates to displacement.
    pub fn to_original(&self, w: &[f64]) -> Vec<f64> {
        self.scaled.as_ref().map_or_else(|| w.to_vec(), |s| s.to_original(w))
    }
}

impl Objective for PreparedCase {
    fn dim(&self) -> usize {
        self.problem.dim()
    }

    fn eval(&self, w: &[f64]) -> hemivar_core::Result<EvalResult> {
        match &self.scaled {
            Some(s) => s.eval(w),
            None => self.problem.eval(w),
        }
    }

    fn value(&self, w: &[f64]) -> hemivar_core::Result<f64> {
        match &self.scaled {
            Some(s) => s.value(w),
            None => self.problem.value(w),
        }
    }
}

/// Outcome of one solver run.
#[derive(Debug, Clone)]
pub struct SolverRun {
    /// Final point in solver coordinates.
    pub w: Vec<f64>,
    /// Final displacement.
    pub u: Vec<f64>,
    /// Energy at `w`.
    pub energy: f64,
    pub fevals: usize,
    pub termination: String,
    /// True when the stop reason is a safety cap.
    pub cap_hit: bool,
}

/// Independent 64-bit seed for `stream` derived from `base`.
pub fn derive_seed(base: u64, stream: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(base);
    rng.set_stream(stream);
    rng.random()
}

/// Seed shared by every solver and start of the case `(law, load)`.
pub fn case_seed(base: u64, law_index: usize, load_index: usize) -> u64 {
    derive_seed(base, ((law_index as u64) << 32) | load_index as u64)
}

/// Zero, the obstacle-free solution, then the obstacle-free solution scaled
/// by factors uniform on `[0.25, 1.5]`.
pub fn generate_starts(prob: &ContactProblem, n_starts: usize, seed: u64) -> Result<Vec<Vec<f64>>> {
    if n_starts == 0 {
        return Err(BenchError::Config("n_starts must be at least 1".into()));
    }
    let mut starts = vec![vec![0.0; prob.dim()]];
    if n_starts == 1 {
        return Ok(starts);
    }
    let linear = prob.linear_solution()?;
    let mut rng = seeded(seed);
    for _ in 2..n_starts {
        let s: f64 = rng.random_range(0.25..=1.5);
        starts.push(linear.iter().map(|x| s * x).collect());
    }
    starts.insert(1, linear);
    Ok(starts)
}

/// Runs one solver from `u0` (unscaled coordinates).
pub fn run_solver(
    case: &PreparedCase,
    solver: SolverKind,
    u0: &[f64],
    seed: u64,
    cfg: &BenchConfig,
) -> Result<SolverRun> {
    let w0 = case.to_scaled(u0);
    let (w, fevals, termination, cap_hit) = match solver {
        SolverKind::PlainSubgradient => {
            let r = baseline_plain_subgradient(case, &w0, &cfg.plain)?;
            (r.u_final, r.function_evals, format!("{:?}", r.termination), false)
        }
        SolverKind::Asm => {
            let r = asm::solve(case, &w0, &cfg.local, seed)?;
            let cap = r.termination != asm::Termination::EtaBelowEps;
            (r.u_final, r.function_evals, format!("{:?}", r.termination), cap)
        }
        SolverKind::Hybrid => {
            let r = solve_hybrid(case, &w0, &cfg.anneal, &cfg.local, seed)?;
            let cap = r.termination != hemivar_core::hybrid::HybridTermination::Frozen;
            (r.u_best, r.function_evals, format!("{:?}", r.termination), cap)
        }
    };
    Ok(SolverRun {
        u: case.to_original(&w),
        energy: case.value(&w)?,
        w,
        fevals,
        termination,
        cap_hit,
    })
}

/// All starts of one solver on one prepared case. Categories are left unset.
pub fn run_case(
    case: &PreparedCase,
    law: &str,
    load: f64,
    solver: SolverKind,
    starts: &[Vec<f64>],
    seed: u64,
    cfg: &BenchConfig,
) -> Vec<CaseResult> {
    starts
        .iter()
        .enumerate()
        .map(|(k, u0)| {
            let timer = Instant::now();
            let outcome = run_solver(case, solver, u0, derive_seed(seed, k as u64 + 1), cfg);
            let wall_time_s = timer.elapsed().as_secs_f64();
            let (u_final, fevals, termination, cap_hit, energy) = match outcome {
                Ok(r) => (r.u, r.fevals, r.termination, r.cap_hit, r.energy),
                Err(e) => (Vec::new(), 0, format!("error: {e}"), true, f64::NAN),
            };
            CaseResult {
                law: law.to_string(),
                load,
                solver,
                start: k + 1,
                energy,
                wall_time_s,
                fevals,
                category: None,
                termination,
                cap_hit,
                u_final,
            }
        })
        .collect()
}

/// Fills in the categories of all results of one (law, load) case.
pub fn assign_categories(results: &mut [CaseResult]) -> Result<f64> {
    let energies: Vec<f64> = results.iter().map(|r| r.energy).collect();
    let (best, cats) = categorize(&energies)?;
    for (r, c) in results.iter_mut().zip(cats) {
        r.category = Some(c);
    }
    Ok(best)
}

fn run_law_load(cfg: &BenchConfig, law_index: usize, load_index: usize) -> Vec<CaseResult> {
    let law = &cfg.laws[law_index];
    let name = law.name();
    let load = cfg.loads[load_index];
    let seed = case_seed(cfg.seed, law_index, load_index);
    let prepared =
        PreparedCase::build(cfg, law, load).and_then(|c| Ok((generate_starts(c.problem(), cfg.n_starts, seed)?, c)));
    let mut rows: Vec<CaseResult> = match prepared {
        Ok((starts, case)) => cfg
            .solvers
            .iter()
            .flat_map(|&s| run_case(&case, &name, load, s, &starts, seed, cfg))
            .collect(),
        Err(e) => cfg
            .solvers
            .iter()
            .flat_map(|&solver| {
                let name = &name;
                let e = &e;
                (1..=cfg.n_starts).map(move |start| CaseResult {
                    law: name.clone(),
                    load,
                    solver,
                    start,
                    energy: f64::NAN,
                    wall_time_s: 0.0,
                    fevals: 0,
                    category: None,
                    termination: format!("error: {e}"),
                    cap_hit: true,
                    u_final: Vec::new(),
                })
            })
            .collect(),
    };
    assign_categories(&mut rows).expect("a case always has rows");
    rows
}

/// Runs the full cartesian sweep and returns the rows sorted by
/// (law position in the config, load, solver, start).
pub fn sweep_results(cfg: &BenchConfig) -> Result<Vec<CaseResult>> {
    cfg.validate()?;
    let jobs: Vec<(usize, usize)> = (0..cfg.laws.len())
        .flat_map(|i| (0..cfg.loads.len()).map(move |j| (i, j)))
        .collect();
    let workers = cfg
        .workers
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
        .min(jobs.len());
    let next = AtomicUsize::new(0);
    let collected = Mutex::new(Vec::with_capacity(jobs.len()));
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let k = next.fetch_add(1, Ordering::Relaxed);
                let Some(&(i, j)) = jobs.get(k) else { break };
                let rows = run_law_load(cfg, i, j);
                collected.lock().unwrap().push(((i, j), rows));
            });
        }
    });
    let mut cases = collected.into_inner().unwrap();
    cases.sort_by_key(|c| c.0);
    let mut rows: Vec<CaseResult> = cases.into_iter().flat_map(|c| c.1).collect();
    // rows of one case are already contiguous; order solvers and starts
    rows.sort_by(|a, b| {
        let key = |r: &CaseResult| {
            (
                cfg.laws.iter().position(|l| l.name() == r.law),
                cfg.loads.iter().position(|&l| l == r.load),
            )
        };
        key(a)
            .cmp(&key(b))
            .then(a.solver.cmp(&b.solver))
            .then(a.start.cmp(&b.start))
    });
    Ok(rows)
}

/// Writes the result table as CSV.
pub fn write_csv(path: &Path, rows: &[CaseResult]) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(CSV_COLUMNS)?;
    for r in rows {
        w.write_record([
            r.law.clone(),
            r.load.to_string(),
            r.solver.name().to_string(),
            r.start.to_string(),
            r.energy.to_string(),
            format!("{:.6}", r.wall_time_s),
            r.fevals.to_string(),
            r.category.map_or("", Category::name).to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CapHit {
    pub law: String,
    pub load: f64,
    pub solver: SolverKind,
    pub start: usize,
    pub termination: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunMetadata {
    pub seed: u64,
    pub config_hash: String,
    pub timestamp: String,
    pub rows: usize,
    pub csv: PathBuf,
    pub total_wall_time_s: f64,
    pub cap_hits: Vec<CapHit>,
    pub config: BenchConfig,
}

#[derive(Debug)]
pub struct SweepOutput {
    pub rows: Vec<CaseResult>,
    pub csv_path: PathBuf,
    pub metadata_path: PathBuf,
    pub metadata: RunMetadata,
}

/// Metadata file next to the CSV: `sweep.csv` → `sweep.meta.json`.
pub fn metadata_path(csv_path: &Path) -> PathBuf {
    csv_path.with_extension("meta.json")
}

/// Runs the sweep and writes the CSV and the run metadata.
pub fn run_sweep(cfg: &BenchConfig) -> Result<SweepOutput> {
    let timer = Instant::now();
    let rows = sweep_results(cfg)?;
    let total_wall_time_s = timer.elapsed().as_secs_f64();
    let csv_path = cfg.output_path.clone();
    write_csv(&csv_path, &rows)?;
    let metadata = RunMetadata {
        seed: cfg.seed,
        config_hash: cfg.hash(),
        timestamp: chrono::Utc::now().to_rfc3339(),
        rows: rows.len(),
        csv: csv_path.clone(),
        total_wall_time_s,
        cap_hits: rows
            .iter()
            .filter(|r| r.cap_hit)
            .map(|r| CapHit {
                law: r.law.clone(),
                load: r.load,
                solver: r.solver,
                start: r.start,
                termination: r.termination.clone(),
            })
            .collect(),
        config: cfg.clone(),
    };
    let metadata_path = metadata_path(&csv_path);
    fs::write(&metadata_path, serde_json::to_string_pretty(&metadata)?)?;
    Ok(SweepOutput {
        rows,
        csv_path,
        metadata_path,
        metadata,
    })
}
