//! Benchmark harness for the beam contact problem: multistart load sweeps
//! over several contact laws and solvers, result categories, CSV output.

pub mod baseline;
pub mod categorize;
pub mod config;
pub mod error;
pub mod sweep;

pub use baseline::baseline_plain_subgradient;
pub use categorize::{categorize, classify, Category, BEST_TOL};
pub use config::{BenchConfig, PlainConfig, SolverKind};
pub use error::{BenchError, Result};
pub use sweep::{
    assign_categories, case_seed, derive_seed, generate_starts, run_case, run_solver, run_sweep,
    sweep_results, write_csv, CaseResult, PreparedCase, RunMetadata, SolverRun, SweepOutput,
    CSV_COLUMNS,
};
