//! Nonsmooth nonconvex minimization of `L(u) = ½<Au, u> + <b, u> + J(u)`.
//!
//! * [`asm`] implements the aggregate subgradient method, a local method
//!   that needs only one subgradient per evaluation and keeps exactly two
//!   subgradients per null step.
//! * [`hybrid`] wraps the local method in a simulated-annealing loop that
//!   picks restart points.
//! * [`objective`] defines the evaluation contract shared by both.

pub mod asm;
pub mod error;
pub mod hybrid;
pub mod linalg;
pub mod matrix;
pub mod objective;
pub mod precond;
pub mod rng;

pub use asm::{
    inner_loop, line_search, solve, stationarity_diagnostic, InnerOutcome, SolveReport,
    SolverConfig, Termination,
};
pub use error::{Error, Result};
pub use hybrid::{metropolis, perturb, solve_hybrid, AnnealConfig, HybridReport};
pub use matrix::SymMatrix;
pub use precond::{CholeskyScaled, LowerFactor, ScaledQuadPlusJ};
pub use objective::{
    check_secant, solve_lambda, EvalResult, FnObjective, NoTerm, NonsmoothTerm, Objective,
    QuadPlusJ,
};
