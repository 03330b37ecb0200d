//! Beam on a layered soft foundation: mesh, plane-strain elasticity, contact
//! law, and the assembled energy as an objective for the solvers in
//! `hemivar-core`.

pub mod error;
pub mod export;
pub mod functional;
pub mod geometry;
pub mod law;
pub mod load;
pub mod mesh;
pub mod problem;
pub mod stiffness;

pub use error::{ContactError, Result};
pub use export::{export_mesh, write_elements, write_nodes};
pub use functional::{ContactFunctional, TraceNode};
pub use geometry::{Geometry, Material};
pub use law::{ContactLaw, LayeredParams, PROTECTIVE_DEPTH};
pub use load::{assemble_load, assemble_load_full, traction};
pub use mesh::{build_mesh, BoundaryPart, Mesh};
pub use problem::{build_energy_problem, ContactProblem, LawSpec, ProblemConfig};
pub use stiffness::{assemble_stiffness, assemble_stiffness_full, element_stiffness};
