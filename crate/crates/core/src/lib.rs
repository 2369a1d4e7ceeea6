//! Finite element solution of the 1D obstacle problem
//!
//! ```text
//! minimize J(v) = ½∫v'² − ∫f v   over v ∈ H¹₀(0,1), v ≥ φ,
//! ```
//!
//! with an Uzawa solver, a closed-form benchmark for constant data and a
//! computable functional upper bound on `J(v) − J(u)`.

// `!(x > 0.0)` is used on purpose so NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod benchmark;
pub mod dump;
pub mod error;
pub mod experiment;
pub mod fem;
pub mod majorant;
pub mod uzawa;

pub use benchmark::{ExactSolution, ProblemSpec, Regime};
pub use error::{Error, Result};
pub use experiment::{run_single, run_table, ExperimentRow, RunConfig};
pub use fem::{Mesh, PiecewiseConstant, PiecewiseLinear};
pub use majorant::{
    efficiency_indices, majorant_eval, minimize_majorant, InnerSolver, MajorantBreakdown,
    MajorantConfig, MajorantResult,
};
pub use uzawa::{project_to_feasible, uzawa_solve, UzawaConfig, UzawaResult};
