//! Interval meshes, P1 and piecewise-constant functions, tridiagonal
//! assembly and solves, and closed-form element integrals.
//!
//! Every integral here is computed exactly per element; integrands are
//! polynomials of degree at most two on each element.

mod functions;
mod integrals;
mod mesh;
mod tridiagonal;

pub use functions::{PiecewiseConstant, PiecewiseLinear};
pub use integrals::{diff_energy_norm_sq, energy, load_vector, norm_l2_sq};
pub use mesh::Mesh;
pub use tridiagonal::{
    assemble_mass, assemble_stiffness, solve_tridiagonal, TridiagonalLu, TridiagonalMatrix,
};
