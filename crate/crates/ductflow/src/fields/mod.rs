//! Tensor-grid fields on Ω = (0,L) × Σ and their discrete calculus.

mod calculus;
mod export;
mod field;
mod grid;

pub use calculus::{derivative, sobolev_norm};
pub use export::{read_scalar_csv, write_scalar_csv, write_vtk};
pub use field::{project_wall_tangent, wall_tangency_residual, ScalarField, VectorField};
pub use grid::Grid3;
