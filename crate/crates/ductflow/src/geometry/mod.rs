//! The cross section Σ: node layouts, quadrature, boundary normals,
//! derivative stencils, interpolation, and the Neumann-Laplacian eigenbasis
//! the potential solver expands in.

mod cache;
mod eigen;
mod section;

pub use cache::{load_eigenbasis, save_eigenbasis};
pub use eigen::{build_eigenbasis, EigenBasis};
pub use section::{
    build_cross_section, BoundaryEntry, CrossSection, SectionKind, SectionSpec,
};
