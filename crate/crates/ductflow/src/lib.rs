//! Steady subsonic compressible Euler flow in a finite cylinder
//! Ω = (0,L) × Σ with an arbitrary simply-connected cross section Σ.
//!
//! The flow is computed as a perturbation of a uniform subsonic background
//! by a Picard iteration over three sub-steps:
//!
//! 1. transport of the Bernoulli quantity and entropy coefficient along
//!    streamlines (backward characteristic tracing),
//! 2. damped transport of the axial vorticity plus algebraic recovery of
//!    the cross components,
//! 3. a linearized deformation-curl solve for the velocity: a least-squares
//!    div-curl system for the rotational part and a spectral potential
//!    solve (Neumann eigenmodes of Σ × one-dimensional mode ODEs) for the
//!    irrotational correction.
//!
//! The converged state is audited against the full nonlinear Euler system.
//!
//! Everything numerical is generic over the scalar type via [`num::Scalar`];
//! the `*F64` aliases at the crate root are what the CLI uses.

pub mod error;
pub mod fields;
pub mod gas;
pub mod geometry;
pub mod num;
pub mod numerics;
pub mod profiles;
pub mod state;
pub mod transport;
pub mod vorticity;

pub use error::{Error, Result};

/// Concrete f64 aliases for the common entry types.
pub type CrossSectionF64 = geometry::CrossSection<f64>;
pub type SectionSpecF64 = geometry::SectionSpec<f64>;
pub type EigenBasisF64 = geometry::EigenBasis<f64>;
pub type Grid3F64 = fields::Grid3<f64>;
pub type ScalarFieldF64 = fields::ScalarField<f64>;
pub type VectorFieldF64 = fields::VectorField<f64>;
