//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by geometry construction, field operations and the solver.
#[derive(Debug, Error)]
pub enum Error {
    /// Invalid section / grid descriptor.
    #[error("geometry: {0}")]
    Geometry(String),

    /// Mismatched grids, wrong lengths, axis out of range.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// A point left the domain beyond the snap tolerance, or an advection
    /// field pushed a characteristic out by more than a grid spacing.
    #[error("transport: {0}")]
    Transport(String),

    /// State left the admissible set (vacuum, sonic, reversed flow).
    #[error("admissibility: {0}")]
    Admissibility(String),

    /// Iterative linear solver failed to reach tolerance.
    #[error("linear solver did not converge after {iterations} iterations (relative residual {residual:.3e})")]
    SolverNonConvergence {
        iterations: usize,
        residual: f64,
        /// Relative residual after each iteration, for the report.
        history: Vec<f64>,
    },

    /// Eigensolver failed to reach tolerance.
    #[error("eigensolver did not converge: {0}")]
    EigenNonConvergence(String),

    /// Picard iteration exhausted max_iter.
    #[error("fixed point iteration did not converge in {max_iter} iterations (last distance {last_distance:.3e}, last factor {last_factor:.3})")]
    MaxIterExceeded {
        max_iter: usize,
        last_distance: f64,
        last_factor: f64,
    },

    /// Iterate left the solution ball.
    #[error("iterate left the solution ball at iteration {iteration}: {norm:.3e} > {delta:.3e} ({which})")]
    IterateLeftBall {
        iteration: usize,
        which: String,
        norm: f64,
        delta: f64,
    },

    /// Configuration file / profile descriptor problems.
    #[error("config: {0}")]
    Config(String),

    /// Boundary data failed a validation invariant.
    #[error("boundary data: {0}")]
    BoundaryData(String),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
