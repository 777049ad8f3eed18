//! Low-level numerical kernels shared by the geometry, field and solver
//! modules: finite-difference weight generation, quadrature rules, banded and
//! dense symmetric solvers, Bessel functions and a sparse least-squares CG.

pub mod bessel;
pub mod csr;
pub mod jacobi;
pub mod lsq;
pub mod quad;
pub mod stencil;
pub mod tridiag;
