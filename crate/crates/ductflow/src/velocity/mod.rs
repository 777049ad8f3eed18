//! The velocity step: linearized deformation-curl solve.
//!
//! The new velocity splits as V = V̇ + ∇φ: V̇ carries the prescribed curl
//! (homogeneous div-curl least-squares solve), φ the compressible potential
//! correction (Neumann problem expanded in section eigenmodes with 1-D mode
//! ODEs along the axis).

mod assemble;
mod divcurl;
mod potential;

pub use assemble::{boundary_slopes, deformation_source, BoundarySlopes};
pub use divcurl::{solve_divcurl, DivCurlReport};
pub use potential::{solve_mode_bvp, solve_potential, PotentialSolution};

use crate::error::Result;
use crate::fields::{derivative, sobolev_norm, ScalarField, VectorField};
use crate::gas::GasState;
use crate::geometry::EigenBasis;
use crate::num::Scalar;
use crate::profiles::SectionProfile;
use crate::state::FlowState;
use crate::vorticity::VorticityTriple;

/// Inlet/outlet data of the velocity problem.
pub struct VelocityBoundaryData<'a, F> {
    pub sigma: F,
    pub m0: &'a SectionProfile<F>,
    pub m_l: &'a SectionProfile<F>,
    pub b0: &'a SectionProfile<F>,
    pub k0: &'a SectionProfile<F>,
}

/// Everything the velocity step produced, with its audits.
pub struct VelocityUpdate<F> {
    pub v1: ScalarField<F>,
    pub v2: ScalarField<F>,
    pub v3: ScalarField<F>,
    pub kappa: F,
    pub rotational: VectorField<F>,
    pub potential: PotentialSolution<F>,
    pub divcurl: DivCurlReport,
    /// L² residual of the deformation identity
    /// (1−M̄²)∂₁V₁+∂₂V₂+∂₃V₃ − F − M̄²∂₁V̇₁ … with the full V.
    pub deformation_residual: F,
}

/// Step 3: solve the linearized deformation-curl system.
#[allow(clippy::too_many_arguments)]
pub fn solve_velocity_update<F: Scalar>(
    vbar: &FlowState<F>,
    omega: &VorticityTriple<F>,
    v4: &ScalarField<F>,
    v5: &ScalarField<F>,
    data: &VelocityBoundaryData<'_, F>,
    gas: &GasState<F>,
    basis: &EigenBasis<F>,
    warm_start: Option<&VectorField<F>>,
    cg_rel_tol: F,
) -> Result<VelocityUpdate<F>> {
    let grid = vbar.grid().clone();

    // rotational part
    let (rotational, divcurl) = solve_divcurl(omega, warm_start, cg_rel_tol)?;

    // potential source: deformation forcing plus the rotational correction
    let f_deform = deformation_source(vbar, gas)?;
    let mut f_tilde = f_deform.clone();
    f_tilde.axpy(
        gas.mach_sq(),
        &derivative(&rotational.components[0], 1)?,
    );

    // end data and the solvability shift
    let slopes = boundary_slopes(vbar, v4, v5, data, gas, basis, &f_tilde)?;

    let potential = solve_potential(&f_tilde, &slopes.inlet, &slopes.outlet, slopes.kappa, gas, basis, true)?;

    let v1 = rotational.components[0].add(&potential.w.components[0]);
    let v2 = rotational.components[1].add(&potential.w.components[1]);
    let v3 = rotational.components[2].add(&potential.w.components[2]);

    // deformation-identity audit with the assembled velocity
    let mut res = derivative(&v1, 1)?.scaled(gas.one_minus_mach_sq());
    res.axpy(F::one(), &derivative(&v2, 2)?);
    res.axpy(F::one(), &derivative(&v3, 3)?);
    res.axpy(-F::one(), &f_deform);
    res.axpy(
        -gas.mach_sq(),
        &derivative(&rotational.components[0], 1)?,
    );
    let deformation_residual = sobolev_norm(&res, 0)?;
    let _ = grid;

    Ok(VelocityUpdate {
        v1,
        v2,
        v3,
        kappa: slopes.kappa,
        rotational,
        potential,
        divcurl,
        deformation_residual,
    })
}
