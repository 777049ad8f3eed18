//! The iterate of the fixed-point scheme: five perturbation fields on the
//! cylinder, and the physical state they induce.

use crate::error::{Error, Result};
use crate::fields::{
    derivative, project_wall_tangent, sobolev_norm, wall_tangency_residual, Grid3, ScalarField,
    VectorField,
};
use crate::gas::{density_map, GasState};
use crate::num::Scalar;
use crate::transport::AdvectionField;

/// Perturbation of the uniform background: velocity components, Bernoulli
/// quantity and entropy coefficient.
#[derive(Clone)]
pub struct FlowState<F> {
    pub du1: ScalarField<F>,
    pub du2: ScalarField<F>,
    pub du3: ScalarField<F>,
    pub db: ScalarField<F>,
    pub dk: ScalarField<F>,
    /// Picard iteration that produced this state (0 = initial).
    pub iteration: usize,
}

/// Physical fields recovered from a perturbation state.
pub struct PhysicalState<F> {
    pub density: ScalarField<F>,
    pub velocity: VectorField<F>,
    pub pressure: ScalarField<F>,
    pub bernoulli: ScalarField<F>,
    pub entropy: ScalarField<F>,
    pub max_mach_sq: F,
}

impl<F: Scalar> FlowState<F> {
    pub fn zeros(grid: &Grid3<F>) -> Self {
        Self {
            du1: ScalarField::zeros(grid),
            du2: ScalarField::zeros(grid),
            du3: ScalarField::zeros(grid),
            db: ScalarField::zeros(grid),
            dk: ScalarField::zeros(grid),
            iteration: 0,
        }
    }

    pub fn grid(&self) -> &Grid3<F> {
        self.du1.grid()
    }

    pub fn components(&self) -> [&ScalarField<F>; 5] {
        [&self.du1, &self.du2, &self.du3, &self.db, &self.dk]
    }

    /// Σᵢ ‖Vᵢ‖ₖ over the five components.
    pub fn norm_sum(&self, order: usize) -> Result<F> {
        let mut acc = F::zero();
        for c in self.components() {
            acc += sobolev_norm(c, order)?;
        }
        Ok(acc)
    }

    /// H²-type distance Σᵢ ‖Vᵢ − V̄ᵢ‖₂ (the contraction metric).
    pub fn h2_distance(&self, other: &Self) -> Result<F> {
        let mut acc = F::zero();
        for (a, b) in self.components().iter().zip(other.components().iter()) {
            acc += sobolev_norm(&a.sub(b), 2)?;
        }
        Ok(acc)
    }

    /// Total axial velocity ū + V₁.
    pub fn axial_total(&self, gas: &GasState<F>) -> ScalarField<F> {
        self.du1.map(|v| gas.u + v)
    }

    /// |u|² = (ū+V₁)² + V₂² + V₃².
    pub fn speed_sq(&self, gas: &GasState<F>) -> ScalarField<F> {
        let u1 = self.axial_total(gas);
        let mut s = u1.mul(&u1);
        s.axpy(F::one(), &self.du2.mul(&self.du2));
        s.axpy(F::one(), &self.du3.mul(&self.du3));
        s
    }

    /// (H(V̄))^{γ−1} = (γ−1)/(γ(K̄+V₅)) · (B̄+V₄ − |u|²/2), the closed-form
    /// density power used by the vorticity formulas.
    pub fn density_power(&self, gas: &GasState<F>) -> Result<ScalarField<F>> {
        let speed_sq = self.speed_sq(gas);
        let b_bar = gas.bernoulli();
        let mut bad = false;
        let arg = self.db.zip_map(&speed_sq, |db, q| b_bar + db - q * F::cst(0.5));
        let k_tot = self.dk.map(|v| gas.k + v);
        let out = arg.zip_map(&k_tot, |a, k| {
            (gas.gamma - F::one()) / (gas.gamma * k) * a
        });
        for (&a, &k) in arg.data().iter().zip(k_tot.data().iter()) {
            if !(a > F::zero()) || !(k > F::zero()) {
                bad = true;
                break;
            }
        }
        if bad {
            return Err(Error::Admissibility(
                "state left the admissible set: B − |u|²/2 or K non-positive".into(),
            ));
        }
        Ok(out)
    }

    /// Sound-speed-squared field c² = γ K H^{γ−1} = (γ−1)(B̄+V₄ − |u|²/2).
    pub fn sound_speed_sq(&self, gas: &GasState<F>) -> Result<ScalarField<F>> {
        let speed_sq = self.speed_sq(gas);
        let b_bar = gas.bernoulli();
        let c2 = self
            .db
            .zip_map(&speed_sq, |db, q| (gas.gamma - F::one()) * (b_bar + db - q * F::cst(0.5)));
        if c2.data().iter().any(|v| !(*v > F::zero())) {
            return Err(Error::Admissibility(
                "state left the admissible set: non-positive sound speed".into(),
            ));
        }
        Ok(c2)
    }

    /// Largest local Mach² of the state.
    pub fn max_mach_sq(&self, gas: &GasState<F>) -> Result<F> {
        let c2 = self.sound_speed_sq(gas)?;
        let q = self.speed_sq(gas);
        Ok(q
            .data()
            .iter()
            .zip(c2.data().iter())
            .fold(F::zero(), |m, (&q, &c)| m.max(q / c)))
    }

    /// Admissibility: positive axial velocity and subsonic everywhere.
    pub fn check_admissible(&self, gas: &GasState<F>) -> Result<()> {
        let u1 = self.axial_total(gas);
        if u1.data().iter().any(|v| !(*v > F::zero())) {
            return Err(Error::Admissibility(
                "axial velocity vanished or reversed".into(),
            ));
        }
        let mach_sq = self.max_mach_sq(gas)?;
        if !(mach_sq < F::one()) {
            return Err(Error::Admissibility(format!(
                "local Mach² reached {:.4} ≥ 1",
                mach_sq.as_f64()
            )));
        }
        Ok(())
    }

    /// Cross-flow ratios wᵢ = Vᵢ/(ū+V₁) used by both transport problems.
    pub fn advection(&self, gas: &GasState<F>) -> Result<AdvectionField<F>> {
        let u1 = self.axial_total(gas);
        if u1.data().iter().any(|v| !(*v > F::zero())) {
            return Err(Error::Admissibility(
                "axial velocity vanished or reversed".into(),
            ));
        }
        let w2 = self.du2.zip_map(&u1, |v, u| v / u);
        let w3 = self.du3.zip_map(&u1, |v, u| v / u);
        AdvectionField::new(w2, w3)
    }

    pub fn wall_tangency_residual(&self) -> F {
        wall_tangency_residual(&self.du2, &self.du3)
    }

    /// Enforce the slip condition exactly at wall nodes; returns the largest
    /// removed normal component.
    pub fn project_wall_tangent(&mut self) -> F {
        project_wall_tangent(&mut self.du2, &mut self.du3)
    }

    /// Recover (ρ, u, P, B, K) from the perturbations.
    pub fn recover(&self, gas: &GasState<F>) -> Result<PhysicalState<F>> {
        let grid = self.grid().clone();
        let speed_sq = self.speed_sq(gas);
        let mut rho = Vec::with_capacity(grid.node_count());
        let mut pressure = Vec::with_capacity(grid.node_count());
        let mut max_mach_sq = F::zero();
        for i in 0..grid.node_count() {
            let b = gas.bernoulli() + self.db.data()[i];
            let k = gas.k + self.dk.data()[i];
            let q = speed_sq.data()[i];
            let eval = density_map(b, k, q, gas)?;
            max_mach_sq = max_mach_sq.max(eval.mach_sq);
            rho.push(eval.density);
            pressure.push(k * eval.density.powf(gas.gamma));
        }
        Ok(PhysicalState {
            density: ScalarField::from_data(&grid, rho)?,
            velocity: VectorField::new(
                self.axial_total(gas),
                self.du2.clone(),
                self.du3.clone(),
            ),
            pressure: ScalarField::from_data(&grid, pressure)?,
            bernoulli: self.db.map(|v| gas.bernoulli() + v),
            entropy: self.dk.map(|v| gas.k + v),
            max_mach_sq,
        })
    }
}

/// Discrete residuals of the five steady Euler conservation laws, evaluated
/// on a recovered physical state with the 4th-order stencils.
pub struct EulerResidual<F> {
    /// L² norms: mass, three momentum components, energy.
    pub l2: [F; 5],
    /// Supremum norms in the same order.
    pub sup: [F; 5],
}

pub fn euler_residual<F: Scalar>(
    state: &FlowState<F>,
    gas: &GasState<F>,
) -> Result<EulerResidual<F>> {
    let phys = state.recover(gas)?;
    let rho = &phys.density;
    let p = &phys.pressure;
    let u = &phys.velocity.components;
    let gamma = gas.gamma;

    // energy flux density: (ρ|u|²/2 + γP/(γ−1)) uᵢ
    let half_rho_q = {
        let mut q = u[0].mul(&u[0]);
        q.axpy(F::one(), &u[1].mul(&u[1]));
        q.axpy(F::one(), &u[2].mul(&u[2]));
        q.mul(rho).scaled(F::cst(0.5))
    };
    let enthalpy_term = p.scaled(gamma / (gamma - F::one()));
    let energy_density = half_rho_q.add(&enthalpy_term);

    let div3 = |f1: &ScalarField<F>, f2: &ScalarField<F>, f3: &ScalarField<F>| -> Result<ScalarField<F>> {
        let mut d = derivative(f1, 1)?;
        d.axpy(F::one(), &derivative(f2, 2)?);
        d.axpy(F::one(), &derivative(f3, 3)?);
        Ok(d)
    };

    let mass = div3(&rho.mul(&u[0]), &rho.mul(&u[1]), &rho.mul(&u[2]))?;
    let mom1 = div3(
        &rho.mul(&u[0]).mul(&u[0]).add(p),
        &rho.mul(&u[0]).mul(&u[1]),
        &rho.mul(&u[0]).mul(&u[2]),
    )?;
    let mom2 = div3(
        &rho.mul(&u[0]).mul(&u[1]),
        &rho.mul(&u[1]).mul(&u[1]).add(p),
        &rho.mul(&u[1]).mul(&u[2]),
    )?;
    let mom3 = div3(
        &rho.mul(&u[0]).mul(&u[2]),
        &rho.mul(&u[1]).mul(&u[2]),
        &rho.mul(&u[2]).mul(&u[2]).add(p),
    )?;
    let energy = div3(
        &energy_density.mul(&u[0]),
        &energy_density.mul(&u[1]),
        &energy_density.mul(&u[2]),
    )?;

    let mut l2 = [F::zero(); 5];
    let mut sup = [F::zero(); 5];
    for (k, r) in [mass, mom1, mom2, mom3, energy].iter().enumerate() {
        l2[k] = sobolev_norm(r, 0)?;
        sup[k] = r.linf_norm();
    }
    Ok(EulerResidual { l2, sup })
}

/// Mass flux through each cross section: m(x₁) = ∫_Σ ρu₁ dx′.
pub fn mass_flux_profile<F: Scalar>(state: &FlowState<F>, gas: &GasState<F>) -> Result<Vec<F>> {
    let phys = state.recover(gas)?;
    let flux = phys.density.mul(&phys.velocity.components[0]);
    let grid = state.grid();
    Ok((0..grid.n1())
        .map(|i1| grid.section().integral(flux.slice(i1)))
        .collect())
}
