//! Transport along streamlines by backward characteristic tracing.
//!
//! Both transport problems of the scheme reduce to tracing the cross-flow
//! ODE  dx̄ᵢ/dτ = wᵢ(τ, x̄)  backward from a query station to the entrance
//! (RK4, step h₁/2) and evaluating the inlet datum at the foot point. The
//! damped, sourced equation additionally accumulates
//!
//!   ω(x) = η(foot)·e^{−∫₀^{x₁} μ dτ} + ∫₀^{x₁} R(τ,x̄(τ)) e^{−∫_τ^{x₁} μ} dτ
//!
//! with all integrals taken by 4th-order panel rules on the trace samples.
//!
//! Exact wall-tangent advection grazes ∂Σ; numerical drift is projected back
//! along the normal and audited: drift beyond 10·h₁⁴ per step increments a
//! warning counter, drift beyond one section spacing is a hard error.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fields::{wall_tangency_residual, Grid3, ScalarField};
use crate::num::Scalar;
use crate::numerics::quad::cumulative_integral;

/// Largest advection-ratio magnitude the subsonic smallness regime allows.
const MAX_ADVECTION: f64 = 0.5;
/// Wall tangency tolerance for a valid advection field.
const TANGENCY_TOL: f64 = 1e-8;

/// Cross-flow ratios w = (w₂, w₃) with wall tangency n·w = 0.
pub struct AdvectionField<F> {
    w2: ScalarField<F>,
    w3: ScalarField<F>,
}

impl<F: Scalar> AdvectionField<F> {
    pub fn new(w2: ScalarField<F>, w3: ScalarField<F>) -> Result<Self> {
        w2.grid().check_same(w3.grid())?;
        if !w2.all_finite() || !w3.all_finite() {
            return Err(Error::Transport("advection field has non-finite values".into()));
        }
        let sup = w2.linf_norm().max(w3.linf_norm());
        if sup > F::cst(MAX_ADVECTION) {
            return Err(Error::Transport(format!(
                "advection ratio {:.3e} exceeds the subsonic smallness bound {MAX_ADVECTION}",
                sup.as_f64()
            )));
        }
        let tangency = wall_tangency_residual(&w2, &w3);
        if tangency > F::cst(TANGENCY_TOL) {
            return Err(Error::Transport(format!(
                "advection field is not wall tangent: max |n·w| = {:.3e}",
                tangency.as_f64()
            )));
        }
        Ok(Self { w2, w3 })
    }

    /// Test hook: skip validation.
    #[doc(hidden)]
    pub fn new_unchecked(w2: ScalarField<F>, w3: ScalarField<F>) -> Self {
        Self { w2, w3 }
    }

    pub fn grid(&self) -> &Grid3<F> {
        self.w2.grid()
    }

    fn eval(&self, x1: F, p: [F; 2]) -> [F; 2] {
        let (q, _) = self.grid().section().snap_inside(p);
        [
            self.w2.interpolate_snapped(x1, q),
            self.w3.interpolate_snapped(x1, q),
        ]
    }
}

/// A traced characteristic through one query point.
#[derive(Debug, Clone)]
pub struct Characteristic<F> {
    pub query: [F; 3],
    /// Cross-section positions at the axial stations 0, h₁, 2h₁, … up to the
    /// query station (the last entry equals the query point).
    pub stations: Vec<[F; 2]>,
    pub foot: [F; 2],
    pub projection_warnings: usize,
    pub max_projection: F,
}

/// Audit counters accumulated over a transported field.
#[derive(Debug, Clone, Copy, Default)]
pub struct TransportAudit {
    pub wall_projection_warnings: usize,
    pub max_projection: f64,
}

impl TransportAudit {
    fn absorb(&mut self, other: &TransportAudit) {
        self.wall_projection_warnings += other.wall_projection_warnings;
        self.max_projection = self.max_projection.max(other.max_projection);
    }
}

struct StepRecord<F> {
    tau: F,
    point: [F; 2],
}

/// Backward RK4 trace from (x1, p0) to the entrance; records every step
/// point (spacing h₁/2). Returns the records in backward order (query
/// first) plus the audit.
fn trace_steps<F: Scalar>(
    w: &AdvectionField<F>,
    x1: F,
    p0: [F; 2],
) -> Result<(Vec<StepRecord<F>>, TransportAudit)> {
    let grid = w.grid();
    let h = grid.h1() * F::cst(0.5);
    let warn_at = F::cst(10.0) * grid.h1().powi(4);
    let fail_at = grid.section().min_spacing();
    let mut audit = TransportAudit::default();

    let mut records = Vec::new();
    let (mut p, d0) = grid.section().snap_inside(p0);
    if d0 > F::cst(1e-12) * fail_at.max(F::one()) {
        return Err(Error::Transport(format!(
            "query point outside the section by {:.3e}",
            d0.as_f64()
        )));
    }
    let mut tau = x1;
    records.push(StepRecord { tau, point: p });
    while tau > F::zero() {
        let step = h.min(tau);
        let half = step * F::cst(0.5);
        let k1 = w.eval(tau, p);
        let k2 = w.eval(tau - half, [p[0] - half * k1[0], p[1] - half * k1[1]]);
        let k3 = w.eval(tau - half, [p[0] - half * k2[0], p[1] - half * k2[1]]);
        let k4 = w.eval(tau - step, [p[0] - step * k3[0], p[1] - step * k3[1]]);
        let c = step / F::cst(6.0);
        let q = [
            p[0] - c * (k1[0] + F::cst(2.0) * (k2[0] + k3[0]) + k4[0]),
            p[1] - c * (k1[1] + F::cst(2.0) * (k2[1] + k3[1]) + k4[1]),
        ];
        let (q, moved) = grid.section().snap_inside(q);
        if moved > fail_at {
            return Err(Error::Transport(format!(
                "characteristic left the section by {:.3e} (> spacing {:.3e}); advection field inconsistent",
                moved.as_f64(),
                fail_at.as_f64()
            )));
        }
        if moved > warn_at {
            audit.wall_projection_warnings += 1;
        }
        audit.max_projection = audit.max_projection.max(moved.as_f64());
        p = q;
        tau = tau - step;
        if tau < h * F::cst(1e-12) {
            tau = F::zero();
        }
        records.push(StepRecord { tau, point: p });
    }
    Ok((records, audit))
}

/// Trace the characteristic through an arbitrary query point.
pub fn trace_characteristic<F: Scalar>(
    w: &AdvectionField<F>,
    query: [F; 3],
) -> Result<Characteristic<F>> {
    let grid = w.grid();
    if query[0] < -F::cst(1e-12) || query[0] > grid.length() * (F::one() + F::cst(1e-12)) {
        return Err(Error::Transport(format!(
            "query station x1={} outside [0, L]",
            query[0].as_f64()
        )));
    }
    let (records, audit) = trace_steps(w, query[0], [query[1], query[2]])?;
    let h1 = grid.h1();
    // pick out the axial stations j*h1 <= x1, ascending
    let mut stations = Vec::new();
    for rec in records.iter().rev() {
        let t = rec.tau / h1;
        if (t - t.round()).abs() < F::cst(1e-9) {
            stations.push(rec.point);
        }
    }
    if stations.is_empty() || records.last().unwrap().tau != F::zero() {
        stations.insert(0, records.last().unwrap().point);
    }
    let foot = records.last().unwrap().point;
    // make sure the query station is represented exactly
    if let Some(last) = stations.last_mut() {
        *last = [query[1], query[2]];
    }
    Ok(Characteristic {
        query,
        stations,
        foot,
        projection_warnings: audit.wall_projection_warnings,
        max_projection: F::cst(audit.max_projection),
    })
}

/// Undamped transport: f(x₁, x′) = η(foot of the characteristic).
pub fn solve_scalar_transport<F, P>(
    w: &AdvectionField<F>,
    inlet: &P,
) -> Result<(ScalarField<F>, TransportAudit)>
where
    F: Scalar,
    P: Fn([F; 2]) -> F + Sync,
{
    let grid = w.grid().clone();
    let ns = grid.section().node_count();
    let nodes = grid.section().nodes();
    let results: Result<Vec<(F, TransportAudit)>> = (0..grid.node_count())
        .into_par_iter()
        .map(|g| {
            let i1 = g / ns;
            let p = nodes[g % ns];
            if i1 == 0 {
                return Ok((inlet(p), TransportAudit::default()));
            }
            let (records, audit) = trace_steps(w, grid.axial_coord(i1), p)?;
            Ok((inlet(records.last().unwrap().point), audit))
        })
        .collect();
    let results = results?;
    let mut audit = TransportAudit::default();
    let mut data = Vec::with_capacity(results.len());
    for (v, a) in results {
        audit.absorb(&a);
        data.push(v);
    }
    Ok((ScalarField::from_data(&grid, data)?, audit))
}

/// Damped, sourced transport along the same characteristics (Duhamel form).
pub fn solve_damped_transport<F, P>(
    w: &AdvectionField<F>,
    damping: &ScalarField<F>,
    source: &ScalarField<F>,
    inlet: &P,
) -> Result<(ScalarField<F>, TransportAudit)>
where
    F: Scalar,
    P: Fn([F; 2]) -> F + Sync,
{
    let grid = w.grid().clone();
    grid.check_same(damping.grid())?;
    grid.check_same(source.grid())?;
    let ns = grid.section().node_count();
    let nodes = grid.section().nodes();
    let h = grid.h1() * F::cst(0.5);
    let results: Result<Vec<(F, TransportAudit)>> = (0..grid.node_count())
        .into_par_iter()
        .map(|g| {
            let i1 = g / ns;
            let p = nodes[g % ns];
            if i1 == 0 {
                return Ok((inlet(p), TransportAudit::default()));
            }
            let (records, audit) = trace_steps(w, grid.axial_coord(i1), p)?;
            // ascending-τ samples of μ and R along the trace
            let n = records.len();
            let mut mu = Vec::with_capacity(n);
            let mut src = Vec::with_capacity(n);
            for rec in records.iter().rev() {
                mu.push(damping.interpolate_snapped(rec.tau, rec.point));
                src.push(source.interpolate_snapped(rec.tau, rec.point));
            }
            let m = cumulative_integral(&mu, h);
            let total = *m.last().unwrap();
            let weighted: Vec<F> = src
                .iter()
                .zip(m.iter())
                .map(|(r, mk)| *r * (*mk).exp())
                .collect();
            let s = *cumulative_integral(&weighted, h).last().unwrap();
            let foot = records.last().unwrap().point;
            Ok(((inlet(foot) + s) * (-total).exp(), audit))
        })
        .collect();
    let results = results?;
    let mut audit = TransportAudit::default();
    let mut data = Vec::with_capacity(results.len());
    for (v, a) in results {
        audit.absorb(&a);
        data.push(v);
    }
    Ok((ScalarField::from_data(&grid, data)?, audit))
}
