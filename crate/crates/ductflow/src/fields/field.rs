//! Scalar and vector fields on the cylinder grid, plus 3-D interpolation.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fields::grid::Grid3;
use crate::num::Scalar;

/// One value per (axial slice, section node), slice-major.
#[derive(Clone)]
pub struct ScalarField<F> {
    grid: Grid3<F>,
    data: Vec<F>,
}

impl<F: Scalar> std::fmt::Debug for ScalarField<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "ScalarField({:?}, sup={:.3e})", self.grid, self.linf_norm().as_f64())
    }
}

impl<F: Scalar> ScalarField<F> {
    pub fn zeros(grid: &Grid3<F>) -> Self {
        Self {
            grid: grid.clone(),
            data: vec![F::zero(); grid.node_count()],
        }
    }

    pub fn constant(grid: &Grid3<F>, c: F) -> Self {
        Self {
            grid: grid.clone(),
            data: vec![c; grid.node_count()],
        }
    }

    /// Sample `f(x1, x')` at every node.
    pub fn from_fn(grid: &Grid3<F>, f: impl Fn(F, [F; 2]) -> F + Sync) -> Self {
        let ns = grid.section().node_count();
        let nodes = grid.section().nodes();
        let data: Vec<F> = (0..grid.node_count())
            .into_par_iter()
            .map(|g| {
                let i1 = g / ns;
                let a = g % ns;
                f(grid.axial_coord(i1), nodes[a])
            })
            .collect();
        Self {
            grid: grid.clone(),
            data,
        }
    }

    pub fn from_data(grid: &Grid3<F>, data: Vec<F>) -> Result<Self> {
        if data.len() != grid.node_count() {
            return Err(Error::Dimension(format!(
                "field data has {} values, grid has {} nodes",
                data.len(),
                grid.node_count()
            )));
        }
        Ok(Self {
            grid: grid.clone(),
            data,
        })
    }

    pub fn grid(&self) -> &Grid3<F> {
        &self.grid
    }

    pub fn data(&self) -> &[F] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [F] {
        &mut self.data
    }

    pub fn slice(&self, i1: usize) -> &[F] {
        let ns = self.grid.section().node_count();
        &self.data[i1 * ns..(i1 + 1) * ns]
    }

    pub fn slice_mut(&mut self, i1: usize) -> &mut [F] {
        let ns = self.grid.section().node_count();
        &mut self.data[i1 * ns..(i1 + 1) * ns]
    }

    pub fn all_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    pub fn is_exactly_zero(&self) -> bool {
        self.data.iter().all(|v| *v == F::zero())
    }

    pub fn linf_norm(&self) -> F {
        self.data.iter().fold(F::zero(), |m, v| m.max(v.abs()))
    }

    pub fn map(&self, f: impl Fn(F) -> F + Sync) -> Self {
        Self {
            grid: self.grid.clone(),
            data: self.data.par_iter().map(|&v| f(v)).collect(),
        }
    }

    pub fn zip_map(&self, other: &Self, f: impl Fn(F, F) -> F + Sync) -> Self {
        debug_assert!(self.grid.same_grid(&other.grid));
        Self {
            grid: self.grid.clone(),
            data: self
                .data
                .par_iter()
                .zip(other.data.par_iter())
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    pub fn scaled(&self, a: F) -> Self {
        self.map(|v| v * a)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.zip_map(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.zip_map(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.zip_map(other, |a, b| a * b)
    }

    /// self += a * other
    pub fn axpy(&mut self, a: F, other: &Self) {
        debug_assert!(self.grid.same_grid(&other.grid));
        self.data
            .iter_mut()
            .zip(other.data.iter())
            .for_each(|(s, o)| *s += a * *o);
    }

    /// Volume quadrature of the field.
    pub fn integral(&self) -> F {
        self.grid.integral(&self.data)
    }

    /// Interpolate at an arbitrary point (cubic in x₁ × section rule).
    ///
    /// Points are snapped into Ω̄ within `snap_tolerance`; farther out is an
    /// error.
    pub fn interpolate(&self, point: [F; 3]) -> Result<F> {
        let grid = &self.grid;
        let tol = snap_tolerance(grid);
        let mut x1 = point[0];
        if x1 < F::zero() {
            if -x1 > tol {
                return Err(Error::Transport(format!(
                    "point x1={} outside the cylinder",
                    x1.as_f64()
                )));
            }
            x1 = F::zero();
        }
        if x1 > grid.length() {
            if x1 - grid.length() > tol {
                return Err(Error::Transport(format!(
                    "point x1={} outside the cylinder",
                    x1.as_f64()
                )));
            }
            x1 = grid.length();
        }
        let (xp, moved) = grid.section().snap_inside([point[1], point[2]]);
        if moved > tol {
            return Err(Error::Transport(format!(
                "point ({}, {}) outside the section by {}",
                point[1].as_f64(),
                point[2].as_f64(),
                moved.as_f64()
            )));
        }
        Ok(self.interpolate_snapped(x1, xp))
    }

    /// Interpolation for callers that have already projected the point into
    /// the closure of Ω (the characteristic tracer).
    pub(crate) fn interpolate_snapped(&self, x1: F, xp: [F; 2]) -> F {
        let grid = &self.grid;
        let n1 = grid.n1();
        let t = x1 / grid.h1();
        let i0 = ((t.floor().as_f64() as isize) - 1).clamp(0, n1 as isize - 4) as usize;
        let tloc = t - F::cst(i0 as f64);
        let w = cubic_weights(tloc);
        let mut acc = F::zero();
        for (d, wi) in w.iter().enumerate() {
            if *wi != F::zero() {
                acc += *wi * grid.section().interpolate(self.slice(i0 + d), xp);
            }
        }
        acc
    }
}

fn cubic_weights<F: Scalar>(t: F) -> [F; 4] {
    let c6 = F::cst(1.0 / 6.0);
    let c2 = F::cst(0.5);
    let t1 = t - F::one();
    let t2 = t - F::cst(2.0);
    let t3 = t - F::cst(3.0);
    [
        -c6 * t1 * t2 * t3,
        c2 * t * t2 * t3,
        -c2 * t * t1 * t3,
        c6 * t * t1 * t2,
    ]
}

pub(crate) fn snap_tolerance<F: Scalar>(grid: &Grid3<F>) -> F {
    (grid.length() + grid.section().area().sqrt()) * F::cst(1e-7)
}

/// Three scalar components: axial, x₂, x₃.
#[derive(Clone)]
pub struct VectorField<F> {
    pub components: [ScalarField<F>; 3],
}

impl<F: Scalar> std::fmt::Debug for VectorField<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "VectorField({:?})", self.components[0].grid)
    }
}

impl<F: Scalar> VectorField<F> {
    pub fn zeros(grid: &Grid3<F>) -> Self {
        Self {
            components: [
                ScalarField::zeros(grid),
                ScalarField::zeros(grid),
                ScalarField::zeros(grid),
            ],
        }
    }

    pub fn new(c1: ScalarField<F>, c2: ScalarField<F>, c3: ScalarField<F>) -> Self {
        debug_assert!(c1.grid().same_grid(c2.grid()) && c1.grid().same_grid(c3.grid()));
        Self {
            components: [c1, c2, c3],
        }
    }

    pub fn grid(&self) -> &Grid3<F> {
        self.components[0].grid()
    }

    pub fn all_finite(&self) -> bool {
        self.components.iter().all(|c| c.all_finite())
    }

    /// max over wall nodes of |n·(c₂,c₃)|.
    pub fn wall_tangency_residual(&self) -> F {
        wall_tangency_residual(&self.components[1], &self.components[2])
    }
}

/// max over wall nodes and slices of |n₂ v₂ + n₃ v₃|.
pub fn wall_tangency_residual<F: Scalar>(v2: &ScalarField<F>, v3: &ScalarField<F>) -> F {
    let grid = v2.grid();
    let mut worst = F::zero();
    for i1 in 0..grid.n1() {
        let s2 = v2.slice(i1);
        let s3 = v3.slice(i1);
        for b in grid.section().boundary() {
            worst = worst.max((b.normal[0] * s2[b.node] + b.normal[1] * s3[b.node]).abs());
        }
    }
    worst
}

/// Remove the wall-normal component of (v₂, v₃) at every wall node; returns
/// the largest removed magnitude. Corner nodes see both face normals and end
/// up with zero cross-flow, as the slip condition demands there.
pub fn project_wall_tangent<F: Scalar>(v2: &mut ScalarField<F>, v3: &mut ScalarField<F>) -> F {
    let grid = v2.grid().clone();
    let mut worst = F::zero();
    for i1 in 0..grid.n1() {
        let ns = grid.section().node_count();
        for b in grid.section().boundary() {
            let idx = i1 * ns + b.node;
            let vn = b.normal[0] * v2.data()[idx] + b.normal[1] * v3.data()[idx];
            worst = worst.max(vn.abs());
            v2.data_mut()[idx] -= vn * b.normal[0];
            v3.data_mut()[idx] -= vn * b.normal[1];
        }
    }
    worst
}
