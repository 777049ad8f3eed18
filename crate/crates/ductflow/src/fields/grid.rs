//! The cylinder grid: axial nodes × cross-section nodes.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::geometry::CrossSection;
use crate::num::Scalar;
use crate::numerics::quad::gregory_weights;
use crate::numerics::stencil::{first_derivative_rows, StencilRow};

/// Ω = (0,L) × Σ with `n1` axial nodes (x₁ = 0 and x₁ = L included).
///
/// Index set roles: slice 0 is the entrance, slice n1-1 the exit, the
/// section boundary sweeps out the wall. Fields are slice-major: all Σ
/// nodes of one axial station are contiguous.
#[derive(Clone)]
pub struct Grid3<F> {
    length: F,
    n1: usize,
    h1: F,
    section: Arc<CrossSection<F>>,
    axial_rows: Arc<Vec<StencilRow<F>>>,
    axial_weights: Arc<Vec<F>>,
}

impl<F: Scalar> Grid3<F> {
    pub fn new(length: F, n1: usize, section: Arc<CrossSection<F>>) -> Result<Self> {
        if !(length > F::zero()) {
            return Err(Error::Geometry("cylinder length must be positive".into()));
        }
        if n1 < 9 {
            return Err(Error::Geometry(format!(
                "need at least 9 axial nodes, got {n1}"
            )));
        }
        let h1 = length / F::of_usize(n1 - 1);
        let axial_rows = Arc::new(first_derivative_rows(n1, h1));
        let axial_weights = Arc::new(gregory_weights(n1, h1));
        Ok(Self {
            length,
            n1,
            h1,
            section,
            axial_rows,
            axial_weights,
        })
    }

    pub fn length(&self) -> F {
        self.length
    }

    pub fn n1(&self) -> usize {
        self.n1
    }

    pub fn h1(&self) -> F {
        self.h1
    }

    pub fn section(&self) -> &CrossSection<F> {
        &self.section
    }

    pub fn section_arc(&self) -> Arc<CrossSection<F>> {
        self.section.clone()
    }

    pub fn node_count(&self) -> usize {
        self.n1 * self.section.node_count()
    }

    pub fn axial_coord(&self, i1: usize) -> F {
        F::of_usize(i1) * self.h1
    }

    pub(crate) fn axial_rows(&self) -> &[StencilRow<F>] {
        &self.axial_rows
    }

    /// 4th-order axial quadrature weights (sum is exactly L).
    pub fn axial_weights(&self) -> &[F] {
        &self.axial_weights
    }

    /// Volume quadrature of nodal values.
    pub fn integral(&self, data: &[F]) -> F {
        let ns = self.section.node_count();
        debug_assert_eq!(data.len(), self.n1 * ns);
        let wsec = self.section.weights();
        let mut acc = F::zero();
        for i1 in 0..self.n1 {
            let slice = &data[i1 * ns..(i1 + 1) * ns];
            let mut s = F::zero();
            for (w, v) in wsec.iter().zip(slice.iter()) {
                s += *w * *v;
            }
            acc += self.axial_weights[i1] * s;
        }
        acc
    }

    pub fn same_grid(&self, other: &Self) -> bool {
        self.n1 == other.n1
            && self.length == other.length
            && (Arc::ptr_eq(&self.section, &other.section)
                || self.section.key() == other.section.key())
    }

    pub fn check_same(&self, other: &Self) -> Result<()> {
        if self.same_grid(other) {
            Ok(())
        } else {
            Err(Error::Dimension("fields live on different grids".into()))
        }
    }
}

impl<F: Scalar> std::fmt::Debug for Grid3<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "Grid3(L={}, n1={}, section={})",
            self.length,
            self.n1,
            self.section.key()
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{build_cross_section, SectionSpec};

    #[test]
    fn grid_invariants() {
        let section = Arc::new(
            build_cross_section(&SectionSpec::<f64>::Rectangle {
                width: 1.0,
                height: 1.0,
                n2: 9,
                n3: 9,
            })
            .unwrap(),
        );
        assert!(Grid3::new(1.0, 8, section.clone()).is_err());
        assert!(Grid3::new(-1.0, 17, section.clone()).is_err());
        let g = Grid3::new(2.0, 17, section).unwrap();
        assert!((g.h1() - 0.125).abs() < 1e-15);
        let total: f64 = g.axial_weights().iter().sum();
        assert!((total - 2.0).abs() < 1e-13);
        // integral of 1 over the cylinder = L * |Sigma|
        let ones = vec![1.0; g.node_count()];
        assert!((g.integral(&ones) - 2.0).abs() < 1e-12);
    }
}
