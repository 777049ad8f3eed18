//! Named cross-section profiles for boundary data.
//!
//! Inlet data that must vanish at the wall (axial vorticity, Bernoulli and
//! entropy perturbations) is built as shape × cutoff, where the cutoff is an
//! order-q polynomial smoothstep in s = d/d₀ (d = wall distance): it vanishes
//! together with its first q-1 derivatives at the wall and is identically 1
//! past the margin d₀.

use crate::geometry::{CrossSection, SectionKind};
use crate::num::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub enum ProfileShape<F> {
    Zero,
    /// amplitude · exp(−|x′−center|² / (2 width²))
    GaussianBump {
        amplitude: F,
        center: [F; 2],
        width: F,
    },
    /// amplitude · cos(jπ ξ₂) cos(kπ ξ₃) in bounding-box coordinates ξ;
    /// on a rectangle these are exactly the Neumann eigenfunction shapes.
    CosineMode { j: usize, k: usize, amplitude: F },
    /// amplitude · exp(−(|x′−center|−radius)² / (2 width²))
    Ring {
        amplitude: F,
        center: [F; 2],
        radius: F,
        width: F,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cutoff<F> {
    /// contact order at the wall (q ≥ 2 for vorticity data, q ≥ 3 for
    /// Bernoulli/entropy data)
    pub order: usize,
    /// distance over which the cutoff rises from 0 to 1
    pub margin: F,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SectionProfile<F> {
    pub shape: ProfileShape<F>,
    pub cutoff: Option<Cutoff<F>>,
}

impl<F: Scalar> SectionProfile<F> {
    pub fn zero() -> Self {
        Self {
            shape: ProfileShape::Zero,
            cutoff: None,
        }
    }

    pub fn is_identically_zero(&self) -> bool {
        matches!(self.shape, ProfileShape::Zero)
    }

    pub fn cutoff_order(&self) -> usize {
        self.cutoff.map_or(0, |c| c.order)
    }

    pub fn eval(&self, section: &CrossSection<F>, x: [F; 2]) -> F {
        let base = match &self.shape {
            ProfileShape::Zero => return F::zero(),
            ProfileShape::GaussianBump {
                amplitude,
                center,
                width,
            } => {
                let dx = x[0] - center[0];
                let dy = x[1] - center[1];
                *amplitude * (-(dx * dx + dy * dy) / (F::cst(2.0) * *width * *width)).exp()
            }
            ProfileShape::CosineMode { j, k, amplitude } => {
                let (xi2, xi3) = bounding_box_coords(section, x);
                *amplitude
                    * (F::PI() * F::of_usize(*j) * xi2).cos()
                    * (F::PI() * F::of_usize(*k) * xi3).cos()
            }
            ProfileShape::Ring {
                amplitude,
                center,
                radius,
                width,
            } => {
                let dx = x[0] - center[0];
                let dy = x[1] - center[1];
                let r = (dx * dx + dy * dy).sqrt();
                let d = r - *radius;
                *amplitude * (-(d * d) / (F::cst(2.0) * *width * *width)).exp()
            }
        };
        match self.cutoff {
            None => base,
            Some(c) => base * smoothstep(section.boundary_distance(x) / c.margin, c.order),
        }
    }

    pub fn sample(&self, section: &CrossSection<F>) -> Vec<F> {
        section.nodes().iter().map(|&p| self.eval(section, p)).collect()
    }

    pub fn integral(&self, section: &CrossSection<F>) -> F {
        section.integral(&self.sample(section))
    }
}

/// Order-q polynomial smoothstep: 0 with q-fold contact at s=0, 1 with
/// q-fold contact at s=1, clamped outside [0,1].
pub fn smoothstep<F: Scalar>(s: F, order: usize) -> F {
    if s <= F::zero() {
        return F::zero();
    }
    if s >= F::one() {
        return F::one();
    }
    // s^q * sum_{i<q} C(q-1+i, i) (1-s)^i
    let q = order.max(1);
    let mut acc = F::zero();
    let mut coeff = F::one();
    let om = F::one() - s;
    let mut ompow = F::one();
    for i in 0..q {
        if i > 0 {
            coeff = coeff * F::of_usize(q - 1 + i) / F::of_usize(i);
            ompow *= om;
        }
        acc += coeff * ompow;
    }
    s.powi(q as i32) * acc
}

fn bounding_box_coords<F: Scalar>(section: &CrossSection<F>, x: [F; 2]) -> (F, F) {
    match section.kind() {
        SectionKind::Rectangle { width, height, .. } => (x[0] / *width, x[1] / *height),
        SectionKind::Disk { radius, .. } => {
            let two = F::cst(2.0);
            (
                (x[0] + *radius) / (two * *radius),
                (x[1] + *radius) / (two * *radius),
            )
        }
        SectionKind::GridMask { nx, ny, h, .. } => (
            x[0] / (F::of_usize(*nx) * *h),
            x[1] / (F::of_usize(*ny) * *h),
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{build_cross_section, SectionSpec};

    fn square() -> CrossSection<f64> {
        build_cross_section(&SectionSpec::Rectangle {
            width: 1.0,
            height: 1.0,
            n2: 17,
            n3: 17,
        })
        .unwrap()
    }

    #[test]
    fn smoothstep_endpoint_contact() {
        for q in 1..=4 {
            assert_eq!(smoothstep(0.0f64, q), 0.0);
            assert_eq!(smoothstep(1.0, q), 1.0);
            assert_eq!(smoothstep(-0.3, q), 0.0);
            assert_eq!(smoothstep(1.7, q), 1.0);
        }
        // classic cubic and quintic forms
        let s: f64 = 0.37;
        assert!((smoothstep(s, 2) - s * s * (3.0 - 2.0 * s)).abs() < 1e-15);
        assert!(
            (smoothstep(s, 3) - s.powi(3) * (10.0 - 15.0 * s + 6.0 * s * s)).abs() < 1e-15
        );
    }

    #[test]
    fn smoothstep_contact_order_numerically() {
        // near s=0 the q-step behaves like C s^q
        for q in 2..=4usize {
            let r = smoothstep(2e-3, q) / smoothstep(1e-3, q);
            assert!((r - (2f64).powi(q as i32)).abs() < 0.05, "q={q}: {r}");
        }
    }

    #[test]
    fn cutoff_kills_wall_trace() {
        let s = square();
        let p = SectionProfile {
            shape: ProfileShape::GaussianBump {
                amplitude: 1.0,
                center: [0.5, 0.5],
                width: 0.25,
            },
            cutoff: Some(Cutoff {
                order: 3,
                margin: 0.3,
            }),
        };
        for b in s.boundary() {
            let x = s.nodes()[b.node];
            assert_eq!(p.eval(&s, x), 0.0);
        }
        // interior far from the wall is untouched
        let v = p.eval(&s, [0.5, 0.5]);
        assert!((v - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cosine_mode_matches_eigenfunction_shape() {
        let s = square();
        let p = SectionProfile {
            shape: ProfileShape::CosineMode {
                j: 2,
                k: 1,
                amplitude: 0.7,
            },
            cutoff: None,
        };
        let v = p.eval(&s, [0.25, 0.5]);
        let expect = 0.7 * (2.0 * std::f64::consts::PI * 0.25).cos() * (std::f64::consts::PI * 0.5).cos();
        assert!((v - expect).abs() < 1e-14);
    }

    #[test]
    fn zero_profile_is_flagged() {
        let p = SectionProfile::<f64>::zero();
        assert!(p.is_identically_zero());
        let s = square();
        assert_eq!(p.integral(&s), 0.0);
    }
}
