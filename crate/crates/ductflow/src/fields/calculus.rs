//! Discrete derivatives and Sobolev-type norms.
//!
//! Derivatives are 4th order: centered 5-point stencils in the interior and
//! biased/one-sided ones within two nodes of a boundary (exact for
//! polynomials up to degree 4). The Hᵏ norm follows the slice decomposition
//! of the cylinder: the squared norm sums ‖∂₁^{m}∂₂^{a}∂₃^{b} f‖₀² over all
//! m+a+b ≤ k.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fields::field::ScalarField;
use crate::num::Scalar;

/// First derivative along axis 1, 2 or 3.
pub fn derivative<F: Scalar>(field: &ScalarField<F>, axis: usize) -> Result<ScalarField<F>> {
    let grid = field.grid().clone();
    let ns = grid.section().node_count();
    match axis {
        1 => {
            let rows = grid.axial_rows().to_vec();
            let mut out = ScalarField::zeros(&grid);
            let n1 = grid.n1();
            let src = field.data();
            out.data_mut()
                .par_chunks_mut(ns)
                .enumerate()
                .for_each(|(i1, chunk)| {
                    debug_assert!(i1 < n1);
                    let row = &rows[i1];
                    for (o, w) in row.offsets.iter().zip(row.weights.iter()) {
                        let j = (i1 as isize + o) as usize;
                        let slice = &src[j * ns..(j + 1) * ns];
                        for (c, s) in chunk.iter_mut().zip(slice.iter()) {
                            *c += *w * *s;
                        }
                    }
                });
            Ok(out)
        }
        2 | 3 => {
            let rows = grid.section().derivative_rows(axis);
            let mut out = ScalarField::zeros(&grid);
            let src = field.data();
            out.data_mut()
                .par_chunks_mut(ns)
                .enumerate()
                .for_each(|(i1, chunk)| {
                    let slice = &src[i1 * ns..(i1 + 1) * ns];
                    rows.apply(slice, chunk);
                });
            Ok(out)
        }
        other => Err(Error::Dimension(format!(
            "derivative axis must be 1, 2 or 3, got {other}"
        ))),
    }
}

/// Discrete Hᵏ(Ω) norm for k = 0..3.
pub fn sobolev_norm<F: Scalar>(field: &ScalarField<F>, order: usize) -> Result<F> {
    if order > 3 {
        return Err(Error::Dimension(format!(
            "sobolev_norm supports orders 0..3, got {order}"
        )));
    }
    // reuse lower-order mixed derivatives by walking multi-indices in
    // lexicographic order (axis-1 derivatives applied first)
    let mut acc = field.grid().integral(
        &field
            .data()
            .iter()
            .map(|v| *v * *v)
            .collect::<Vec<_>>(),
    );
    let mut frontier: Vec<((usize, usize, usize), ScalarField<F>)> =
        vec![((0, 0, 0), field.clone())];
    for _level in 1..=order {
        let mut next: Vec<((usize, usize, usize), ScalarField<F>)> = Vec::new();
        for ((m1, m2, m3), f) in &frontier {
            for axis in 1..=3usize {
                let key = match axis {
                    1 => (*m1 + 1, *m2, *m3),
                    2 => (*m1, *m2 + 1, *m3),
                    _ => (*m1, *m2, *m3 + 1),
                };
                // keep derivative order canonical: 1s, then 2s, then 3s
                let canonical = match axis {
                    1 => *m2 == 0 && *m3 == 0,
                    2 => *m3 == 0,
                    _ => true,
                };
                if !canonical || next.iter().any(|(k, _)| *k == key) {
                    continue;
                }
                let d = derivative(f, axis)?;
                acc += d.grid().integral(
                    &d.data().iter().map(|v| *v * *v).collect::<Vec<_>>(),
                );
                next.push((key, d));
            }
        }
        frontier = next;
    }
    Ok(acc.max(F::zero()).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::grid::Grid3;
    use crate::geometry::{build_cross_section, SectionSpec};
    use std::sync::Arc;

    fn grid(n1: usize, nsec: usize, l: f64) -> Grid3<f64> {
        let section = Arc::new(
            build_cross_section(&SectionSpec::Rectangle {
                width: 1.0,
                height: 1.0,
                n2: nsec,
                n3: nsec,
            })
            .unwrap(),
        );
        Grid3::new(l, n1, section).unwrap()
    }

    #[test]
    fn derivative_of_constant_is_exactly_zero() {
        let g = grid(9, 9, 1.0);
        let f = ScalarField::constant(&g, 3.25);
        for axis in 1..=3 {
            let d = derivative(&f, axis).unwrap();
            // zero-sum-corrected weights leave only product round-off
            assert!(d.linf_norm() < 1e-13, "axis {axis}: {:.3e}", d.linf_norm());
        }
    }

    #[test]
    fn derivative_linear_exact() {
        let g = grid(9, 9, 2.0);
        let f = ScalarField::from_fn(&g, |x1, _| x1);
        let d = derivative(&f, 1).unwrap();
        for v in d.data() {
            assert!((v - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn derivative_sin_fourth_order() {
        // L = pi, f = sin(x1): error vs cos(x1) should behave like h^4
        let err = |n1: usize| -> f64 {
            let g = grid(n1, 9, std::f64::consts::PI);
            let f = ScalarField::from_fn(&g, |x1, _| x1.sin());
            let d = derivative(&f, 1).unwrap();
            let exact = ScalarField::from_fn(&g, |x1, _| x1.cos());
            d.sub(&exact).linf_norm()
        };
        let (e1, e2) = (err(17), err(33));
        assert!(e1 < 5e-4, "e(17)={e1:.3e}");
        let rate = (e1 / e2).log2();
        assert!(rate > 3.5, "rate {rate}");
    }

    #[test]
    fn derivative_rejects_bad_axis() {
        let g = grid(9, 9, 1.0);
        let f = ScalarField::zeros(&g);
        assert!(derivative(&f, 0).is_err());
        assert!(derivative(&f, 4).is_err());
    }

    #[test]
    fn differentiation_linear_in_fields() {
        let g = grid(11, 9, 1.0);
        let f1 = ScalarField::from_fn(&g, |x1, p| (x1 * 2.0).sin() * p[0]);
        let f2 = ScalarField::from_fn(&g, |x1, p| x1 + (3.0 * p[1]).cos());
        let combo = f1.scaled(1.7).add(&f2.scaled(-0.3));
        for axis in 1..=3 {
            let d_combo = derivative(&combo, axis).unwrap();
            let d_sep = derivative(&f1, axis)
                .unwrap()
                .scaled(1.7)
                .add(&derivative(&f2, axis).unwrap().scaled(-0.3));
            assert!(d_combo.sub(&d_sep).linf_norm() < 1e-12, "axis {axis}");
        }
    }

    #[test]
    fn mixed_partials_commute_to_stencil_order() {
        let g = grid(11, 17, 1.0);
        let f = ScalarField::from_fn(&g, |_, p| (2.0 * p[0]).sin() * (1.0 + p[1]).ln());
        let d23 = derivative(&derivative(&f, 2).unwrap(), 3).unwrap();
        let d32 = derivative(&derivative(&f, 3).unwrap(), 2).unwrap();
        assert!(d23.sub(&d32).linf_norm() < 2e-4);
    }

    #[test]
    fn norm_of_zero_and_constant() {
        let g = grid(9, 9, 2.0);
        let z = ScalarField::zeros(&g);
        assert_eq!(sobolev_norm(&z, 0).unwrap(), 0.0);
        assert_eq!(sobolev_norm(&z, 3).unwrap(), 0.0);
        let c = ScalarField::constant(&g, 0.7);
        // ||c||_0 = c sqrt(L |Sigma|)
        let expect = 0.7 * (2.0f64).sqrt();
        assert!((sobolev_norm(&c, 0).unwrap() - expect).abs() < 1e-12);
    }

    #[test]
    fn norm_nesting_and_positivity() {
        let g = grid(11, 11, 1.0);
        let f = ScalarField::from_fn(&g, |x1, p| (x1 * 1.3).sin() * (p[0] - 0.3) * (p[1] + 0.2));
        let n0 = sobolev_norm(&f, 0).unwrap();
        let n1 = sobolev_norm(&f, 1).unwrap();
        let n2 = sobolev_norm(&f, 2).unwrap();
        let n3 = sobolev_norm(&f, 3).unwrap();
        assert!(n0 > 0.0);
        assert!(n1 >= n0 && n2 >= n1 && n3 >= n2);
    }

    #[test]
    fn norm_triangle_inequality_on_pseudorandom_fields() {
        let g = grid(9, 9, 1.0);
        let mut state = 42u64;
        let mut rnd = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        let mut mk = || {
            let data: Vec<f64> = (0..g.node_count()).map(|_| rnd()).collect();
            ScalarField::from_data(&g, data).unwrap()
        };
        for _ in 0..5 {
            let a = mk();
            let b = mk();
            for order in 0..=2 {
                let na = sobolev_norm(&a, order).unwrap();
                let nb = sobolev_norm(&b, order).unwrap();
                let nab = sobolev_norm(&a.add(&b), order).unwrap();
                assert!(nab <= na + nb + 1e-12);
                // homogeneity
                let ns = sobolev_norm(&a.scaled(-2.5), order).unwrap();
                assert!((ns - 2.5 * na).abs() < 1e-10 * (1.0 + na));
            }
        }
    }
}
