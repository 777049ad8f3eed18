//! Neumann-Laplacian eigenbasis of the cross section.
//!
//! Rectangle and disk get analytic bases (cosine products; Bessel functions
//! with derivative-zero roots). Gridded masks get the 5-point
//! finite-difference Neumann Laplacian and a dense symmetric eigensolve —
//! the same path doubles as the convergence oracle for the analytic bases.
//!
//! Every basis is finished with a modified Gram–Schmidt pass in the discrete
//! section inner product (applied to the gradient samples with the same
//! coefficients), so discrete orthonormality holds to round-off even where
//! the section quadrature is only second order.

use crate::error::{Error, Result};
use crate::geometry::section::{CrossSection, SectionKind};
use crate::num::Scalar;
use crate::numerics::bessel::{bessel_j, bessel_j_prime, bessel_j_prime_roots};
use crate::numerics::jacobi::symmetric_eigen;

/// Practical ceiling for the dense mask eigensolve.
const MAX_DENSE_NODES: usize = 3000;

#[derive(Debug, Clone)]
pub struct EigenBasis<F> {
    pub section_key: String,
    /// Ascending; `eigenvalues[0] == 0`.
    pub eigenvalues: Vec<F>,
    /// `modes[n]` sampled on the section nodes, discretely orthonormal.
    pub modes: Vec<Vec<F>>,
    /// Cross-section gradient samples of each mode.
    pub grad2: Vec<Vec<F>>,
    pub grad3: Vec<Vec<F>>,
    /// Wall-normal derivative diagnostic per mode (analytic at the wall for
    /// rectangle/disk; one-sided O(h) sample for masks, report only).
    pub neumann_residual: Vec<F>,
}

impl<F: Scalar> EigenBasis<F> {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// Mode coefficients of a nodal function on Σ.
    pub fn project(&self, section: &CrossSection<F>, field: &[F]) -> Result<Vec<F>> {
        if field.len() != section.node_count() || section.key() != self.section_key {
            return Err(Error::Dimension(
                "field is not sampled on the basis's section".into(),
            ));
        }
        Ok(self
            .modes
            .iter()
            .map(|e| section.inner_product(e, field))
            .collect())
    }

    pub fn reconstruct(&self, coeffs: &[F]) -> Vec<F> {
        let n = self.modes[0].len();
        let mut out = vec![F::zero(); n];
        for (a, mode) in coeffs.iter().zip(self.modes.iter()) {
            for (o, e) in out.iter_mut().zip(mode.iter()) {
                *o += *a * *e;
            }
        }
        out
    }
}

pub fn build_eigenbasis<F: Scalar>(
    section: &CrossSection<F>,
    n_modes: usize,
) -> Result<EigenBasis<F>> {
    if n_modes < 1 {
        return Err(Error::Geometry("need at least one mode".into()));
    }
    if n_modes > section.node_count() {
        return Err(Error::Geometry(format!(
            "{n_modes} modes requested but the section has only {} nodes",
            section.node_count()
        )));
    }
    let mut basis = match section.kind() {
        SectionKind::Rectangle { .. } => rectangle_basis(section, n_modes)?,
        SectionKind::Disk { .. } => disk_basis(section, n_modes)?,
        SectionKind::GridMask { .. } => mask_basis(section, n_modes)?,
    };
    orthonormalize(section, &mut basis);
    Ok(basis)
}

/// Modified Gram–Schmidt (two passes) in the section inner product; the
/// gradient samples receive the same linear combination.
fn orthonormalize<F: Scalar>(section: &CrossSection<F>, basis: &mut EigenBasis<F>) {
    let n = basis.modes.len();
    for i in 0..n {
        for _pass in 0..2 {
            for k in 0..i {
                let (head, tail) = basis.modes.split_at_mut(i);
                let c = section.inner_product(&tail[0], &head[k]);
                axpy(-c, &head[k].clone(), &mut tail[0]);
                let gk2 = basis.grad2[k].clone();
                let gk3 = basis.grad3[k].clone();
                axpy(-c, &gk2, &mut basis.grad2[i]);
                axpy(-c, &gk3, &mut basis.grad3[i]);
            }
        }
        let nrm = section.inner_product(&basis.modes[i], &basis.modes[i]).sqrt();
        let inv = F::one() / nrm;
        scale(inv, &mut basis.modes[i]);
        scale(inv, &mut basis.grad2[i]);
        scale(inv, &mut basis.grad3[i]);
    }
}

fn axpy<F: Scalar>(a: F, x: &[F], y: &mut [F]) {
    for (yi, xi) in y.iter_mut().zip(x.iter()) {
        *yi += a * *xi;
    }
}

fn scale<F: Scalar>(a: F, x: &mut [F]) {
    for xi in x.iter_mut() {
        *xi *= a;
    }
}

// ---------------------------------------------------------------------------
// rectangle: cosine products
// ---------------------------------------------------------------------------

fn rectangle_basis<F: Scalar>(
    section: &CrossSection<F>,
    n_modes: usize,
) -> Result<EigenBasis<F>> {
    let (width, height, n2, n3) = match *section.kind() {
        SectionKind::Rectangle {
            width,
            height,
            n2,
            n3,
            ..
        } => (width, height, n2, n3),
        _ => unreachable!(),
    };
    // grid-resolvable indices only (trapezoid/DCT orthogonality holds there)
    let jmax = n2 - 2;
    let kmax = n3 - 2;
    let mut cands: Vec<(F, usize, usize)> = Vec::new();
    let pi = F::PI();
    for j in 0..=jmax {
        for k in 0..=kmax {
            let lam = pi * pi
                * (F::of_usize(j * j) / (width * width) + F::of_usize(k * k) / (height * height));
            cands.push((lam, j, k));
        }
    }
    cands.sort_by(|a, b| {
        a.0.partial_cmp(&b.0)
            .unwrap()
            .then(a.1.cmp(&b.1))
            .then(a.2.cmp(&b.2))
    });
    if n_modes > cands.len() {
        return Err(Error::Geometry(format!(
            "{n_modes} modes exceed the {} grid-resolvable cosine modes of this rectangle",
            cands.len()
        )));
    }

    let mut basis = empty_basis(section, n_modes);
    for (idx, &(lam, j, k)) in cands.iter().take(n_modes).enumerate() {
        let kj = pi * F::of_usize(j) / width;
        let kk = pi * F::of_usize(k) / height;
        let mut e = Vec::with_capacity(section.node_count());
        let mut g2 = Vec::with_capacity(section.node_count());
        let mut g3 = Vec::with_capacity(section.node_count());
        for p in section.nodes() {
            let (c2, s2) = ((kj * p[0]).cos(), (kj * p[0]).sin());
            let (c3, s3) = ((kk * p[1]).cos(), (kk * p[1]).sin());
            e.push(c2 * c3);
            g2.push(-kj * s2 * c3);
            g3.push(-kk * c2 * s3);
        }
        // wall-normal derivative from the analytic gradients at the wall
        let res = section
            .boundary()
            .iter()
            .map(|b| (b.normal[0] * g2[b.node] + b.normal[1] * g3[b.node]).abs())
            .fold(F::zero(), F::max);
        basis.eigenvalues[idx] = lam;
        basis.modes[idx] = e;
        basis.grad2[idx] = g2;
        basis.grad3[idx] = g3;
        basis.neumann_residual[idx] = res;
    }
    basis.eigenvalues[0] = F::zero();
    Ok(basis)
}

// ---------------------------------------------------------------------------
// disk: Bessel modes
// ---------------------------------------------------------------------------

fn disk_basis<F: Scalar>(section: &CrossSection<F>, n_modes: usize) -> Result<EigenBasis<F>> {
    let (radius, nr, ntheta) = match *section.kind() {
        SectionKind::Disk {
            radius, nr, ntheta, ..
        } => (radius, nr, ntheta),
        _ => unreachable!(),
    };
    // resolvability caps: ~5 nodes per radial wavelength, Nyquist in theta
    let root_cap = 1.2 * nr as f64;
    let m_cap = ntheta / 2 - 2;

    #[derive(Clone, Copy)]
    enum Parity {
        Cos,
        Sin,
    }
    // (lambda, m, root, parity)
    let mut cands: Vec<(F, usize, F, Parity)> = vec![(F::zero(), 0, F::zero(), Parity::Cos)];
    for m in 0..=m_cap {
        // generous count; the root scan stops at root_cap anyway
        let roots: Vec<F> = bessel_j_prime_roots::<F>(m, 4 + (root_cap / 3.0) as usize)
            .into_iter()
            .filter(|r| r.as_f64() <= root_cap)
            .collect();
        for r in roots {
            let alpha = r / radius;
            let lam = alpha * alpha;
            cands.push((lam, m, r, Parity::Cos));
            if m > 0 {
                cands.push((lam, m, r, Parity::Sin));
            }
        }
    }
    cands.sort_by(|a, b| {
        a.0.partial_cmp(&b.0)
            .unwrap()
            .then(a.1.cmp(&b.1))
            .then(match (a.3, b.3) {
                (Parity::Cos, Parity::Sin) => std::cmp::Ordering::Less,
                (Parity::Sin, Parity::Cos) => std::cmp::Ordering::Greater,
                _ => std::cmp::Ordering::Equal,
            })
    });
    if n_modes > cands.len() {
        return Err(Error::Geometry(format!(
            "{n_modes} modes exceed the {} grid-resolvable disk modes at this resolution",
            cands.len()
        )));
    }

    let mut basis = empty_basis(section, n_modes);
    for (idx, &(lam, m, root, parity)) in cands.iter().take(n_modes).enumerate() {
        let n_nodes = section.node_count();
        let mut e = Vec::with_capacity(n_nodes);
        let mut g2 = Vec::with_capacity(n_nodes);
        let mut g3 = Vec::with_capacity(n_nodes);
        let alpha = root / radius;
        let mut norm_sq = F::zero();
        for (p, w) in section.nodes().iter().zip(section.weights()) {
            let r = (p[0] * p[0] + p[1] * p[1]).sqrt();
            let th = p[1].atan2(p[0]);
            let (val, dr, dth) = if idx == 0 {
                (F::one(), F::zero(), F::zero())
            } else {
                let jm = bessel_j(m, alpha * r);
                let jmp = alpha * bessel_j_prime(m, alpha * r);
                let mf = F::of_usize(m);
                match parity {
                    Parity::Cos => (
                        jm * (mf * th).cos(),
                        jmp * (mf * th).cos(),
                        -jm * mf * (mf * th).sin(),
                    ),
                    Parity::Sin => (
                        jm * (mf * th).sin(),
                        jmp * (mf * th).sin(),
                        jm * mf * (mf * th).cos(),
                    ),
                }
            };
            let (ct, st) = (th.cos(), th.sin());
            e.push(val);
            g2.push(ct * dr - st / r * dth);
            g3.push(st * dr + ct / r * dth);
            norm_sq += *w * val * val;
        }
        // analytic wall-normal derivative at r = R, scaled like the
        // discretely normalized mode
        let res = if idx == 0 {
            F::zero()
        } else {
            (alpha * bessel_j_prime(m, root)).abs() / norm_sq.sqrt()
        };
        basis.eigenvalues[idx] = lam;
        basis.modes[idx] = e;
        basis.grad2[idx] = g2;
        basis.grad3[idx] = g3;
        basis.neumann_residual[idx] = res;
    }
    Ok(basis)
}

// ---------------------------------------------------------------------------
// grid mask: finite-difference Laplacian + dense symmetric eigensolve
// ---------------------------------------------------------------------------

fn mask_basis<F: Scalar>(section: &CrossSection<F>, n_modes: usize) -> Result<EigenBasis<F>> {
    let (nx, ny, h, node_of_cell, cell_of_node) = match section.kind() {
        SectionKind::GridMask {
            nx,
            ny,
            h,
            node_of_cell,
            cell_of_node,
            ..
        } => (*nx, *ny, *h, node_of_cell, cell_of_node),
        _ => unreachable!(),
    };
    let n = section.node_count();
    if n > MAX_DENSE_NODES {
        return Err(Error::Geometry(format!(
            "mask eigensolve limited to {MAX_DENSE_NODES} nodes, got {n}"
        )));
    }
    // -Laplacian with zero-flux closure: missing neighbors contribute nothing
    let inv_h2 = F::one() / (h * h);
    let mut a = vec![vec![F::zero(); n]; n];
    for (i, &(ix, iy)) in cell_of_node.iter().enumerate() {
        let mut degree = F::zero();
        let visit = |jx: isize, jy: isize, a: &mut Vec<Vec<F>>, degree: &mut F| {
            if jx >= 0 && jy >= 0 && (jx as usize) < nx && (jy as usize) < ny {
                let node = node_of_cell[jy as usize * nx + jx as usize];
                if node != usize::MAX {
                    a[i][node] = -inv_h2;
                    *degree += inv_h2;
                }
            }
        };
        visit(ix as isize + 1, iy as isize, &mut a, &mut degree);
        visit(ix as isize - 1, iy as isize, &mut a, &mut degree);
        visit(ix as isize, iy as isize + 1, &mut a, &mut degree);
        visit(ix as isize, iy as isize - 1, &mut a, &mut degree);
        a[i][i] = degree;
    }
    let eig = symmetric_eigen(&a)?;

    let mut basis = empty_basis(section, n_modes);
    for idx in 0..n_modes {
        let e = eig.eigenvectors[idx].clone();
        let mut g2 = vec![F::zero(); n];
        let mut g3 = vec![F::zero(); n];
        section.derivative_rows(2).apply(&e, &mut g2);
        section.derivative_rows(3).apply(&e, &mut g3);
        let res = section
            .boundary()
            .iter()
            .map(|b| (b.normal[0] * g2[b.node] + b.normal[1] * g3[b.node]).abs())
            .fold(F::zero(), F::max);
        basis.eigenvalues[idx] = eig.eigenvalues[idx];
        basis.modes[idx] = e;
        basis.grad2[idx] = g2;
        basis.grad3[idx] = g3;
        basis.neumann_residual[idx] = res;
    }
    // the exact kernel is the constant mode
    basis.eigenvalues[0] = F::zero();
    let c = F::one();
    basis.modes[0] = vec![c; n];
    basis.grad2[0] = vec![F::zero(); n];
    basis.grad3[0] = vec![F::zero(); n];
    basis.neumann_residual[0] = F::zero();
    Ok(basis)
}

fn empty_basis<F: Scalar>(section: &CrossSection<F>, n_modes: usize) -> EigenBasis<F> {
    EigenBasis {
        section_key: section.key(),
        eigenvalues: vec![F::zero(); n_modes],
        modes: vec![Vec::new(); n_modes],
        grad2: vec![Vec::new(); n_modes],
        grad3: vec![Vec::new(); n_modes],
        neumann_residual: vec![F::zero(); n_modes],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::section::{build_cross_section, SectionSpec};

    const PI: f64 = std::f64::consts::PI;
    /// First root of J_1' (literature).
    const JP11: f64 = 1.841_183_781_340_659_3;

    fn unit_square(n: usize) -> CrossSection<f64> {
        build_cross_section(&SectionSpec::Rectangle {
            width: 1.0,
            height: 1.0,
            n2: n,
            n3: n,
        })
        .unwrap()
    }

    #[test]
    fn square_eigenvalues_analytic() {
        let s = unit_square(17);
        let b = build_eigenbasis(&s, 16).unwrap();
        assert!(b.eigenvalues[0].abs() < 1e-12);
        // lambda_1 = lambda_2 = pi^2 (modes (1,0) and (0,1))
        assert!((b.eigenvalues[1] - PI * PI).abs() < 1e-10);
        assert!((b.eigenvalues[2] - PI * PI).abs() < 1e-10);
        assert!((b.eigenvalues[3] - 2.0 * PI * PI).abs() < 1e-10);
        // sorted ascending
        for w in b.eigenvalues.windows(2) {
            assert!(w[0] <= w[1]);
        }
    }

    #[test]
    fn constant_mode_is_inverse_sqrt_area() {
        for s in [
            unit_square(9),
            build_cross_section(&SectionSpec::Disk {
                radius: 1.0,
                resolution: 16,
            })
            .unwrap(),
        ] {
            let b = build_eigenbasis(&s, 4).unwrap();
            let expect = 1.0 / s.area().sqrt();
            for v in &b.modes[0] {
                assert!((v - expect).abs() < 1e-10, "{v} vs {expect}");
            }
        }
    }

    #[test]
    fn orthonormality_holds_everywhere() {
        let sections = [
            unit_square(17),
            build_cross_section(&SectionSpec::Disk {
                radius: 1.0,
                resolution: 16,
            })
            .unwrap(),
        ];
        for s in sections {
            let b = build_eigenbasis(&s, 12).unwrap();
            for i in 0..b.len() {
                for j in 0..b.len() {
                    let ip = s.inner_product(&b.modes[i], &b.modes[j]);
                    let expect = if i == j { 1.0 } else { 0.0 };
                    assert!((ip - expect).abs() < 1e-8, "({i},{j}): {ip}");
                }
            }
        }
    }

    #[test]
    fn disk_lambda1_is_squared_bessel_root() {
        let s = build_cross_section(&SectionSpec::Disk {
            radius: 1.0,
            resolution: 24,
        })
        .unwrap();
        let b = build_eigenbasis(&s, 8).unwrap();
        let expect = JP11 * JP11; // ~3.390
        assert!((b.eigenvalues[1] - expect).abs() < 1e-9, "{}", b.eigenvalues[1]);
        assert!((b.eigenvalues[2] - expect).abs() < 1e-9); // sin partner
    }

    #[test]
    fn neumann_residual_small_on_analytic_bases() {
        let s = unit_square(17);
        let b = build_eigenbasis(&s, 16).unwrap();
        for r in &b.neumann_residual {
            assert!(*r < 1e-10, "{r}");
        }
        let d = build_cross_section(&SectionSpec::Disk {
            radius: 1.0,
            resolution: 16,
        })
        .unwrap();
        let b = build_eigenbasis(&d, 10).unwrap();
        for r in &b.neumann_residual {
            assert!(*r < 1e-8, "{r}");
        }
    }

    #[test]
    fn fd_oracle_converges_to_pi_squared_at_second_order() {
        // full-square masks as the finite-difference eigensolver oracle
        let lam1 = |n: usize| -> f64 {
            let rows: Vec<String> = (0..n).map(|_| "#".repeat(n)).collect();
            let s = build_cross_section(&SectionSpec::GridMask {
                rows,
                spacing: 1.0 / n as f64,
            })
            .unwrap();
            let b = build_eigenbasis(&s, 3).unwrap();
            b.eigenvalues[1]
        };
        let (e1, e2) = ((lam1(10) - PI * PI).abs(), (lam1(20) - PI * PI).abs());
        let rate = (e1 / e2).log2();
        assert!(rate > 1.7 && rate < 2.3, "rate {rate} (e1={e1:.3e}, e2={e2:.3e})");
    }

    #[test]
    fn projection_identities() {
        let s = unit_square(17);
        let b = build_eigenbasis(&s, 10).unwrap();
        // f = e_2 -> coefficient vector is the unit vector
        let coeffs = b.project(&s, &b.modes[2].clone()).unwrap();
        for (k, c) in coeffs.iter().enumerate() {
            let expect = if k == 2 { 1.0 } else { 0.0 };
            assert!((c - expect).abs() < 1e-8, "k={k}: {c}");
        }
        // f = const c -> only mode 0, a0 = c*sqrt(area)
        let f = vec![0.7; s.node_count()];
        let coeffs = b.project(&s, &f).unwrap();
        assert!((coeffs[0] - 0.7 * s.area().sqrt()).abs() < 1e-10);
        for c in &coeffs[1..] {
            assert!(c.abs() < 1e-10);
        }
        // linearity: 3 e_1 - 2 e_4
        let f: Vec<f64> = (0..s.node_count())
            .map(|i| 3.0 * b.modes[1][i] - 2.0 * b.modes[4][i])
            .collect();
        let coeffs = b.project(&s, &f).unwrap();
        for (k, c) in coeffs.iter().enumerate() {
            let expect = match k {
                1 => 3.0,
                4 => -2.0,
                _ => 0.0,
            };
            assert!((c - expect).abs() < 1e-8, "k={k}: {c}");
        }
    }

    #[test]
    fn parseval_remainder_decreases() {
        let s = unit_square(17);
        let f: Vec<f64> = s
            .nodes()
            .iter()
            .map(|p| ((p[0] - 0.4).powi(2) + (p[1] - 0.55).powi(2)).exp())
            .collect();
        let norm_sq = s.inner_product(&f, &f);
        let mut prev = f64::INFINITY;
        for n_modes in [4, 9, 16, 25] {
            let b = build_eigenbasis(&s, n_modes).unwrap();
            let coeffs = b.project(&s, &f).unwrap();
            let sum_sq: f64 = coeffs.iter().map(|c| c * c).sum();
            let remainder = norm_sq - sum_sq;
            assert!(remainder >= -1e-12);
            assert!(remainder <= prev + 1e-12, "remainder grew at {n_modes}");
            prev = remainder;
        }
    }

    #[test]
    fn mode_count_guards() {
        let s = unit_square(9);
        assert!(build_eigenbasis(&s, 0).is_err());
        assert!(build_eigenbasis(&s, s.node_count() + 1).is_err());
        // in-band cap: 9x9 grid resolves (9-1)*(9-1)=64 cosine modes at most
        assert!(build_eigenbasis(&s, 64).is_ok());
        assert!(build_eigenbasis(&s, 65).is_err());
    }
}
