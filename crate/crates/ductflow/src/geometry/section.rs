//! Cross-section geometry.
//!
//! Three node layouts are supported:
//!  * rectangle: vertex-centered tensor grid, trapezoid quadrature;
//!  * disk: polar grid, cell-centered in r (no pole node), midpoint-in-r ×
//!    trapezoid-in-θ quadrature (exact for the area), radial stencils reach
//!    through the pole via f(-r,θ) = f(r,θ+π);
//!  * grid mask: cell centers of an arbitrary simply-connected cell set,
//!    midpoint quadrature. Experimental: corners are outside the smooth-wall
//!    theory, interpolation is bilinear only.
//!
//! Cross-section derivatives are 4th-order stencils stored as sparse rows
//! over the section nodes; on the disk they are the polar chain rule
//! ∂₂ = cosθ ∂_r − (sinθ/r) ∂_θ, ∂₃ = sinθ ∂_r + (cosθ/r) ∂_θ.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::num::Scalar;
use crate::numerics::stencil::{fd_weights, first_derivative_rows, periodic_first_derivative_row};

/// Section descriptor, as read from configuration.
#[derive(Debug, Clone, PartialEq)]
pub enum SectionSpec<F> {
    Rectangle {
        width: F,
        height: F,
        n2: usize,
        n3: usize,
    },
    /// `resolution` plays the role of nodes-per-direction: the polar grid
    /// uses ~resolution/2 radial rings and 2*resolution angles.
    Disk { radius: F, resolution: usize },
    /// Rows of '#' (inside) and '.' (outside), row 0 at the bottom.
    GridMask { rows: Vec<String>, spacing: F },
}

impl<F: Scalar> SectionSpec<F> {
    /// Stable identification string (cache key component).
    pub fn key(&self) -> String {
        match self {
            SectionSpec::Rectangle {
                width,
                height,
                n2,
                n3,
            } => format!(
                "rectangle:w={:.17e},h={:.17e},n2={},n3={}",
                width.as_f64(),
                height.as_f64(),
                n2,
                n3
            ),
            SectionSpec::Disk { radius, resolution } => {
                format!("disk:r={:.17e},res={}", radius.as_f64(), resolution)
            }
            SectionSpec::GridMask { rows, spacing } => {
                format!("grid-mask:h={:.17e},rows={}", spacing.as_f64(), rows.join("|"))
            }
        }
    }
}

/// One boundary record: a node index plus a unit outward normal. Corner
/// nodes appear once per incident face.
#[derive(Debug, Clone, Copy)]
pub struct BoundaryEntry<F> {
    pub node: usize,
    pub normal: [F; 2],
}

/// Layout-specific data.
#[derive(Debug, Clone)]
pub enum SectionKind<F> {
    Rectangle {
        width: F,
        height: F,
        n2: usize,
        n3: usize,
        h2: F,
        h3: F,
    },
    Disk {
        radius: F,
        nr: usize,
        ntheta: usize,
        dr: F,
        dtheta: F,
    },
    GridMask {
        nx: usize,
        ny: usize,
        h: F,
        /// node index per cell, `usize::MAX` when outside.
        node_of_cell: Vec<usize>,
        /// cell (ix, iy) per node.
        cell_of_node: Vec<(usize, usize)>,
        /// approximate boundary distance per node.
        distance: Vec<F>,
    },
}

/// Sparse derivative rows over section nodes.
#[derive(Debug, Clone)]
pub struct SparseRows<F> {
    pub rows: Vec<Vec<(u32, F)>>,
}

impl<F: Scalar> SparseRows<F> {
    pub fn apply(&self, input: &[F], output: &mut [F]) {
        debug_assert_eq!(input.len(), self.rows.len());
        debug_assert_eq!(output.len(), self.rows.len());
        for (out, row) in output.iter_mut().zip(self.rows.iter()) {
            let mut acc = F::zero();
            for &(c, w) in row {
                acc += w * input[c as usize];
            }
            *out = acc;
        }
    }
}

/// The cross section Σ with quadrature, boundary and derivative operators.
#[derive(Debug, Clone)]
pub struct CrossSection<F> {
    spec: SectionSpec<F>,
    kind: SectionKind<F>,
    nodes: Vec<[F; 2]>,
    weights: Vec<F>,
    area: F,
    boundary: Vec<BoundaryEntry<F>>,
    d2: SparseRows<F>,
    d3: SparseRows<F>,
}

pub fn build_cross_section<F: Scalar>(spec: &SectionSpec<F>) -> Result<CrossSection<F>> {
    match spec {
        SectionSpec::Rectangle {
            width,
            height,
            n2,
            n3,
        } => build_rectangle(*width, *height, *n2, *n3),
        SectionSpec::Disk { radius, resolution } => build_disk(*radius, *resolution),
        SectionSpec::GridMask { rows, spacing } => build_mask(rows, *spacing),
    }
}

impl<F: Scalar> CrossSection<F> {
    pub fn spec(&self) -> &SectionSpec<F> {
        &self.spec
    }

    pub fn kind(&self) -> &SectionKind<F> {
        &self.kind
    }

    pub fn key(&self) -> String {
        self.spec.key()
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[[F; 2]] {
        &self.nodes
    }

    pub fn weights(&self) -> &[F] {
        &self.weights
    }

    pub fn area(&self) -> F {
        self.area
    }

    pub fn boundary(&self) -> &[BoundaryEntry<F>] {
        &self.boundary
    }

    /// Discrete inner product over Σ.
    pub fn inner_product(&self, f: &[F], g: &[F]) -> F {
        let mut acc = F::zero();
        for i in 0..f.len() {
            acc += self.weights[i] * f[i] * g[i];
        }
        acc
    }

    /// Quadrature of a nodal function.
    pub fn integral(&self, f: &[F]) -> F {
        let mut acc = F::zero();
        for (w, v) in self.weights.iter().zip(f.iter()) {
            acc += *w * *v;
        }
        acc
    }

    pub fn derivative_rows(&self, axis: usize) -> &SparseRows<F> {
        match axis {
            2 => &self.d2,
            3 => &self.d3,
            _ => panic!("section axis must be 2 or 3"),
        }
    }

    /// Smallest node spacing (transport hard-error scale).
    pub fn min_spacing(&self) -> F {
        match &self.kind {
            SectionKind::Rectangle { h2, h3, .. } => h2.min(*h3),
            SectionKind::Disk { dr, dtheta, .. } => {
                let inner_arc = *dr * F::cst(0.5) * *dtheta;
                dr.min(inner_arc)
            }
            SectionKind::GridMask { h, .. } => *h,
        }
    }

    pub fn contains(&self, p: [F; 2]) -> bool {
        match &self.kind {
            SectionKind::Rectangle { width, height, .. } => {
                p[0] >= F::zero() && p[0] <= *width && p[1] >= F::zero() && p[1] <= *height
            }
            SectionKind::Disk { radius, .. } => (p[0] * p[0] + p[1] * p[1]).sqrt() <= *radius,
            SectionKind::GridMask {
                nx,
                ny,
                h,
                node_of_cell,
                ..
            } => {
                let ix = (p[0] / *h).floor();
                let iy = (p[1] / *h).floor();
                if ix < F::zero() || iy < F::zero() {
                    return false;
                }
                let (ix, iy) = (ix.as_f64() as usize, iy.as_f64() as usize);
                ix < *nx && iy < *ny && node_of_cell[iy * nx + ix] != usize::MAX
            }
        }
    }

    /// Project a point onto the closure of Σ; returns the point and the
    /// distance moved (zero when already inside).
    pub fn snap_inside(&self, p: [F; 2]) -> ([F; 2], F) {
        match &self.kind {
            SectionKind::Rectangle { width, height, .. } => {
                let q = [
                    p[0].max(F::zero()).min(*width),
                    p[1].max(F::zero()).min(*height),
                ];
                let d = ((q[0] - p[0]).powi(2) + (q[1] - p[1]).powi(2)).sqrt();
                (q, d)
            }
            SectionKind::Disk { radius, .. } => {
                let r = (p[0] * p[0] + p[1] * p[1]).sqrt();
                if r <= *radius {
                    (p, F::zero())
                } else {
                    let s = *radius / r;
                    ([p[0] * s, p[1] * s], r - *radius)
                }
            }
            SectionKind::GridMask { h, .. } => {
                if self.contains(p) {
                    return (p, F::zero());
                }
                // nearest in-mask cell center in an expanding search
                let mut best: Option<([F; 2], F)> = None;
                for q in &self.nodes {
                    let d = ((q[0] - p[0]).powi(2) + (q[1] - p[1]).powi(2)).sqrt();
                    if best.map_or(true, |(_, bd)| d < bd) {
                        best = Some((*q, d));
                    }
                    if let Some((_, bd)) = best {
                        if bd < *h * F::cst(0.51) {
                            break;
                        }
                    }
                }
                best.expect("mask has nodes")
            }
        }
    }

    /// Distance to the wall ∂Σ (analytic for rectangle/disk, cell-based for
    /// masks). Used by the compact-support cutoffs.
    pub fn boundary_distance(&self, p: [F; 2]) -> F {
        match &self.kind {
            SectionKind::Rectangle { width, height, .. } => {
                let d2 = p[0].min(*width - p[0]);
                let d3 = p[1].min(*height - p[1]);
                d2.min(d3).max(F::zero())
            }
            SectionKind::Disk { radius, .. } => {
                (*radius - (p[0] * p[0] + p[1] * p[1]).sqrt()).max(F::zero())
            }
            SectionKind::GridMask {
                nx,
                ny,
                h,
                node_of_cell,
                distance,
                ..
            } => {
                let ix = ((p[0] / *h).floor().as_f64() as isize).clamp(0, *nx as isize - 1) as usize;
                let iy = ((p[1] / *h).floor().as_f64() as isize).clamp(0, *ny as isize - 1) as usize;
                let n = node_of_cell[iy * nx + ix];
                if n == usize::MAX {
                    F::zero()
                } else {
                    distance[n]
                }
            }
        }
    }

    /// 2-D interpolation of nodal values at an arbitrary point of Σ̄.
    ///
    /// Bicubic on rectangle (tensor Lagrange) and disk (in (r,θ), periodic
    /// in θ, through-pole in r); bilinear on masks.
    pub fn interpolate(&self, values: &[F], p: [F; 2]) -> F {
        debug_assert_eq!(values.len(), self.nodes.len());
        match &self.kind {
            SectionKind::Rectangle { n2, n3, h2, h3, .. } => {
                let (i0, w2) = cubic_stencil(p[0] / *h2, *n2);
                let (j0, w3) = cubic_stencil(p[1] / *h3, *n3);
                let mut acc = F::zero();
                for (dj, wj) in w3.iter().enumerate() {
                    let base = (j0 + dj) * n2 + i0;
                    let mut rowacc = F::zero();
                    for (di, wi) in w2.iter().enumerate() {
                        rowacc += *wi * values[base + di];
                    }
                    acc += *wj * rowacc;
                }
                acc
            }
            SectionKind::Disk {
                nr,
                ntheta,
                dr,
                dtheta,
                ..
            } => {
                let r = (p[0] * p[0] + p[1] * p[1]).sqrt();
                let theta = p[1].atan2(p[0]);
                let two_pi = F::PI() + F::PI();
                let theta = if theta < F::zero() { theta + two_pi } else { theta };
                // radial node i sits at r=(i+1/2)dr so tr=i exactly there
                let tr = r / *dr - F::cst(0.5);
                let half = *ntheta / 2;
                let i0 = ((tr.floor().as_f64() as isize) - 1).clamp(-2, *nr as isize - 4);
                let wr = cubic_weights(tr - F::cst(i0 as f64));
                let tt = theta / *dtheta;
                let j0 = tt.floor().as_f64() as isize - 1;
                let wt = cubic_weights(tt - F::cst(j0 as f64));
                let mut acc = F::zero();
                for (di, wi) in wr.iter().enumerate() {
                    let ri = i0 + di as isize;
                    // through-pole mapping: radius index <0 mirrors with a
                    // half-turn in theta
                    let (ri, shift) = if ri < 0 {
                        ((-1 - ri) as usize, half)
                    } else {
                        (ri as usize, 0)
                    };
                    let mut rowacc = F::zero();
                    for (dj, wj) in wt.iter().enumerate() {
                        let j = (j0 + dj as isize).rem_euclid(*ntheta as isize) as usize;
                        let j = (j + shift) % *ntheta;
                        rowacc += *wj * values[ri * *ntheta + j];
                    }
                    acc += *wi * rowacc;
                }
                acc
            }
            SectionKind::GridMask {
                nx,
                ny,
                h,
                node_of_cell,
                ..
            } => {
                // bilinear between cell centers; nearest value when a corner
                // of the square is outside the mask
                let tx = p[0] / *h - F::cst(0.5);
                let ty = p[1] / *h - F::cst(0.5);
                let ix = (tx.floor().as_f64() as isize).clamp(0, *nx as isize - 2) as usize;
                let iy = (ty.floor().as_f64() as isize).clamp(0, *ny as isize - 2) as usize;
                let fx = tx - F::cst(ix as f64);
                let fy = ty - F::cst(iy as f64);
                let get = |cx: usize, cy: usize| -> Option<F> {
                    let n = node_of_cell[cy * nx + cx];
                    (n != usize::MAX).then(|| values[n])
                };
                let corners = [
                    get(ix, iy),
                    get(ix + 1, iy),
                    get(ix, iy + 1),
                    get(ix + 1, iy + 1),
                ];
                if corners.iter().all(|c| c.is_some()) {
                    let [c00, c10, c01, c11] = corners.map(|c| c.unwrap());
                    let one = F::one();
                    (one - fy) * ((one - fx) * c00 + fx * c10) + fy * ((one - fx) * c01 + fx * c11)
                } else {
                    // nearest node
                    let (q, _) = self.snap_inside(p);
                    let mut best = (F::infinity(), F::zero());
                    for (n, c) in self.nodes.iter().enumerate() {
                        let d = (c[0] - q[0]).powi(2) + (c[1] - q[1]).powi(2);
                        if d < best.0 {
                            best = (d, values[n]);
                        }
                    }
                    best.1
                }
            }
        }
    }
}

/// Cubic Lagrange weights at local coordinate `t` relative to 4 consecutive
/// nodes 0,1,2,3.
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

/// Stencil base and weights for interpolation at grid coordinate `t` of a
/// vertex grid with `n` nodes.
fn cubic_stencil<F: Scalar>(t: F, n: usize) -> (usize, [F; 4]) {
    let i0 = ((t.floor().as_f64() as isize) - 1).clamp(0, n as isize - 4) as usize;
    (i0, cubic_weights(t - F::cst(i0 as f64)))
}

// ---------------------------------------------------------------------------
// rectangle
// ---------------------------------------------------------------------------

fn build_rectangle<F: Scalar>(width: F, height: F, n2: usize, n3: usize) -> Result<CrossSection<F>> {
    if !(width > F::zero()) || !(height > F::zero()) {
        return Err(Error::Geometry(
            "rectangle dimensions must be positive".into(),
        ));
    }
    if n2 < 8 || n3 < 8 {
        return Err(Error::Geometry(format!(
            "rectangle resolution {n2}x{n3} too coarse (need >= 8 nodes per direction)"
        )));
    }
    let h2 = width / F::of_usize(n2 - 1);
    let h3 = height / F::of_usize(n3 - 1);

    let mut nodes = Vec::with_capacity(n2 * n3);
    let mut weights = Vec::with_capacity(n2 * n3);
    let w2 = trapezoid_line_weights(n2, h2);
    let w3 = trapezoid_line_weights(n3, h3);
    for i3 in 0..n3 {
        for i2 in 0..n2 {
            nodes.push([F::of_usize(i2) * h2, F::of_usize(i3) * h3]);
            weights.push(w2[i2] * w3[i3]);
        }
    }

    let mut boundary = Vec::new();
    for i3 in 0..n3 {
        for i2 in 0..n2 {
            let node = i3 * n2 + i2;
            if i2 == 0 {
                boundary.push(BoundaryEntry { node, normal: [-F::one(), F::zero()] });
            }
            if i2 == n2 - 1 {
                boundary.push(BoundaryEntry { node, normal: [F::one(), F::zero()] });
            }
            if i3 == 0 {
                boundary.push(BoundaryEntry { node, normal: [F::zero(), -F::one()] });
            }
            if i3 == n3 - 1 {
                boundary.push(BoundaryEntry { node, normal: [F::zero(), F::one()] });
            }
        }
    }

    let rows2 = first_derivative_rows::<F>(n2, h2);
    let rows3 = first_derivative_rows::<F>(n3, h3);
    let mut d2 = Vec::with_capacity(n2 * n3);
    let mut d3 = Vec::with_capacity(n2 * n3);
    for i3 in 0..n3 {
        for i2 in 0..n2 {
            let r2 = &rows2[i2];
            d2.push(
                r2.offsets
                    .iter()
                    .zip(r2.weights.iter())
                    .map(|(&o, &w)| (((i3 * n2) as isize + i2 as isize + o) as u32, w))
                    .collect(),
            );
            let r3 = &rows3[i3];
            d3.push(
                r3.offsets
                    .iter()
                    .zip(r3.weights.iter())
                    .map(|(&o, &w)| ((((i3 as isize + o) * n2 as isize) + i2 as isize) as u32, w))
                    .collect(),
            );
        }
    }

    Ok(CrossSection {
        spec: SectionSpec::Rectangle {
            width,
            height,
            n2,
            n3,
        },
        kind: SectionKind::Rectangle {
            width,
            height,
            n2,
            n3,
            h2,
            h3,
        },
        nodes,
        weights,
        area: width * height,
        boundary,
        d2: SparseRows { rows: d2 },
        d3: SparseRows { rows: d3 },
    })
}

fn trapezoid_line_weights<F: Scalar>(n: usize, h: F) -> Vec<F> {
    let mut w = vec![h; n];
    w[0] = h * F::cst(0.5);
    w[n - 1] = h * F::cst(0.5);
    w
}

// ---------------------------------------------------------------------------
// disk
// ---------------------------------------------------------------------------

fn build_disk<F: Scalar>(radius: F, resolution: usize) -> Result<CrossSection<F>> {
    if !(radius > F::zero()) {
        return Err(Error::Geometry("disk radius must be positive".into()));
    }
    if resolution < 8 {
        return Err(Error::Geometry(format!(
            "disk resolution {resolution} too coarse (need >= 8)"
        )));
    }
    let nr = ((resolution + 1) / 2).max(5);
    let ntheta = 2 * resolution; // even, so the through-pole half-turn is exact
    let dr = radius / F::of_usize(nr);
    let two_pi = F::PI() + F::PI();
    let dtheta = two_pi / F::of_usize(ntheta);

    let mut nodes = Vec::with_capacity(nr * ntheta);
    let mut weights = Vec::with_capacity(nr * ntheta);
    for ir in 0..nr {
        let r = (F::of_usize(ir) + F::cst(0.5)) * dr;
        for jt in 0..ntheta {
            let th = F::of_usize(jt) * dtheta;
            nodes.push([r * th.cos(), r * th.sin()]);
            weights.push(r * dr * dtheta);
        }
    }

    let mut boundary = Vec::with_capacity(ntheta);
    for jt in 0..ntheta {
        let th = F::of_usize(jt) * dtheta;
        boundary.push(BoundaryEntry {
            node: (nr - 1) * ntheta + jt,
            normal: [th.cos(), th.sin()],
        });
    }

    // radial rows with through-pole ghosts at ir=0,1 and biased rows at the
    // outer edge
    let half = ntheta / 2;
    let node_at = |ri: isize, jt: usize| -> u32 {
        if ri < 0 {
            let mirrored = (-1 - ri) as usize;
            (mirrored * ntheta + (jt + half) % ntheta) as u32
        } else {
            (ri as usize * ntheta + jt) as u32
        }
    };
    // radial stencils: centered if possible (ghosts allowed below the pole),
    // biased at the outer wall
    let radial_row = |ir: usize| -> (Vec<isize>, Vec<F>) {
        let start: isize = if ir + 2 < nr { -2 } else { nr as isize - 5 - ir as isize };
        let offsets: Vec<isize> = (0..5).map(|k| start + k).collect();
        let xs: Vec<F> = offsets.iter().map(|&o| F::cst(o as f64) * dr).collect();
        (offsets.clone(), fd_weights(F::zero(), &xs, 1))
    };
    let theta_row = periodic_first_derivative_row::<F>(dtheta);

    let mut d2 = Vec::with_capacity(nr * ntheta);
    let mut d3 = Vec::with_capacity(nr * ntheta);
    for ir in 0..nr {
        let r = (F::of_usize(ir) + F::cst(0.5)) * dr;
        let (roff, rw) = radial_row(ir);
        for jt in 0..ntheta {
            let th = F::of_usize(jt) * dtheta;
            let (ct, st) = (th.cos(), th.sin());
            let mut row2: HashMap<u32, F> = HashMap::new();
            let mut row3: HashMap<u32, F> = HashMap::new();
            for (o, w) in roff.iter().zip(rw.iter()) {
                let col = node_at(ir as isize + o, jt);
                *row2.entry(col).or_insert(F::zero()) += ct * *w;
                *row3.entry(col).or_insert(F::zero()) += st * *w;
            }
            for (o, w) in theta_row.offsets.iter().zip(theta_row.weights.iter()) {
                let j = (jt as isize + o).rem_euclid(ntheta as isize) as usize;
                let col = (ir * ntheta + j) as u32;
                *row2.entry(col).or_insert(F::zero()) += -st / r * *w;
                *row3.entry(col).or_insert(F::zero()) += ct / r * *w;
            }
            let mut r2: Vec<(u32, F)> = row2.into_iter().collect();
            let mut r3: Vec<(u32, F)> = row3.into_iter().collect();
            r2.sort_by_key(|e| e.0);
            r3.sort_by_key(|e| e.0);
            d2.push(r2);
            d3.push(r3);
        }
    }

    let area = F::PI() * radius * radius;
    Ok(CrossSection {
        spec: SectionSpec::Disk { radius, resolution },
        kind: SectionKind::Disk {
            radius,
            nr,
            ntheta,
            dr,
            dtheta,
        },
        nodes,
        weights,
        area,
        boundary,
        d2: SparseRows { rows: d2 },
        d3: SparseRows { rows: d3 },
    })
}

// ---------------------------------------------------------------------------
// grid mask
// ---------------------------------------------------------------------------

fn build_mask<F: Scalar>(rows: &[String], spacing: F) -> Result<CrossSection<F>> {
    if !(spacing > F::zero()) {
        return Err(Error::Geometry("mask spacing must be positive".into()));
    }
    let ny = rows.len();
    if ny < 8 {
        return Err(Error::Geometry(
            "mask needs at least 8 rows (resolution >= 8 per direction)".into(),
        ));
    }
    let nx = rows[0].chars().count();
    if nx < 8 {
        return Err(Error::Geometry(
            "mask needs at least 8 columns (resolution >= 8 per direction)".into(),
        ));
    }
    let mut inside = vec![false; nx * ny];
    for (iy, row) in rows.iter().enumerate() {
        if row.chars().count() != nx {
            return Err(Error::Geometry("mask rows must have equal length".into()));
        }
        for (ix, c) in row.chars().enumerate() {
            match c {
                '#' => inside[iy * nx + ix] = true,
                '.' => {}
                other => {
                    return Err(Error::Geometry(format!(
                        "mask rows may contain only '#' and '.', found {other:?}"
                    )))
                }
            }
        }
    }
    let count = inside.iter().filter(|&&b| b).count();
    if count == 0 {
        return Err(Error::Geometry("mask is empty".into()));
    }

    check_simply_connected(&inside, nx, ny)?;

    let mut node_of_cell = vec![usize::MAX; nx * ny];
    let mut cell_of_node = Vec::with_capacity(count);
    let mut nodes = Vec::with_capacity(count);
    for iy in 0..ny {
        for ix in 0..nx {
            if inside[iy * nx + ix] {
                node_of_cell[iy * nx + ix] = cell_of_node.len();
                cell_of_node.push((ix, iy));
                nodes.push([
                    (F::of_usize(ix) + F::cst(0.5)) * spacing,
                    (F::of_usize(iy) + F::cst(0.5)) * spacing,
                ]);
            }
        }
    }
    let weights = vec![spacing * spacing; count];
    let area = spacing * spacing * F::of_usize(count);

    // boundary entries: one per exposed face, outward normals
    let is_in = |ix: isize, iy: isize| -> bool {
        ix >= 0 && iy >= 0 && (ix as usize) < nx && (iy as usize) < ny
            && inside[iy as usize * nx + ix as usize]
    };
    let mut boundary = Vec::new();
    let mut bfs_seed = Vec::new();
    for (n, &(ix, iy)) in cell_of_node.iter().enumerate() {
        let (ix, iy) = (ix as isize, iy as isize);
        let faces: [([F; 2], (isize, isize)); 4] = [
            ([F::one(), F::zero()], (ix + 1, iy)),
            ([-F::one(), F::zero()], (ix - 1, iy)),
            ([F::zero(), F::one()], (ix, iy + 1)),
            ([F::zero(), -F::one()], (ix, iy - 1)),
        ];
        let mut exposed = false;
        for (normal, nb) in faces {
            if !is_in(nb.0, nb.1) {
                boundary.push(BoundaryEntry { node: n, normal });
                exposed = true;
            }
        }
        if exposed {
            bfs_seed.push(n);
        }
    }

    // BFS distance in cells, converted to length (cell centers: boundary
    // cells sit h/2 from the wall)
    let mut dist_cells = vec![usize::MAX; count];
    let mut queue = std::collections::VecDeque::new();
    for &n in &bfs_seed {
        dist_cells[n] = 0;
        queue.push_back(n);
    }
    while let Some(n) = queue.pop_front() {
        let (ix, iy) = cell_of_node[n];
        for (dx, dy) in [(1i32, 0i32), (-1, 0), (0, 1), (0, -1)] {
            let (jx, jy) = (ix as i32 + dx, iy as i32 + dy);
            if jx >= 0 && jy >= 0 && (jx as usize) < nx && (jy as usize) < ny {
                let m = node_of_cell[jy as usize * nx + jx as usize];
                if m != usize::MAX && dist_cells[m] == usize::MAX {
                    dist_cells[m] = dist_cells[n] + 1;
                    queue.push_back(m);
                }
            }
        }
    }
    let distance: Vec<F> = dist_cells
        .iter()
        .map(|&d| (F::of_usize(d) + F::cst(0.5)) * spacing)
        .collect();

    // derivative rows from runs of consecutive cells
    let d2 = mask_derivative_rows(&inside, nx, ny, spacing, &node_of_cell, &cell_of_node, true)?;
    let d3 = mask_derivative_rows(&inside, nx, ny, spacing, &node_of_cell, &cell_of_node, false)?;

    Ok(CrossSection {
        spec: SectionSpec::GridMask {
            rows: rows.to_vec(),
            spacing,
        },
        kind: SectionKind::GridMask {
            nx,
            ny,
            h: spacing,
            node_of_cell,
            cell_of_node,
            distance,
        },
        nodes,
        weights,
        area,
        boundary,
        d2,
        d3,
    })
}

fn check_simply_connected(inside: &[bool], nx: usize, ny: usize) -> Result<()> {
    let flood = |start: usize, want: bool, marks: &mut Vec<bool>| {
        let mut queue = std::collections::VecDeque::new();
        marks[start] = true;
        queue.push_back(start);
        while let Some(c) = queue.pop_front() {
            let (ix, iy) = (c % nx, c / nx);
            let push = |jx: isize, jy: isize, queue: &mut std::collections::VecDeque<usize>, marks: &mut Vec<bool>| {
                if jx >= 0 && jy >= 0 && (jx as usize) < nx && (jy as usize) < ny {
                    let j = jy as usize * nx + jx as usize;
                    if inside[j] == want && !marks[j] {
                        marks[j] = true;
                        queue.push_back(j);
                    }
                }
            };
            push(ix as isize + 1, iy as isize, &mut queue, marks);
            push(ix as isize - 1, iy as isize, &mut queue, marks);
            push(ix as isize, iy as isize + 1, &mut queue, marks);
            push(ix as isize, iy as isize - 1, &mut queue, marks);
        }
    };

    // inside connected
    let first_in = inside.iter().position(|&b| b).unwrap();
    let mut marks = vec![false; inside.len()];
    flood(first_in, true, &mut marks);
    if inside
        .iter()
        .zip(marks.iter())
        .any(|(&b, &m)| b && !m)
    {
        return Err(Error::Geometry("mask is not connected".into()));
    }

    // complement connected to the frame (no holes): flood the outside from
    // any border cell that is outside; a border fully inside is impossible
    // for a bounded mask with holes anyway, so also handle that.
    let mut out_marks = vec![false; inside.len()];
    let mut seeded = false;
    for ix in 0..nx {
        for iy in [0, ny - 1] {
            let c = iy * nx + ix;
            if !inside[c] && !out_marks[c] {
                flood(c, false, &mut out_marks);
                seeded = true;
            }
        }
    }
    for iy in 0..ny {
        for ix in [0, nx - 1] {
            let c = iy * nx + ix;
            if !inside[c] && !out_marks[c] {
                flood(c, false, &mut out_marks);
                seeded = true;
            }
        }
    }
    let holes = inside
        .iter()
        .zip(out_marks.iter())
        .any(|(&b, &m)| !b && !m);
    if holes && seeded {
        return Err(Error::Geometry(
            "mask is not simply connected (interior hole detected)".into(),
        ));
    }
    if !seeded {
        // mask touches the whole frame; any outside cell would be a hole
        if inside.iter().any(|&b| !b) {
            return Err(Error::Geometry(
                "mask is not simply connected (interior hole detected)".into(),
            ));
        }
    }
    Ok(())
}

fn mask_derivative_rows<F: Scalar>(
    inside: &[bool],
    nx: usize,
    ny: usize,
    h: F,
    node_of_cell: &[usize],
    cell_of_node: &[(usize, usize)],
    along_x: bool,
) -> Result<SparseRows<F>> {
    let base_rows = |run_len: usize| first_derivative_rows::<F>(run_len, h);
    let mut rows = vec![Vec::new(); cell_of_node.len()];
    for (n, &(ix, iy)) in cell_of_node.iter().enumerate() {
        let (pos, run_start, run_len) = {
            let (mut s, mut e) = if along_x { (ix, ix) } else { (iy, iy) };
            let probe = |k: usize| -> bool {
                if along_x {
                    inside[iy * nx + k]
                } else {
                    inside[k * nx + ix]
                }
            };
            while s > 0 && probe(s - 1) {
                s -= 1;
            }
            let max = if along_x { nx } else { ny };
            while e + 1 < max && probe(e + 1) {
                e += 1;
            }
            let pos = if along_x { ix - s } else { iy - s };
            (pos, s, e - s + 1)
        };
        if run_len < 5 {
            return Err(Error::Geometry(format!(
                "mask run through cell ({ix},{iy}) is only {run_len} cells wide; 4th-order stencils need >= 5"
            )));
        }
        // Fornberg rows for this run length (lengths repeat, but runs are
        // cheap enough to rebuild per node at build time)
        let r = &base_rows(run_len)[pos];
        rows[n] = r
            .offsets
            .iter()
            .zip(r.weights.iter())
            .map(|(&o, &w)| {
                let k = (run_start as isize + pos as isize + o) as usize;
                let cell = if along_x { iy * nx + k } else { k * nx + ix };
                (node_of_cell[cell] as u32, w)
            })
            .collect();
    }
    Ok(SparseRows { rows })
}
