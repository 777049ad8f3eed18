//! Finite-difference weights on arbitrary node sets (Fornberg's recursion)
//! and the fixed 4th-order first-derivative stencil family used on uniform
//! grids: centered in the interior, biased/one-sided within two nodes of an
//! end. All variants are exact for polynomials of degree <= 4.

use crate::num::Scalar;

/// Weights of the `m`-th derivative at `z` over the nodes `x` (Fornberg).
///
/// Exact for polynomials of degree `x.len()-1`.
pub fn fd_weights<F: Scalar>(z: F, x: &[F], m: usize) -> Vec<F> {
    let n = x.len();
    assert!(n > m, "need more than m+1 nodes");
    // c[k][j]: weight of node j for the k-th derivative, built incrementally.
    let mut c = vec![vec![F::zero(); n]; m + 1];
    let mut c1 = F::one();
    let mut c4 = x[0] - z;
    c[0][0] = F::one();
    for i in 1..n {
        let mn = i.min(m);
        let mut c2 = F::one();
        let c5 = c4;
        c4 = x[i] - z;
        for j in 0..i {
            let c3 = x[i] - x[j];
            c2 = c2 * c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[k][i] = c1 * (F::of_usize(k) * c[k - 1][i - 1] - c5 * c[k][i - 1]) / c2;
                }
                c[0][i] = -c1 * c5 * c[0][i - 1] / c2;
            }
            for k in (1..=mn).rev() {
                c[k][j] = (c4 * c[k][j] - F::of_usize(k) * c[k - 1][j]) / c3;
            }
            c[0][j] = c4 * c[0][j] / c3;
        }
        c1 = c2;
    }
    c.pop().unwrap()
}

/// One row of a 1-D derivative operator: relative node offsets plus weights.
#[derive(Debug, Clone)]
pub struct StencilRow<F> {
    pub offsets: Vec<isize>,
    pub weights: Vec<F>,
}

/// 4th-order first-derivative rows for `n >= 5` uniformly spaced nodes.
///
/// Row `i` differentiates at node `i`; interior rows are the centered
/// 5-point stencil, the two rows nearest each end are biased.
pub fn first_derivative_rows<F: Scalar>(n: usize, spacing: F) -> Vec<StencilRow<F>> {
    assert!(n >= 5, "4th-order stencils need at least 5 nodes");
    let mut rows = Vec::with_capacity(n);
    for i in 0..n {
        let start: isize = if i < 2 {
            -(i as isize)
        } else if i + 2 >= n {
            (n as isize) - 5 - i as isize
        } else {
            -2
        };
        let offsets: Vec<isize> = (0..5).map(|k| start + k).collect();
        let xs: Vec<F> = offsets.iter().map(|&o| F::cst(o as f64) * spacing).collect();
        let mut weights = fd_weights(F::zero(), &xs, 1);
        zero_sum_correct(&mut weights);
        rows.push(StencilRow { offsets, weights });
    }
    rows
}

/// Force the weights of a derivative row to sum to exactly zero (the
/// analytic value); keeps the derivative of constants at round-off level.
fn zero_sum_correct<F: Scalar>(weights: &mut [F]) {
    let sum: F = weights.iter().copied().fold(F::zero(), |a, b| a + b);
    let (k, _) = weights
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.abs().partial_cmp(&b.1.abs()).unwrap())
        .unwrap();
    weights[k] -= sum;
}

/// Periodic 4th-order centered first-derivative row (same for every node).
pub fn periodic_first_derivative_row<F: Scalar>(spacing: F) -> StencilRow<F> {
    let offsets: Vec<isize> = vec![-2, -1, 0, 1, 2];
    let xs: Vec<F> = offsets.iter().map(|&o| F::cst(o as f64) * spacing).collect();
    let mut weights = fd_weights(F::zero(), &xs, 1);
    zero_sum_correct(&mut weights);
    StencilRow { offsets, weights }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn centered_weights_match_reference() {
        let xs: [f64; 5] = [-2.0, -1.0, 0.0, 1.0, 2.0];
        let w = fd_weights(0.0, &xs, 1);
        let expect = [1.0 / 12.0, -8.0 / 12.0, 0.0, 8.0 / 12.0, -1.0 / 12.0];
        for (a, b) in w.iter().zip(expect.iter()) {
            assert!((a - b).abs() < 1e-14, "{a} vs {b}");
        }
    }

    #[test]
    fn one_sided_weights_match_reference() {
        let xs: [f64; 5] = [0.0, 1.0, 2.0, 3.0, 4.0];
        let w = fd_weights(0.0, &xs, 1);
        let expect = [-25.0 / 12.0, 4.0, -3.0, 4.0 / 3.0, -0.25];
        for (a, b) in w.iter().zip(expect.iter()) {
            assert!((a - b).abs() < 1e-13, "{a} vs {b}");
        }
    }

    #[test]
    fn rows_exact_for_quartic() {
        let n = 9;
        let h = 0.3;
        let rows = first_derivative_rows::<f64>(n, h);
        let f = |x: f64| 1.5 - 2.0 * x + x.powi(2) - 0.25 * x.powi(3) + 0.125 * x.powi(4);
        let df = |x: f64| -2.0 + 2.0 * x - 0.75 * x.powi(2) + 0.5 * x.powi(3);
        for (i, row) in rows.iter().enumerate() {
            let x = i as f64 * h;
            let mut d = 0.0;
            for (o, w) in row.offsets.iter().zip(row.weights.iter()) {
                d += w * f((i as isize + o) as f64 * h);
            }
            assert!((d - df(x)).abs() < 1e-11, "node {i}: {d} vs {}", df(x));
        }
    }

    #[test]
    fn second_derivative_weights() {
        let xs: [f64; 3] = [-1.0, 0.0, 1.0];
        let w = fd_weights(0.0, &xs, 2);
        assert!((w[0] - 1.0).abs() < 1e-14);
        assert!((w[1] + 2.0).abs() < 1e-14);
        assert!((w[2] - 1.0).abs() < 1e-14);
    }
}
