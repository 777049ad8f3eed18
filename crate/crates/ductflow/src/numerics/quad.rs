//! Quadrature on uniform 1-D grids: trapezoid weights, 4th-order
//! end-corrected (Gregory) weights, and 4th-order cumulative integrals built
//! from cubic-panel rules. The cumulative rule is also the one the damped
//! transport solver uses along characteristics.

use crate::num::Scalar;

/// Trapezoid weights on `n >= 2` nodes with spacing `h`. Sum is exactly
/// `(n-1) h`.
pub fn trapezoid_weights<F: Scalar>(n: usize, h: F) -> Vec<F> {
    assert!(n >= 2);
    let mut w = vec![h; n];
    w[0] = h * F::cst(0.5);
    w[n - 1] = h * F::cst(0.5);
    w
}

/// 4th-order Gregory weights on `n >= 8` nodes: trapezoid with the classic
/// end corrections 3/8, 7/6, 23/24. The corrections sum to zero, so the
/// weights still sum to exactly `(n-1) h`.
pub fn gregory_weights<F: Scalar>(n: usize, h: F) -> Vec<F> {
    assert!(n >= 8, "Gregory-4 needs at least 8 nodes");
    let mut w = vec![h; n];
    let ends = [F::cst(3.0 / 8.0), F::cst(7.0 / 6.0), F::cst(23.0 / 24.0)];
    for (k, &c) in ends.iter().enumerate() {
        w[k] = h * c;
        w[n - 1 - k] = h * c;
    }
    w
}

/// Weighted dot product: the discrete integral of `f` under weights `w`.
pub fn integrate<F: Scalar>(w: &[F], f: &[F]) -> F {
    debug_assert_eq!(w.len(), f.len());
    let mut acc = F::zero();
    for (wi, fi) in w.iter().zip(f.iter()) {
        acc += *wi * *fi;
    }
    acc
}

/// Cumulative integral `I[k] = int_{x0}^{xk} f` on a uniform grid, 4th order.
///
/// Each panel integrates the cubic through the four nearest nodes; interior
/// panels use the symmetric (-1, 13, 13, -1)/24 rule, the first and last
/// panel the biased (9, 19, -5, 1)/24 rule. Exact for cubics.
pub fn cumulative_integral<F: Scalar>(f: &[F], h: F) -> Vec<F> {
    let n = f.len();
    assert!(n >= 2, "cumulative integral needs at least 2 nodes");
    if n == 2 {
        return vec![F::zero(), h * F::cst(0.5) * (f[0] + f[1])];
    }
    if n == 3 {
        // quadratic through the three nodes
        let c12 = h / F::cst(12.0);
        let i1 = c12 * (F::cst(5.0) * f[0] + F::cst(8.0) * f[1] - f[2]);
        let i2 = h / F::cst(3.0) * (f[0] + F::cst(4.0) * f[1] + f[2]);
        return vec![F::zero(), i1, i2];
    }
    let c24 = h / F::cst(24.0);
    let mut out = Vec::with_capacity(n);
    out.push(F::zero());
    let mut acc = F::zero();
    for k in 0..n - 1 {
        let panel = if k == 0 {
            c24 * (F::cst(9.0) * f[0] + F::cst(19.0) * f[1] - F::cst(5.0) * f[2] + f[3])
        } else if k == n - 2 {
            c24 * (F::cst(9.0) * f[n - 1] + F::cst(19.0) * f[n - 2] - F::cst(5.0) * f[n - 3]
                + f[n - 4])
        } else {
            c24 * (F::cst(13.0) * (f[k] + f[k + 1]) - f[k - 1] - f[k + 2])
        };
        acc += panel;
        out.push(acc);
    }
    out
}
