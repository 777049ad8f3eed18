//! Bessel functions of the first kind and the roots of their derivatives,
//! which give the Neumann eigenvalues of the disk.
//!
//! J_m is evaluated by the ascending series for small arguments and by
//! Miller's backward recurrence beyond; roots of J_m' are bracketed by a
//! coarse scan and refined by bisection to 1e-12 (the eigenvalues are the
//! squared roots, so root accuracy enters quadratically).

use crate::num::Scalar;

/// Absolute bisection tolerance for derivative roots.
pub const ROOT_TOL: f64 = 1e-12;

/// J_m(x) for m >= 0, x >= 0.
pub fn bessel_j<F: Scalar>(m: usize, x: F) -> F {
    if x == F::zero() {
        return if m == 0 { F::one() } else { F::zero() };
    }
    if x <= F::cst(18.0) {
        series_j(m, x)
    } else {
        miller_j(m, x)
    }
}

/// d/dx J_m(x).
pub fn bessel_j_prime<F: Scalar>(m: usize, x: F) -> F {
    if m == 0 {
        -bessel_j(1, x)
    } else {
        (bessel_j(m - 1, x) - bessel_j(m + 1, x)) * F::cst(0.5)
    }
}

fn series_j<F: Scalar>(m: usize, x: F) -> F {
    let half = x * F::cst(0.5);
    // leading (x/2)^m / m!
    let mut term = F::one();
    for k in 1..=m {
        term = term * half / F::of_usize(k);
    }
    let mut sum = term;
    let neg_q = -(half * half);
    let mut k = 1usize;
    loop {
        term = term * neg_q / (F::of_usize(k) * F::of_usize(k + m));
        sum += term;
        if term.abs() <= sum.abs() * F::cst(1e-17) + F::cst(1e-300) || k > 200 {
            break;
        }
        k += 1;
    }
    sum
}

fn miller_j<F: Scalar>(m: usize, x: F) -> F {
    let start = (m + 20 + x.as_f64() as usize).max(40);
    let mut jp = F::zero(); // J_{k+1}
    let mut j = F::cst(1e-30); // J_k
    let mut result = F::zero();
    let mut norm = F::zero(); // J_0 + 2 sum J_{2k}
    for k in (0..=start).rev() {
        let jm = F::of_usize(2 * (k + 1)) / x * j - jp; // J_k from J_{k+1}, J_{k+2}
        jp = j;
        j = jm;
        // j now holds J_k, jp holds J_{k+1}
        if k == m {
            result = j;
        }
        if k % 2 == 0 {
            norm += if k == 0 { j } else { j + j };
        }
        // Rescale to avoid overflow of the unnormalized recurrence.
        if j.abs() > F::cst(1e200) {
            let s = F::cst(1e-200);
            j = j * s;
            jp = jp * s;
            result = result * s;
            norm = norm * s;
        }
    }
    result / norm
}

/// First `count` positive roots of J_m', ascending.
///
/// x = 0 is excluded even for m = 0 (the corresponding eigenfunction is the
/// constant, handled separately by the basis builder).
pub fn bessel_j_prime_roots<F: Scalar>(m: usize, count: usize) -> Vec<F> {
    let mut roots = Vec::with_capacity(count);
    let step = F::cst(0.05);
    // J_m' has no positive root below the first max, which is past m^(1/?) ~ m;
    // start the scan just above zero and walk up.
    let mut x0 = if m == 0 { F::cst(0.5) } else { F::cst(1e-3) };
    let mut f0 = bessel_j_prime(m, x0);
    let mut x = x0;
    while roots.len() < count {
        x = x + step;
        let f = bessel_j_prime(m, x);
        if f0 == F::zero() {
            roots.push(x0);
        } else if f0.signum() != f.signum() {
            roots.push(bisect(m, x0, x));
        }
        x0 = x;
        f0 = f;
        if x.as_f64() > 1e4 {
            break; // defensive; callers never need roots this large
        }
    }
    roots
}

fn bisect<F: Scalar>(m: usize, mut lo: F, mut hi: F) -> F {
    let mut flo = bessel_j_prime(m, lo);
    let tol = F::cst(ROOT_TOL);
    while hi - lo > tol {
        let mid = (lo + hi) * F::cst(0.5);
        let fmid = bessel_j_prime(m, mid);
        if fmid == F::zero() {
            return mid;
        }
        if flo.signum() != fmid.signum() {
            hi = mid;
        } else {
            lo = mid;
            flo = fmid;
        }
    }
    (lo + hi) * F::cst(0.5)
}
