//! Thomas algorithm for tridiagonal systems.

use crate::num::Scalar;

/// Solve a tridiagonal system in place.
///
/// `lower[i]` multiplies `x[i]` in row `i+1`, `upper[i]` multiplies `x[i+1]`
/// in row `i`. No pivoting; intended for the diagonally dominant mode-ODE
/// matrices.
pub fn solve_tridiagonal<F: Scalar>(lower: &[F], diag: &[F], upper: &[F], rhs: &mut [F]) {
    let n = rhs.len();
    assert_eq!(diag.len(), n);
    assert_eq!(lower.len(), n - 1);
    assert_eq!(upper.len(), n - 1);
    let mut c = vec![F::zero(); n - 1];
    c[0] = upper[0] / diag[0];
    rhs[0] = rhs[0] / diag[0];
    for i in 1..n {
        let m = diag[i] - lower[i - 1] * c[i - 1];
        if i < n - 1 {
            c[i] = upper[i] / m;
        }
        rhs[i] = (rhs[i] - lower[i - 1] * rhs[i - 1]) / m;
    }
    for i in (0..n - 1).rev() {
        let next = rhs[i + 1];
        rhs[i] = rhs[i] - c[i] * next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_random_system() {
        // Deterministic pseudo-random diagonally dominant system.
        let n = 40;
        let mut state = 0x12345678u64;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        let lower: Vec<f64> = (0..n - 1).map(|_| next()).collect();
        let upper: Vec<f64> = (0..n - 1).map(|_| next()).collect();
        let diag: Vec<f64> = (0..n).map(|_| 4.0 + next()).collect();
        let x_true: Vec<f64> = (0..n).map(|_| next()).collect();
        let mut rhs = vec![0.0; n];
        for i in 0..n {
            rhs[i] = diag[i] * x_true[i];
            if i > 0 {
                rhs[i] += lower[i - 1] * x_true[i - 1];
            }
            if i < n - 1 {
                rhs[i] += upper[i] * x_true[i + 1];
            }
        }
        solve_tridiagonal(&lower, &diag, &upper, &mut rhs);
        for (a, b) in rhs.iter().zip(x_true.iter()) {
            assert!((a - b).abs() < 1e-12);
        }
    }
}
