//! Cyclic Jacobi eigensolver for small dense symmetric matrices.
//!
//! Used only for finite-difference Neumann Laplacians on gridded cross
//! sections (a few hundred to ~2000 nodes), where an O(n^3) dense solve is
//! perfectly adequate and keeps the crate scalar-generic.

use crate::error::{Error, Result};
use crate::num::Scalar;

/// Eigen-decomposition of a symmetric matrix, eigenvalues ascending.
pub struct SymmetricEigen<F> {
    pub eigenvalues: Vec<F>,
    /// `eigenvectors[k]` is the unit eigenvector of `eigenvalues[k]`.
    pub eigenvectors: Vec<Vec<F>>,
}

/// Cyclic Jacobi rotations until the off-diagonal Frobenius norm falls below
/// `1e-14 * ||A||_F` (or 60 sweeps, which is an error).
pub fn symmetric_eigen<F: Scalar>(matrix: &[Vec<F>]) -> Result<SymmetricEigen<F>> {
    let n = matrix.len();
    for row in matrix {
        assert_eq!(row.len(), n, "matrix must be square");
    }
    let mut a: Vec<F> = matrix.iter().flatten().copied().collect();
    let idx = |i: usize, j: usize| i * n + j;
    // v starts as identity; columns become eigenvectors.
    let mut v = vec![F::zero(); n * n];
    for i in 0..n {
        v[idx(i, i)] = F::one();
    }

    let frob = a.iter().fold(F::zero(), |s, &x| s + x * x).sqrt();
    let tol = F::cst(1e-14) * frob.max(F::min_positive_value());

    let off = |a: &[F]| {
        let mut s = F::zero();
        for i in 0..n {
            for j in (i + 1)..n {
                s += a[idx(i, j)] * a[idx(i, j)];
            }
        }
        (s + s).sqrt()
    };

    let mut converged = false;
    for _sweep in 0..60 {
        if off(&a) <= tol {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[idx(p, q)];
                if apq.abs() <= tol * F::cst(1e-3) {
                    continue;
                }
                let app = a[idx(p, p)];
                let aqq = a[idx(q, q)];
                let theta = (aqq - app) / (F::cst(2.0) * apq);
                let t = {
                    let s = if theta >= F::zero() { F::one() } else { -F::one() };
                    s / (theta.abs() + (F::one() + theta * theta).sqrt())
                };
                let c = F::one() / (F::one() + t * t).sqrt();
                let s = t * c;
                // Update rows/columns p and q.
                for k in 0..n {
                    let akp = a[idx(k, p)];
                    let akq = a[idx(k, q)];
                    a[idx(k, p)] = c * akp - s * akq;
                    a[idx(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[idx(p, k)];
                    let aqk = a[idx(q, k)];
                    a[idx(p, k)] = c * apk - s * aqk;
                    a[idx(q, k)] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[idx(k, p)];
                    let vkq = v[idx(k, q)];
                    v[idx(k, p)] = c * vkp - s * vkq;
                    v[idx(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    if !converged && off(&a) > tol {
        return Err(Error::EigenNonConvergence(format!(
            "off-diagonal norm {:.3e} above tolerance {:.3e} after 60 sweeps",
            off(&a).as_f64(),
            tol.as_f64()
        )));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        a[idx(i, i)]
            .partial_cmp(&a[idx(j, j)])
            .expect("eigenvalues are finite")
    });
    let eigenvalues: Vec<F> = order.iter().map(|&k| a[idx(k, k)]).collect();
    let eigenvectors: Vec<Vec<F>> = order
        .iter()
        .map(|&k| (0..n).map(|i| v[idx(i, k)]).collect())
        .collect();
    Ok(SymmetricEigen {
        eigenvalues,
        eigenvectors,
    })
}
