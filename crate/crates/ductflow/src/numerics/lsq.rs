//! Least-squares solver: conjugate gradient on the normal equations
//! (CGNR) with Jacobi (diagonal) preconditioning.
//!
//! Minimizes ||A x - b||_2. Convergence is measured on the preconditioned
//! normal residual A^T (b - A x) relative to A^T b; dot products are summed
//! serially so results are bit-reproducible run to run.

use crate::error::{Error, Result};
use crate::num::Scalar;
use crate::numerics::csr::Csr;

pub struct LsqSolution<F> {
    pub x: Vec<F>,
    pub iterations: usize,
    /// Relative normal-equation residual per iteration.
    pub history: Vec<f64>,
}

pub struct LsqSolver<F> {
    a: Csr<F>,
    at: Csr<F>,
    /// Inverse diagonal of A^T A, zero where a column is empty.
    inv_diag: Vec<F>,
}

fn dot<F: Scalar>(a: &[F], b: &[F]) -> F {
    let mut s = F::zero();
    for (x, y) in a.iter().zip(b.iter()) {
        s += *x * *y;
    }
    s
}

impl<F: Scalar> LsqSolver<F> {
    pub fn new(a: Csr<F>) -> Self {
        let at = a.transpose();
        let inv_diag = a
            .column_sq_sums()
            .into_iter()
            .map(|d| if d > F::zero() { F::one() / d } else { F::zero() })
            .collect();
        Self { a, at, inv_diag }
    }

    pub fn matrix(&self) -> &Csr<F> {
        &self.a
    }

    /// Residual b - A x.
    pub fn residual(&self, x: &[F], b: &[F]) -> Vec<F> {
        let mut ax = vec![F::zero(); self.a.rows];
        self.a.matvec(x, &mut ax);
        ax.iter().zip(b.iter()).map(|(a, b)| *b - *a).collect()
    }

    /// Solve min ||A x - b|| starting from `x0` (zeros if absent).
    pub fn solve(
        &self,
        b: &[F],
        x0: Option<&[F]>,
        rel_tol: F,
        max_iter: usize,
    ) -> Result<LsqSolution<F>> {
        let n = self.a.cols;
        let mut x = match x0 {
            Some(x0) => {
                debug_assert_eq!(x0.len(), n);
                x0.to_vec()
            }
            None => vec![F::zero(); n],
        };

        let mut atb = vec![F::zero(); n];
        self.at.matvec(b, &mut atb);
        let norm_atb = dot(&atb, &atb).sqrt();
        if norm_atb == F::zero() {
            // b is orthogonal to the range; the zero vector is the answer.
            return Ok(LsqSolution {
                x: vec![F::zero(); n],
                iterations: 0,
                history: vec![0.0],
            });
        }

        let mut r = self.residual(&x, b);
        let mut s = vec![F::zero(); n];
        self.at.matvec(&r, &mut s);
        let mut z: Vec<F> = s.iter().zip(&self.inv_diag).map(|(si, d)| *si * *d).collect();
        let mut p = z.clone();
        let mut gamma = dot(&s, &z);
        let mut q = vec![F::zero(); self.a.rows];
        let mut history = Vec::new();

        let mut rel = dot(&s, &s).sqrt() / norm_atb;
        history.push(rel.as_f64());
        if rel <= rel_tol {
            return Ok(LsqSolution {
                x,
                iterations: 0,
                history,
            });
        }

        for it in 1..=max_iter {
            self.a.matvec(&p, &mut q);
            let qq = dot(&q, &q);
            if qq == F::zero() {
                break; // p is in the null space; nothing further to gain
            }
            let alpha = gamma / qq;
            for i in 0..n {
                x[i] += alpha * p[i];
            }
            for i in 0..r.len() {
                r[i] -= alpha * q[i];
            }
            self.at.matvec(&r, &mut s);
            for i in 0..n {
                z[i] = s[i] * self.inv_diag[i];
            }
            let gamma_new = dot(&s, &z);
            rel = dot(&s, &s).sqrt() / norm_atb;
            history.push(rel.as_f64());
            if rel <= rel_tol {
                return Ok(LsqSolution {
                    x,
                    iterations: it,
                    history,
                });
            }
            let beta = gamma_new / gamma;
            gamma = gamma_new;
            for i in 0..n {
                p[i] = z[i] + beta * p[i];
            }
        }
        Err(Error::SolverNonConvergence {
            iterations: max_iter,
            residual: rel.as_f64(),
            history,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::csr::CsrBuilder;

    #[test]
    fn solves_overdetermined_system() {
        // 4x2 full-rank system; compare with the normal-equation solution.
        let mut b = CsrBuilder::new(2);
        b.push_row(&[(0, 1.0), (1, 1.0)]);
        b.push_row(&[(0, 1.0), (1, -1.0)]);
        b.push_row(&[(0, 2.0), (1, 1.0)]);
        b.push_row(&[(0, 1.0), (1, 3.0)]);
        let a = b.finish();
        let rhs: Vec<f64> = vec![2.0, 0.5, 3.0, 3.5];
        let sol = LsqSolver::new(a).solve(&rhs, None, 1e-14, 100).unwrap();
        // Normal equations: [7 5; 5 12] x = [12; 15]
        let det = 7.0 * 12.0 - 25.0;
        let x0 = (12.0 * 12.0 - 5.0 * 15.0) / det;
        let x1 = (7.0 * 15.0 - 5.0 * 12.0) / det;
        assert!((sol.x[0] - x0).abs() < 1e-12);
        assert!((sol.x[1] - x1).abs() < 1e-12);
    }

    #[test]
    fn zero_rhs_returns_exact_zero() {
        let mut b = CsrBuilder::new(2);
        b.push_row(&[(0, 1.0)]);
        b.push_row(&[(1, 1.0)]);
        let sol = LsqSolver::new(b.finish())
            .solve(&[0.0, 0.0], None, 1e-14, 10)
            .unwrap();
        assert_eq!(sol.x, vec![0.0, 0.0]);
        assert_eq!(sol.iterations, 0);
    }

    #[test]
    fn reports_history_on_failure() {
        let mut b = CsrBuilder::new(2);
        b.push_row(&[(0, 1.0), (1, 0.999)]);
        b.push_row(&[(0, 0.999), (1, 1.0)]);
        b.push_row(&[(0, 1.0), (1, 1.0)]);
        let rhs: [f64; 3] = [1.0, 2.0, 0.0];
        let err = match LsqSolver::new(b.finish()).solve(&rhs, None, 1e-16, 1) {
            Err(e) => e,
            Ok(_) => panic!("expected non-convergence"),
        };
        match err {
            Error::SolverNonConvergence { history, .. } => assert!(history.len() >= 2),
            other => panic!("unexpected error {other:?}"),
        }
    }
}
