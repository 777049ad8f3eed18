//! Minimal CSR sparse matrix with parallel matvec.

use rayon::prelude::*;

use crate::num::Scalar;

#[derive(Debug, Clone)]
pub struct Csr<F> {
    pub rows: usize,
    pub cols: usize,
    pub indptr: Vec<usize>,
    pub indices: Vec<u32>,
    pub data: Vec<F>,
}

/// Row-by-row builder.
pub struct CsrBuilder<F> {
    cols: usize,
    indptr: Vec<usize>,
    indices: Vec<u32>,
    data: Vec<F>,
}

impl<F: Scalar> CsrBuilder<F> {
    pub fn new(cols: usize) -> Self {
        Self {
            cols,
            indptr: vec![0],
            indices: Vec::new(),
            data: Vec::new(),
        }
    }

    /// Append one row; entries need not be sorted, zero entries are dropped.
    pub fn push_row(&mut self, entries: &[(u32, F)]) {
        for &(c, v) in entries {
            debug_assert!((c as usize) < self.cols);
            if v != F::zero() {
                self.indices.push(c);
                self.data.push(v);
            }
        }
        self.indptr.push(self.indices.len());
    }

    pub fn finish(self) -> Csr<F> {
        Csr {
            rows: self.indptr.len() - 1,
            cols: self.cols,
            indptr: self.indptr,
            indices: self.indices,
            data: self.data,
        }
    }
}

impl<F: Scalar> Csr<F> {
    /// y = A x (row-parallel, deterministic).
    pub fn matvec(&self, x: &[F], y: &mut [F]) {
        debug_assert_eq!(x.len(), self.cols);
        debug_assert_eq!(y.len(), self.rows);
        y.par_iter_mut().enumerate().for_each(|(r, out)| {
            let mut acc = F::zero();
            for k in self.indptr[r]..self.indptr[r + 1] {
                acc += self.data[k] * x[self.indices[k] as usize];
            }
            *out = acc;
        });
    }

    /// Explicit transpose (CSR of A^T), built once at assembly time.
    pub fn transpose(&self) -> Csr<F> {
        let mut counts = vec![0usize; self.cols];
        for &c in &self.indices {
            counts[c as usize] += 1;
        }
        let mut indptr = vec![0usize; self.cols + 1];
        for i in 0..self.cols {
            indptr[i + 1] = indptr[i] + counts[i];
        }
        let nnz = self.indices.len();
        let mut indices = vec![0u32; nnz];
        let mut data = vec![F::zero(); nnz];
        let mut cursor = indptr.clone();
        for r in 0..self.rows {
            for k in self.indptr[r]..self.indptr[r + 1] {
                let c = self.indices[k] as usize;
                let dst = cursor[c];
                indices[dst] = r as u32;
                data[dst] = self.data[k];
                cursor[c] += 1;
            }
        }
        Csr {
            rows: self.cols,
            cols: self.rows,
            indptr,
            indices,
            data,
        }
    }

    /// Column sums of squared entries (the diagonal of A^T A).
    pub fn column_sq_sums(&self) -> Vec<F> {
        let mut diag = vec![F::zero(); self.cols];
        for (k, &c) in self.indices.iter().enumerate() {
            diag[c as usize] += self.data[k] * self.data[k];
        }
        diag
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Csr<f64> {
        let mut b = CsrBuilder::new(3);
        b.push_row(&[(0, 2.0), (2, -1.0)]);
        b.push_row(&[(1, 3.0)]);
        b.push_row(&[(0, 1.0), (1, 1.0), (2, 1.0)]);
        b.push_row(&[(2, 5.0)]);
        b.finish()
    }

    #[test]
    fn matvec_and_transpose() {
        let a = sample();
        let x = [1.0, 2.0, 3.0];
        let mut y = vec![0.0; 4];
        a.matvec(&x, &mut y);
        assert_eq!(y, vec![-1.0, 6.0, 6.0, 15.0]);

        let at = a.transpose();
        let mut z = vec![0.0; 3];
        at.matvec(&y, &mut z);
        // A^T y
        assert_eq!(z, vec![2.0 * -1.0 + 6.0, 3.0 * 6.0 + 6.0, 1.0 + 6.0 + 75.0]);
    }

    #[test]
    fn diag_of_normal_matrix() {
        let a = sample();
        let d = a.column_sq_sums();
        assert_eq!(d, vec![4.0 + 1.0, 9.0 + 1.0, 1.0 + 1.0 + 25.0]);
    }
}
