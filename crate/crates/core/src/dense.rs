//! Row-major dense matrices over f64.

use crate::error::CoreError;

/// Row-major dense matrix. `values.len() == rows * cols` always holds.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    values: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix {
            rows,
            cols,
            values: vec![0.0; rows * cols],
        }
    }

    /// Builds a matrix from row-major values, rejecting length mismatches and
    /// non-finite entries.
    pub fn from_vec(rows: usize, cols: usize, values: Vec<f64>) -> Result<Self, CoreError> {
        if values.len() != rows * cols {
            return Err(CoreError::DimMismatch {
                expected: rows * cols,
                got: values.len(),
                context: "DenseMatrix::from_vec values length",
            });
        }
        if !values.iter().all(|v| v.is_finite()) {
            return Err(CoreError::NonFinite {
                context: "DenseMatrix::from_vec",
            });
        }
        Ok(DenseMatrix { rows, cols, values })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut values = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                values.push(f(r, c));
            }
        }
        DenseMatrix { rows, cols, values }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> f64 {
        debug_assert!(r < self.rows && c < self.cols);
        self.values[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: f64) {
        debug_assert!(r < self.rows && c < self.cols);
        self.values[r * self.cols + c] = v;
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[f64] {
        &self.values[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_mut(&mut self, r: usize) -> &mut [f64] {
        &mut self.values[r * self.cols..(r + 1) * self.cols]
    }

    /// y = A x. Accumulates each output row left to right in column order.
    pub fn matvec(&self, x: &[f64]) -> Result<Vec<f64>, CoreError> {
        let mut y = vec![0.0; self.rows];
        self.matvec_into(x, &mut y)?;
        Ok(y)
    }

    /// `matvec` into a caller-owned buffer, so hot paths can reuse it.
    pub fn matvec_into(&self, x: &[f64], y: &mut [f64]) -> Result<(), CoreError> {
        if x.len() != self.cols {
            return Err(CoreError::DimMismatch {
                expected: self.cols,
                got: x.len(),
                context: "matvec input length",
            });
        }
        if y.len() != self.rows {
            return Err(CoreError::DimMismatch {
                expected: self.rows,
                got: y.len(),
                context: "matvec output length",
            });
        }
        for (r, out) in y.iter_mut().enumerate() {
            let row = self.row(r);
            let mut acc = 0.0;
            for (w, xv) in row.iter().zip(x) {
                acc += w * xv;
            }
            *out = acc;
        }
        Ok(())
    }

    /// y = A^T x, used by backpropagation.
    pub fn matvec_transpose(&self, x: &[f64]) -> Result<Vec<f64>, CoreError> {
        if x.len() != self.rows {
            return Err(CoreError::DimMismatch {
                expected: self.rows,
                got: x.len(),
                context: "matvec_transpose input length",
            });
        }
        let mut y = vec![0.0; self.cols];
        for (r, xv) in x.iter().enumerate() {
            let row = self.row(r);
            for (out, w) in y.iter_mut().zip(row) {
                *out += w * xv;
            }
        }
        Ok(y)
    }

    /// self += scale * a b^T (outer-product accumulation for gradients).
    pub fn add_scaled_outer(&mut self, scale: f64, a: &[f64], b: &[f64]) {
        debug_assert_eq!(a.len(), self.rows);
        debug_assert_eq!(b.len(), self.cols);
        for (r, av) in a.iter().enumerate() {
            let factor = scale * av;
            let row = self.row_mut(r);
            for (w, bv) in row.iter_mut().zip(b) {
                *w += factor * bv;
            }
        }
    }

    /// self += scale * other, elementwise.
    pub fn add_scaled(&mut self, scale: f64, other: &DenseMatrix) {
        debug_assert_eq!(self.rows, other.rows);
        debug_assert_eq!(self.cols, other.cols);
        for (v, o) in self.values.iter_mut().zip(&other.values) {
            *v += scale * o;
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn nnz(&self) -> usize {
        self.values.iter().filter(|v| **v != 0.0).count()
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    pub fn same_shape(&self, other: &DenseMatrix) -> bool {
        self.rows == other.rows && self.cols == other.cols
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn from_vec_rejects_bad_length() {
        assert!(DenseMatrix::from_vec(2, 2, vec![1.0, 2.0, 3.0]).is_err());
    }

    #[test]
    fn from_vec_rejects_nan() {
        assert!(DenseMatrix::from_vec(1, 2, vec![1.0, f64::NAN]).is_err());
    }

    #[test]
    fn matvec_small() {
        let m = DenseMatrix::from_vec(2, 3, vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0]).unwrap();
        let y = m.matvec(&[1.0, 0.0, -1.0]).unwrap();
        assert_eq!(y, vec![-2.0, -2.0]);
    }

    #[test]
    fn matvec_transpose_matches_manual() {
        let m = DenseMatrix::from_vec(2, 2, vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        let y = m.matvec_transpose(&[1.0, 2.0]).unwrap();
        assert_eq!(y, vec![1.0 + 6.0, 2.0 + 8.0]);
    }

    #[test]
    fn matvec_dim_mismatch() {
        let m = DenseMatrix::zeros(2, 3);
        assert!(m.matvec(&[0.0; 2]).is_err());
    }
}
