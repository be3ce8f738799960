//! Compressed sparse row form, used as the baseline for index-size
//! comparisons and as a bridge to conventional sparse tooling.

use bsp_core::DenseMatrix;

use crate::matrix::BspcMatrix;

#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    rows: usize,
    cols: usize,
    /// `rows + 1` offsets into `col_idx`/`values`; nondecreasing.
    row_ptr: Vec<u32>,
    /// Column id of each stored entry, sorted within each row.
    col_idx: Vec<u32>,
    values: Vec<f64>,
}

impl CsrMatrix {
    /// Builds CSR from a dense matrix, dropping exact zeros.
    pub fn from_dense(m: &DenseMatrix) -> Self {
        let mut row_ptr = Vec::with_capacity(m.rows() + 1);
        let mut col_idx = Vec::new();
        let mut values = Vec::new();
        row_ptr.push(0);
        for r in 0..m.rows() {
            for (c, &v) in m.row(r).iter().enumerate() {
                if v != 0.0 {
                    col_idx.push(c as u32);
                    values.push(v);
                }
            }
            row_ptr.push(col_idx.len() as u32);
        }
        CsrMatrix {
            rows: m.rows(),
            cols: m.cols(),
            row_ptr,
            col_idx,
            values,
        }
    }

    /// Builds CSR over the compact form's structural support: every kept
    /// grid cell becomes an entry, explicit zeros included, so both
    /// formats index the same set of stored positions.
    pub fn from_bspc(b: &BspcMatrix) -> Self {
        let mut row_ptr = Vec::with_capacity(b.rows() + 1);
        let mut col_idx = Vec::new();
        let mut values = Vec::new();
        row_ptr.push(0);
        let mut next = 0usize; // next dense row owed an end pointer
        for s in 0..b.partition().strip_count(b.rows()) {
            for (i, &r) in b.strip_kept_rows(s).iter().enumerate() {
                // Pruned rows between kept rows stay empty.
                for _ in next..r as usize {
                    row_ptr.push(col_idx.len() as u32);
                }
                // Blocks come in ascending column order, so the row's
                // entries land sorted.
                for (ids, grid) in b.kept_cols()[s].iter().zip(&b.values()[s]) {
                    for (j, &c) in ids.iter().enumerate() {
                        col_idx.push(c);
                        values.push(grid[i * ids.len() + j]);
                    }
                }
                row_ptr.push(col_idx.len() as u32);
                next = r as usize + 1;
            }
        }
        for _ in next..b.rows() {
            row_ptr.push(col_idx.len() as u32);
        }
        CsrMatrix {
            rows: b.rows(),
            cols: b.cols(),
            row_ptr,
            col_idx,
            values,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row_ptr(&self) -> &[u32] {
        &self.row_ptr
    }

    pub fn col_idx(&self) -> &[u32] {
        &self.col_idx
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut m = DenseMatrix::zeros(self.rows, self.cols);
        for r in 0..self.rows {
            let span = self.row_ptr[r] as usize..self.row_ptr[r + 1] as usize;
            for k in span {
                m.set(r, self.col_idx[k] as usize, self.values[k]);
            }
        }
        m
    }
}
