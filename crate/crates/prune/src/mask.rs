//! Structured masks: the indicator of a block-sparse support, stored as the
//! index lists that generate it (global kept rows, per-block kept columns)
//! rather than as a raw grid, so structure is correct by construction.

use bsp_core::gru::{GruParams, MatrixId};
use bsp_core::mask::WeightMask;
use bsp_core::DenseMatrix;

use crate::error::PruneError;
use crate::partition::BlockPartition;
use crate::projection::KeptCols;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructuredMask {
    rows: usize,
    cols: usize,
    partition: BlockPartition,
    /// Sorted global ids of surviving rows.
    kept_rows: Vec<u32>,
    /// Sorted global column ids per (strip, block).
    kept_cols: KeptCols,
}

fn check_sorted_unique_in(ids: &[u32], lo: u32, hi: u32, what: &str) -> Result<(), PruneError> {
    for pair in ids.windows(2) {
        if pair[0] >= pair[1] {
            return Err(PruneError::BadMask(format!(
                "{what} ids not strictly ascending: {} then {}",
                pair[0], pair[1]
            )));
        }
    }
    if let (Some(&first), Some(&last)) = (ids.first(), ids.last()) {
        if first < lo || last >= hi {
            return Err(PruneError::BadMask(format!(
                "{what} ids outside [{lo}, {hi})"
            )));
        }
    }
    Ok(())
}

impl StructuredMask {
    pub fn new(
        rows: usize,
        cols: usize,
        partition: BlockPartition,
        kept_rows: Vec<u32>,
        kept_cols: KeptCols,
    ) -> Result<Self, PruneError> {
        check_sorted_unique_in(&kept_rows, 0, rows as u32, "row")?;
        if kept_cols.len() != partition.strip_count(rows) {
            return Err(PruneError::BadMask(format!(
                "{} strip column lists for {} strips",
                kept_cols.len(),
                partition.strip_count(rows)
            )));
        }
        for (strip_idx, strip_cols) in kept_cols.iter().enumerate() {
            if strip_cols.len() != partition.block_count(cols) {
                return Err(PruneError::BadMask(format!(
                    "strip {strip_idx} has {} block lists for {} blocks",
                    strip_cols.len(),
                    partition.block_count(cols)
                )));
            }
            for (block_idx, ids) in strip_cols.iter().enumerate() {
                let range = partition.block_range(cols, block_idx);
                check_sorted_unique_in(ids, range.start as u32, range.end as u32, "column")?;
            }
        }
        Ok(StructuredMask {
            rows,
            cols,
            partition,
            kept_rows,
            kept_cols,
        })
    }

    pub fn all_true(rows: usize, cols: usize, partition: BlockPartition) -> Self {
        let kept_rows = (0..rows as u32).collect();
        let kept_cols = partition
            .strips(rows)
            .map(|_| {
                partition
                    .blocks(cols)
                    .map(|b| (b.start as u32..b.end as u32).collect())
                    .collect()
            })
            .collect();
        StructuredMask {
            rows,
            cols,
            partition,
            kept_rows,
            kept_cols,
        }
    }

    /// Reads the support of `m` back into index lists. Fails unless the
    /// support is exactly a (kept rows) x (per-block kept columns) product:
    /// every surviving row of a strip must light up the same column set.
    /// A validation helper for matrices whose kept entries are nonzero; a
    /// kept weight that happens to equal 0.0 exactly would look ragged.
    pub fn from_support(m: &DenseMatrix, partition: BlockPartition) -> Result<Self, PruneError> {
        let kept_rows: Vec<u32> = (0..m.rows())
            .filter(|&r| m.row(r).iter().any(|&v| v != 0.0))
            .map(|r| r as u32)
            .collect();
        let mut kept_cols = Vec::new();
        for strip in partition.strips(m.rows()) {
            let mut strip_cols = Vec::new();
            for block in partition.blocks(m.cols()) {
                let cols: Vec<u32> = block
                    .clone()
                    .filter(|&c| strip.clone().any(|r| m.get(r, c) != 0.0))
                    .map(|c| c as u32)
                    .collect();
                strip_cols.push(cols);
            }
            kept_cols.push(strip_cols);
        }
        let mask = StructuredMask::new(m.rows(), m.cols(), partition, kept_rows, kept_cols)?;
        // The minimal product above always covers the support; equality
        // fails exactly when the support is ragged (some covered cell is
        // zero while its row and column are otherwise alive).
        for r in 0..m.rows() {
            for c in 0..m.cols() {
                if (m.get(r, c) != 0.0) != mask.contains(r, c) {
                    return Err(PruneError::BadMask(format!(
                        "support at ({r},{c}) is not a row x column product"
                    )));
                }
            }
        }
        Ok(mask)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn partition(&self) -> BlockPartition {
        self.partition
    }

    pub fn kept_rows(&self) -> &[u32] {
        &self.kept_rows
    }

    pub fn kept_cols(&self) -> &KeptCols {
        &self.kept_cols
    }

    pub fn row_kept(&self, r: usize) -> bool {
        self.kept_rows.binary_search(&(r as u32)).is_ok()
    }

    pub fn contains(&self, r: usize, c: usize) -> bool {
        if !self.row_kept(r) {
            return false;
        }
        let strip = self.partition.strip_of_row(self.rows, r);
        let block = self.partition.block_of_col(self.cols, c);
        self.kept_cols[strip][block]
            .binary_search(&(c as u32))
            .is_ok()
    }

    /// The boolean indicator grid, row-major.
    pub fn grid(&self) -> Vec<bool> {
        let mut g = vec![false; self.rows * self.cols];
        for &r in &self.kept_rows {
            let strip = self.partition.strip_of_row(self.rows, r as usize);
            for ids in &self.kept_cols[strip] {
                for &c in ids {
                    g[r as usize * self.cols + c as usize] = true;
                }
            }
        }
        g
    }

    /// Surviving entry count: for each strip, (kept rows in strip) x (kept
    /// columns across the strip's blocks).
    pub fn nnz(&self) -> usize {
        self.partition
            .strips(self.rows)
            .enumerate()
            .map(|(s, range)| {
                let rows_here = self
                    .kept_rows
                    .iter()
                    .filter(|&&r| range.contains(&(r as usize)))
                    .count();
                let cols_here: usize = self.kept_cols[s].iter().map(|ids| ids.len()).sum();
                rows_here * cols_here
            })
            .sum()
    }

    /// Zeroes every masked entry of `m` in place.
    pub fn apply(&self, m: &mut DenseMatrix) {
        for r in 0..self.rows {
            for c in 0..self.cols {
                if !self.contains(r, c) {
                    m.set(r, c, 0.0);
                }
            }
        }
    }
}

/// One structured mask per prunable matrix, in `MatrixId` order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GruMasks {
    pub masks: [StructuredMask; 6],
}

impl GruMasks {
    pub fn get(&self, id: MatrixId) -> &StructuredMask {
        &self.masks[id.index()]
    }

    pub fn all_true(params: &GruParams, partitions: &[BlockPartition; 6]) -> Self {
        let masks = MatrixId::ALL.map(|id| {
            let m = params.matrix(id);
            StructuredMask::all_true(m.rows(), m.cols(), partitions[id.index()])
        });
        GruMasks { masks }
    }

    /// Total surviving entries across the six prunable matrices.
    pub fn nnz(&self) -> usize {
        self.masks.iter().map(|m| m.nnz()).sum()
    }

    /// Total prunable entries (mask grid sizes).
    pub fn prunable(&self) -> usize {
        self.masks.iter().map(|m| m.rows() * m.cols()).sum()
    }

    /// Converts to the dense boolean form used by mask-respecting training.
    pub fn to_weight_mask(&self) -> WeightMask {
        let grids = [0, 1, 2, 3, 4, 5].map(|i| self.masks[i].grid());
        let shapes = [0, 1, 2, 3, 4, 5].map(|i| (self.masks[i].rows(), self.masks[i].cols()));
        WeightMask::from_grids(grids, shapes).expect("grids are sized by construction")
    }

    /// Zeroes masked entries of every prunable matrix.
    pub fn apply(&self, params: &mut GruParams) {
        for id in MatrixId::ALL {
            self.masks[id.index()].apply(params.matrix_mut(id));
        }
    }
}
