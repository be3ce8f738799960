//! Sparsity constraints derived from compression rates.
//!
//! A column rate of `c` keeps ceil(width / c) columns in each block; a row
//! rate of `r` keeps ceil(rows / r) rows across the whole matrix. The
//! ceiling rule makes achieved overall rates deviate slightly from nominal
//! on non-divisible shapes.

use bsp_core::DenseMatrix;

use crate::error::PruneError;
use crate::partition::BlockPartition;

/// Rates are real-valued (e.g. 1.25) and must be at least 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PruneRates {
    pub col_rate: f64,
    pub row_rate: f64,
}

impl PruneRates {
    pub fn new(col_rate: f64, row_rate: f64) -> Result<Self, PruneError> {
        for rate in [col_rate, row_rate] {
            if !rate.is_finite() || rate < 1.0 {
                return Err(PruneError::BadRate { rate });
            }
        }
        Ok(PruneRates { col_rate, row_rate })
    }

    pub fn is_noop(&self) -> bool {
        self.col_rate == 1.0 && self.row_rate == 1.0
    }
}

/// keep = ceil(n / rate), clamped into [1, n]. IEEE division is correctly
/// rounded, so exact quotients (the divisible configurations) are hit
/// exactly and the ceiling never overshoots them.
pub fn keep_count(n: usize, rate: f64) -> Result<usize, PruneError> {
    if !rate.is_finite() || rate < 1.0 {
        return Err(PruneError::BadRate { rate });
    }
    if n == 0 {
        return Ok(0);
    }
    let keep = (n as f64 / rate).ceil() as usize;
    Ok(keep.clamp(1, n))
}

/// Keep counts for one matrix under one partition: a per-block column
/// budget (same for every strip) and a global row budget.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparsityConstraint {
    pub col_keep: Vec<usize>,
    pub row_keep: usize,
}

impl SparsityConstraint {
    pub fn from_rates(
        rows: usize,
        cols: usize,
        partition: BlockPartition,
        rates: PruneRates,
    ) -> Result<Self, PruneError> {
        let col_keep = partition
            .blocks(cols)
            .map(|b| keep_count(b.len(), rates.col_rate))
            .collect::<Result<Vec<_>, _>>()?;
        let row_keep = keep_count(rows, rates.row_rate)?;
        let sc = SparsityConstraint { col_keep, row_keep };
        sc.validate(rows, cols, partition)?;
        Ok(sc)
    }

    pub fn validate(
        &self,
        rows: usize,
        cols: usize,
        partition: BlockPartition,
    ) -> Result<(), PruneError> {
        if self.col_keep.len() != partition.block_count(cols) {
            return Err(PruneError::BadMask(format!(
                "{} column budgets for {} blocks",
                self.col_keep.len(),
                partition.block_count(cols)
            )));
        }
        for (&keep, range) in self.col_keep.iter().zip(partition.blocks(cols)) {
            if keep == 0 || keep > range.len() {
                return Err(PruneError::Infeasible {
                    keep,
                    available: range.len(),
                    context: "column keep out of block bounds",
                });
            }
        }
        if rows > 0 && (self.row_keep == 0 || self.row_keep > rows) {
            return Err(PruneError::Infeasible {
                keep: self.row_keep,
                available: rows,
                context: "row keep out of bounds",
            });
        }
        Ok(())
    }

    /// True when the column budgets allow every column (projection is the
    /// identity and the constraint is vacuous).
    pub fn cols_vacuous(&self, cols: usize, partition: BlockPartition) -> bool {
        self.col_keep
            .iter()
            .zip(partition.blocks(cols))
            .all(|(&k, b)| k == b.len())
    }

    pub fn rows_vacuous(&self, rows: usize) -> bool {
        self.row_keep == rows
    }

    /// Checks that each (strip, block) of `m` has at most its budget of
    /// columns with any nonzero entry.
    pub fn cols_satisfied(&self, m: &DenseMatrix, partition: BlockPartition) -> bool {
        for strip in partition.strips(m.rows()) {
            for (block_idx, block) in partition.blocks(m.cols()).enumerate() {
                let nonzero_cols = block
                    .clone()
                    .filter(|&c| strip.clone().any(|r| m.get(r, c) != 0.0))
                    .count();
                if nonzero_cols > self.col_keep[block_idx] {
                    return false;
                }
            }
        }
        true
    }

    /// Checks that at most `row_keep` rows of `m` are nonzero.
    pub fn rows_satisfied(&self, m: &DenseMatrix) -> bool {
        let nonzero_rows = (0..m.rows())
            .filter(|&r| m.row(r).iter().any(|&v| v != 0.0))
            .count();
        nonzero_rows <= self.row_keep
    }
}
