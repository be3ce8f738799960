//! The compact block-sparse matrix: index lists plus dense value grids.
//!
//! A `BspcMatrix` stores one global list of surviving rows and, per
//! (strip, block) cell of the partition, the block's surviving column ids
//! followed by a dense row-major grid of the values at (strip's kept rows)
//! x (block's kept columns). Because every surviving row of a strip shares
//! the strip's column choices, no per-element indices are needed — index
//! storage is one entry per kept row plus one per kept column, which
//! undercuts CSR's one-entry-per-nonzero index array.

use std::ops::Range;

use bsp_core::DenseMatrix;
use bsp_prune::BlockPartition;

use crate::error::{BspcError, Result};

/// Per-(strip, block) payload lists: `[strip][block]` indexing.
pub type StripBlocks<T> = Vec<Vec<T>>;

#[derive(Debug, Clone, PartialEq)]
pub struct BspcMatrix {
    rows: usize,
    cols: usize,
    partition: BlockPartition,
    /// Sorted global ids of surviving rows.
    kept_rows: Vec<u32>,
    /// Sorted global column ids per (strip, block). Strips with no
    /// surviving rows store empty lists (canonical form; see `new`).
    kept_cols: StripBlocks<Vec<u32>>,
    /// Row-major value grid per (strip, block), sized
    /// (kept rows in strip) x (kept cols in block).
    values: StripBlocks<Vec<f64>>,
    /// Optional execution-order permutation of `kept_rows`: the same ids,
    /// reordered by the scheduling pass.
    row_perm: Option<Vec<u32>>,
    /// FNV-1a over the index words (shape, partition, kept rows, kept
    /// columns), computed once at construction. Values and the row
    /// permutation are excluded: matrices sharing a digest accept the same
    /// execution schedules.
    digest: u64,
}

/// Incremental FNV-1a over little-endian u32 words.
struct IndexHasher(u64);

impl IndexHasher {
    fn new() -> Self {
        IndexHasher(0xcbf2_9ce4_8422_2325)
    }

    fn mix(&mut self, word: u32) {
        for byte in word.to_le_bytes() {
            self.0 = (self.0 ^ u64::from(byte)).wrapping_mul(0x100_0000_01b3);
        }
    }
}

fn check_ids(ids: &[u32], lo: usize, hi: usize, what: &str) -> Result<()> {
    for pair in ids.windows(2) {
        if pair[0] >= pair[1] {
            return Err(BspcError::Invalid(format!(
                "{what} ids not strictly ascending: {} then {}",
                pair[0], pair[1]
            )));
        }
    }
    if let (Some(&first), Some(&last)) = (ids.first(), ids.last()) {
        if (first as usize) < lo || last as usize >= hi {
            return Err(BspcError::Invalid(format!(
                "{what} ids outside [{lo}, {hi})"
            )));
        }
    }
    Ok(())
}

impl BspcMatrix {
    /// Validates and assembles a matrix from its parts.
    ///
    /// Canonical-form rule: a strip with no surviving rows must store empty
    /// column lists and empty grids. The rule costs nothing (the grids
    /// would be empty anyway) and guarantees the index never stores column
    /// ids that no row uses, which keeps the compactness bound against CSR
    /// unconditional.
    pub fn new(
        rows: usize,
        cols: usize,
        partition: BlockPartition,
        kept_rows: Vec<u32>,
        kept_cols: StripBlocks<Vec<u32>>,
        values: StripBlocks<Vec<f64>>,
        row_perm: Option<Vec<u32>>,
    ) -> Result<Self> {
        check_ids(&kept_rows, 0, rows, "row")?;
        let strips = partition.strip_count(rows);
        let blocks = partition.block_count(cols);
        if kept_cols.len() != strips || values.len() != strips {
            return Err(BspcError::Invalid(format!(
                "{} column-list strips and {} value strips for {} partition strips",
                kept_cols.len(),
                values.len(),
                strips
            )));
        }
        let mut m = BspcMatrix {
            rows,
            cols,
            partition,
            kept_rows,
            kept_cols,
            values,
            row_perm,
            digest: 0,
        };
        for (s, range) in m.partition.strips(m.rows).enumerate() {
            let rows_here = m.strip_row_span(s).len();
            if m.kept_cols[s].len() != blocks || m.values[s].len() != blocks {
                return Err(BspcError::Invalid(format!(
                    "strip {s} has {} column lists and {} grids for {} blocks",
                    m.kept_cols[s].len(),
                    m.values[s].len(),
                    blocks
                )));
            }
            for (b, brange) in m.partition.blocks(m.cols).enumerate() {
                let ids = &m.kept_cols[s][b];
                check_ids(ids, brange.start, brange.end, "column")?;
                if rows_here == 0 && !ids.is_empty() {
                    return Err(BspcError::Invalid(format!(
                        "strip {s} (rows {}..{}) keeps no rows but lists {} columns in block {b}",
                        range.start,
                        range.end,
                        ids.len()
                    )));
                }
                let want = rows_here * ids.len();
                if m.values[s][b].len() != want {
                    return Err(BspcError::Invalid(format!(
                        "strip {s} block {b}: grid has {} values for a {rows_here}x{} kept grid",
                        m.values[s][b].len(),
                        ids.len()
                    )));
                }
            }
        }
        if let Some(perm) = &m.row_perm {
            let mut sorted = perm.clone();
            sorted.sort_unstable();
            if sorted != m.kept_rows {
                return Err(BspcError::Invalid(
                    "row permutation is not a rearrangement of the kept rows".into(),
                ));
            }
        }
        let mut h = IndexHasher::new();
        h.mix(m.rows as u32);
        h.mix(m.cols as u32);
        h.mix(m.partition.num_r as u32);
        h.mix(m.partition.num_c as u32);
        for &r in &m.kept_rows {
            h.mix(r);
        }
        for strip in &m.kept_cols {
            for block in strip {
                h.mix(block.len() as u32);
                for &c in block {
                    h.mix(c);
                }
            }
        }
        m.digest = h.0;
        Ok(m)
    }

    /// Stored fingerprint of the index structure; O(1) to read. See the
    /// `digest` field for what it covers.
    pub fn index_digest(&self) -> u64 {
        self.digest
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

    pub fn kept_cols(&self) -> &StripBlocks<Vec<u32>> {
        &self.kept_cols
    }

    pub fn values(&self) -> &StripBlocks<Vec<f64>> {
        &self.values
    }

    pub fn row_perm(&self) -> Option<&[u32]> {
        self.row_perm.as_deref()
    }

    /// Replaces the execution-order permutation after validating it.
    pub fn set_row_perm(&mut self, perm: Vec<u32>) -> Result<()> {
        let mut sorted = perm.clone();
        sorted.sort_unstable();
        if sorted != self.kept_rows {
            return Err(BspcError::Invalid(
                "row permutation is not a rearrangement of the kept rows".into(),
            ));
        }
        self.row_perm = Some(perm);
        Ok(())
    }

    /// The index range within `kept_rows` that falls inside strip `s`.
    pub fn strip_row_span(&self, s: usize) -> Range<usize> {
        let range = self.partition.strip_range(self.rows, s);
        let lo = self
            .kept_rows
            .partition_point(|&r| (r as usize) < range.start);
        let hi = self.kept_rows.partition_point(|&r| (r as usize) < range.end);
        lo..hi
    }

    /// Surviving row ids of strip `s`, ascending.
    pub fn strip_kept_rows(&self, s: usize) -> &[u32] {
        &self.kept_rows[self.strip_row_span(s)]
    }

    /// All column ids a row of strip `s` touches: its blocks' kept columns
    /// concatenated in block order (ascending overall).
    pub fn strip_pattern(&self, s: usize) -> Vec<u32> {
        self.kept_cols[s].iter().flatten().copied().collect()
    }

    /// Stored entry count (kept-grid cells, zero or not).
    pub fn nnz(&self) -> usize {
        self.values
            .iter()
            .flatten()
            .map(|grid| grid.len())
            .sum()
    }

    /// Full-size dense reconstruction: stored values on the kept grids,
    /// zeros everywhere else. Ignores the row permutation, which only
    /// affects processing order.
    pub fn decode(&self) -> DenseMatrix {
        let mut m = DenseMatrix::zeros(self.rows, self.cols);
        for s in 0..self.partition.strip_count(self.rows) {
            let strip_rows = self.strip_kept_rows(s);
            for (b, ids) in self.kept_cols[s].iter().enumerate() {
                let grid = &self.values[s][b];
                for (i, &r) in strip_rows.iter().enumerate() {
                    for (j, &c) in ids.iter().enumerate() {
                        m.set(r as usize, c as usize, grid[i * ids.len() + j]);
                    }
                }
            }
        }
        m
    }

    /// Compact reconstruction: one row per kept row, in ascending id order.
    pub fn decode_kept(&self) -> DenseMatrix {
        self.decode_in_order(&self.kept_rows)
    }

    /// Compact reconstruction in execution order: one row per kept row,
    /// following `row_perm` (ascending id order when no permutation is set).
    pub fn decode_permuted(&self) -> DenseMatrix {
        match &self.row_perm {
            Some(perm) => self.decode_in_order(perm),
            None => self.decode_kept(),
        }
    }

    fn decode_in_order(&self, order: &[u32]) -> DenseMatrix {
        let full = self.decode();
        DenseMatrix::from_fn(order.len(), self.cols, |i, c| {
            full.get(order[i] as usize, c)
        })
    }
}
