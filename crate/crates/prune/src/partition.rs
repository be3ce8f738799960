//! Block partitions: a matrix is cut into `num_r` horizontal strips and each
//! strip into `num_c` column blocks. Strip heights and block widths are the
//! ceiling of the even split, so the last strip/block may be short; every
//! cell belongs to exactly one block.

use std::ops::Range;

use crate::error::PruneError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BlockPartition {
    pub num_r: usize,
    pub num_c: usize,
}

impl BlockPartition {
    pub fn new(num_r: usize, num_c: usize) -> Result<Self, PruneError> {
        if num_r == 0 {
            return Err(PruneError::Infeasible {
                keep: num_r,
                available: 1,
                context: "num_r must be at least 1",
            });
        }
        if num_c == 0 {
            return Err(PruneError::Infeasible {
                keep: num_c,
                available: 1,
                context: "num_c must be at least 1",
            });
        }
        Ok(BlockPartition { num_r, num_c })
    }

    /// Height of every strip but possibly the last: ceil(rows / num_r).
    pub fn strip_height(&self, rows: usize) -> usize {
        rows.div_ceil(self.num_r).max(1)
    }

    /// Number of strips actually produced; at most `num_r`, fewer when rows
    /// run out early (e.g. 3 rows in 5 strips gives 3 strips of height 1).
    pub fn strip_count(&self, rows: usize) -> usize {
        if rows == 0 {
            return 0;
        }
        rows.div_ceil(self.strip_height(rows))
    }

    pub fn strip_range(&self, rows: usize, strip: usize) -> Range<usize> {
        let h = self.strip_height(rows);
        let start = strip * h;
        start..((start + h).min(rows))
    }

    /// Row-index of the strip containing `row`.
    pub fn strip_of_row(&self, rows: usize, row: usize) -> usize {
        row / self.strip_height(rows)
    }

    pub fn strips(&self, rows: usize) -> impl Iterator<Item = Range<usize>> + '_ {
        let count = self.strip_count(rows);
        (0..count).map(move |s| self.strip_range(rows, s))
    }

    pub fn block_width(&self, cols: usize) -> usize {
        cols.div_ceil(self.num_c).max(1)
    }

    pub fn block_count(&self, cols: usize) -> usize {
        if cols == 0 {
            return 0;
        }
        cols.div_ceil(self.block_width(cols))
    }

    pub fn block_range(&self, cols: usize, block: usize) -> Range<usize> {
        let w = self.block_width(cols);
        let start = block * w;
        start..((start + w).min(cols))
    }

    pub fn block_of_col(&self, cols: usize, col: usize) -> usize {
        col / self.block_width(cols)
    }

    pub fn blocks(&self, cols: usize) -> impl Iterator<Item = Range<usize>> + '_ {
        let count = self.block_count(cols);
        (0..count).map(move |b| self.block_range(cols, b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_zero_counts() {
        assert!(BlockPartition::new(0, 1).is_err());
        assert!(BlockPartition::new(1, 0).is_err());
    }

    #[test]
    fn divisible_split_is_even() {
        let p = BlockPartition::new(2, 2).unwrap();
        assert_eq!(p.strip_height(6), 3);
        assert_eq!(p.strip_count(6), 2);
        assert_eq!(p.strip_range(6, 0), 0..3);
        assert_eq!(p.strip_range(6, 1), 3..6);
        assert_eq!(p.block_width(8), 4);
        assert_eq!(p.block_range(8, 1), 4..8);
    }

    #[test]
    fn last_strip_absorbs_remainder() {
        let p = BlockPartition::new(3, 1).unwrap();
        // 7 rows in 3 strips: heights 3, 3, 1.
        assert_eq!(p.strip_height(7), 3);
        let strips: Vec<_> = p.strips(7).collect();
        assert_eq!(strips, vec![0..3, 3..6, 6..7]);
    }

    #[test]
    fn more_strips_than_rows_collapses() {
        let p = BlockPartition::new(5, 1).unwrap();
        assert_eq!(p.strip_height(3), 1);
        assert_eq!(p.strip_count(3), 3);
    }

    #[test]
    fn every_cell_in_exactly_one_block() {
        for (rows, cols, num_r, num_c) in [(7, 9, 3, 4), (5, 5, 5, 5), (4, 6, 8, 2), (1, 1, 1, 1)]
        {
            let p = BlockPartition::new(num_r, num_c).unwrap();
            let mut seen = vec![0u32; rows * cols];
            for strip in p.strips(rows) {
                for block in p.blocks(cols) {
                    for r in strip.clone() {
                        for c in block.clone() {
                            seen[r * cols + c] += 1;
                        }
                    }
                }
            }
            assert!(seen.iter().all(|&n| n == 1), "{rows}x{cols} {num_r}/{num_c}");
        }
    }

    #[test]
    fn strip_of_row_matches_ranges() {
        let p = BlockPartition::new(3, 2).unwrap();
        for row in 0..7 {
            let s = p.strip_of_row(7, row);
            assert!(p.strip_range(7, s).contains(&row));
        }
    }
}
