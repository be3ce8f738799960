//! The offline search grid: candidate block partitions crossed with
//! executor knobs. Spaces at this scale stay small enough (at most a few
//! hundred points) that exhaustive enumeration is the search strategy.

use std::fmt;

use crate::error::{Result, TunerError};

/// One point of the grid. Field order defines the derived lexicographic
/// order, which is also the documented tie-break for equal scores.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TuneConfig {
    pub num_r: usize,
    pub num_c: usize,
    pub tile_size: usize,
    pub unroll_factor: usize,
    pub worker_count: usize,
}

impl fmt::Display for TuneConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "num_r={} num_c={} tile={} unroll={} workers={}",
            self.num_r, self.num_c, self.tile_size, self.unroll_factor, self.worker_count
        )
    }
}

/// Candidate lists for every tunable dimension. Construction sorts and
/// deduplicates each list, so the enumerated grid visits every distinct
/// configuration exactly once, in ascending lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchSpace {
    num_r: Vec<usize>,
    num_c: Vec<usize>,
    tile_size: Vec<usize>,
    unroll_factor: Vec<usize>,
    worker_count: Vec<usize>,
}

impl SearchSpace {
    pub fn new(
        num_r: Vec<usize>,
        num_c: Vec<usize>,
        tile_size: Vec<usize>,
        unroll_factor: Vec<usize>,
        worker_count: Vec<usize>,
    ) -> Result<Self> {
        let mut space = SearchSpace {
            num_r,
            num_c,
            tile_size,
            unroll_factor,
            worker_count,
        };
        for (field, list) in [
            ("num_r", &mut space.num_r),
            ("num_c", &mut space.num_c),
            ("tile_size", &mut space.tile_size),
            ("unroll_factor", &mut space.unroll_factor),
            ("worker_count", &mut space.worker_count),
        ] {
            if list.is_empty() {
                return Err(TunerError::EmptySpace { field });
            }
            if let Some(&value) = list.iter().find(|&&v| v == 0) {
                return Err(TunerError::BadCandidate { field, value });
            }
            list.sort_unstable();
            list.dedup();
        }
        Ok(space)
    }

    pub fn num_r(&self) -> &[usize] {
        &self.num_r
    }

    pub fn num_c(&self) -> &[usize] {
        &self.num_c
    }

    pub fn tile_size(&self) -> &[usize] {
        &self.tile_size
    }

    pub fn unroll_factor(&self) -> &[usize] {
        &self.unroll_factor
    }

    pub fn worker_count(&self) -> &[usize] {
        &self.worker_count
    }

    /// Number of distinct grid points.
    pub fn len(&self) -> usize {
        self.num_r.len()
            * self.num_c.len()
            * self.tile_size.len()
            * self.unroll_factor.len()
            * self.worker_count.len()
    }

    pub fn is_empty(&self) -> bool {
        false // construction rejects empty dimensions
    }

    /// The full grid in ascending lexicographic order.
    pub fn candidates(&self) -> Vec<TuneConfig> {
        let mut out = Vec::with_capacity(self.len());
        for &num_r in &self.num_r {
            for &num_c in &self.num_c {
                for &tile_size in &self.tile_size {
                    for &unroll_factor in &self.unroll_factor {
                        for &worker_count in &self.worker_count {
                            out.push(TuneConfig {
                                num_r,
                                num_c,
                                tile_size,
                                unroll_factor,
                                worker_count,
                            });
                        }
                    }
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space() -> SearchSpace {
        SearchSpace::new(vec![1, 2], vec![4, 2], vec![8], vec![1, 2], vec![1]).unwrap()
    }

    #[test]
    fn empty_dimension_rejected() {
        let err = SearchSpace::new(vec![1], vec![], vec![1], vec![1], vec![1]).unwrap_err();
        assert!(matches!(
            err,
            TunerError::EmptySpace { field: "num_c" }
        ));
    }

    #[test]
    fn zero_candidate_rejected() {
        let err = SearchSpace::new(vec![1], vec![2], vec![1], vec![0], vec![1]).unwrap_err();
        assert!(matches!(
            err,
            TunerError::BadCandidate {
                field: "unroll_factor",
                value: 0
            }
        ));
    }

    #[test]
    fn grid_is_lexicographic_and_complete() {
        let cands = space().candidates();
        assert_eq!(cands.len(), 2 * 2 * 1 * 2 * 1);
        let mut sorted = cands.clone();
        sorted.sort();
        assert_eq!(cands, sorted, "enumeration order must be lexicographic");
        assert_eq!(
            cands[0],
            TuneConfig {
                num_r: 1,
                num_c: 2,
                tile_size: 8,
                unroll_factor: 1,
                worker_count: 1
            }
        );
    }

    #[test]
    fn duplicates_collapse() {
        let s = SearchSpace::new(vec![2, 2, 1], vec![4], vec![1, 1], vec![1], vec![1]).unwrap();
        assert_eq!(s.num_r(), &[1, 2]);
        assert_eq!(s.tile_size(), &[1]);
        assert_eq!(s.len(), 2);
    }

    #[test]
    fn config_order_is_lexicographic_by_field() {
        let a = TuneConfig {
            num_r: 1,
            num_c: 9,
            tile_size: 9,
            unroll_factor: 9,
            worker_count: 9,
        };
        let b = TuneConfig {
            num_r: 2,
            num_c: 1,
            tile_size: 1,
            unroll_factor: 1,
            worker_count: 1,
        };
        assert!(a < b, "num_r dominates");
        let c = TuneConfig { num_c: 2, ..b };
        assert!(b < c, "num_c breaks num_r ties");
    }
}
