//! Operation counting for throughput reporting.
//!
//! Weight work is two ops (multiply + add) per surviving gate-matrix
//! entry per timestep. Elementwise cell work is 13 ops per hidden unit
//! per timestep: two adds each to finish the update- and reset-gate
//! preactivations, three ops on the candidate path (the recurrent gating
//! multiply and two adds), three activations, and three ops for the
//! convex blend of old and candidate state. Transcendentals count as one
//! op each; cross-model comparisons should lean on `weight_ops`, which is
//! exact, rather than the elementwise convention.

use bsp_prune::GruMasks;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OpCounts {
    /// 2 x surviving entries x timesteps.
    pub weight_ops: u64,
    /// 13 x hidden units x timesteps.
    pub elementwise_ops: u64,
    pub total: u64,
}

pub fn count_ops(weight_nnz: usize, hidden_dim: usize, timesteps: usize) -> OpCounts {
    let weight_ops = 2 * weight_nnz as u64 * timesteps as u64;
    let elementwise_ops = 13 * hidden_dim as u64 * timesteps as u64;
    OpCounts {
        weight_ops,
        elementwise_ops,
        total: weight_ops + elementwise_ops,
    }
}

/// Counts from a pruning mask set: surviving entries over all six gates.
pub fn count_ops_masks(masks: &GruMasks, timesteps: usize) -> OpCounts {
    let hidden = masks.masks[0].rows();
    count_ops(masks.nnz(), hidden, timesteps)
}

/// Dense gate-entry count: 3H(I+H).
pub fn dense_weight_nnz(input_dim: usize, hidden_dim: usize) -> usize {
    3 * hidden_dim * (input_dim + hidden_dim)
}

#[cfg(test)]
mod tests {
    use super::*;
    use bsp_core::gru::GruParams;
    use bsp_prune::{BlockPartition, StructuredMask};

    /// Literal loop over every (matrix, row, column, timestep), counting
    /// a multiply and an add per surviving cell.
    fn loop_count_weight_ops(masks: &GruMasks, timesteps: usize) -> u64 {
        let mut ops = 0u64;
        for _ in 0..timesteps {
            for mask in &masks.masks {
                for r in 0..mask.rows() {
                    for c in 0..mask.cols() {
                        if mask.contains(r, c) {
                            ops += 2;
                        }
                    }
                }
            }
        }
        ops
    }

    fn all_true(i: usize, h: usize) -> GruMasks {
        let part = BlockPartition::new(1, 1).unwrap();
        let params = GruParams::zeros(i, h, 2);
        GruMasks::all_true(&params, &[part; 6])
    }

    #[test]
    fn ten_times_pruning_scales_weight_ops_by_exactly_point_one() {
        // 10x10 matrices: dense 600 entries; keeping one column of ten in
        // each matrix leaves 60.
        let part = BlockPartition::new(1, 1).unwrap();
        let keep_tenth = StructuredMask::new(
            10,
            10,
            part,
            (0..10).collect(),
            vec![vec![vec![3]]],
        )
        .unwrap();
        let pruned = GruMasks {
            masks: [(); 6].map(|_| keep_tenth.clone()),
        };
        let dense = all_true(10, 10);
        let t = 7;
        let full = count_ops_masks(&dense, t);
        let tenth = count_ops_masks(&pruned, t);
        assert_eq!(full.weight_ops, 2 * 600 * 7);
        assert_eq!(tenth.weight_ops * 10, full.weight_ops);
        assert_eq!(tenth.elementwise_ops, full.elementwise_ops);
    }

    #[test]
    fn empty_masks_zero_weight_ops_only() {
        let part = BlockPartition::new(1, 1).unwrap();
        let empty = StructuredMask::new(6, 6, part, vec![], vec![vec![vec![]]]).unwrap();
        let masks = GruMasks {
            masks: [(); 6].map(|_| empty.clone()),
        };
        let counts = count_ops_masks(&masks, 5);
        assert_eq!(counts.weight_ops, 0);
        assert_eq!(counts.elementwise_ops, 13 * 6 * 5);
        assert_eq!(counts.total, counts.elementwise_ops);
    }

    #[test]
    fn doubling_hidden_matches_formula_and_loop_oracle() {
        let (i, h, t) = (4, 6, 3);
        let small = all_true(i, h);
        let big = all_true(i, 2 * h);
        let small_ops = count_ops_masks(&small, t);
        let big_ops = count_ops_masks(&big, t);
        assert_eq!(
            small_ops.weight_ops,
            2 * dense_weight_nnz(i, h) as u64 * t as u64
        );
        // 3(2H)(I+2H) / 3H(I+H) with I=4, H=6: 576/180.
        assert_eq!(
            big_ops.weight_ops * 180,
            small_ops.weight_ops * 576
        );
        assert_eq!(small_ops.weight_ops, loop_count_weight_ops(&small, t));
        assert_eq!(big_ops.weight_ops, loop_count_weight_ops(&big, t));
    }

    #[test]
    fn loop_oracle_agrees_on_structured_masks() {
        let part = BlockPartition::new(2, 2).unwrap();
        let w_mask = StructuredMask::new(
            6,
            8,
            part,
            vec![0, 2, 3, 5],
            vec![vec![vec![1, 2], vec![5]], vec![vec![0], vec![4, 7]]],
        )
        .unwrap();
        let u_mask = StructuredMask::new(
            6,
            6,
            part,
            vec![0, 2, 3, 5],
            vec![vec![vec![0], vec![3]], vec![vec![2], vec![]]],
        )
        .unwrap();
        let masks = GruMasks {
            masks: [
                w_mask.clone(),
                w_mask.clone(),
                w_mask,
                u_mask.clone(),
                u_mask.clone(),
                u_mask,
            ],
        };
        let t = 4;
        assert_eq!(
            count_ops_masks(&masks, t).weight_ops,
            loop_count_weight_ops(&masks, t)
        );
    }
}
