//! Redundant-load elimination: the counted executors agree bitwise while
//! the scheduled mode never loads more than the naive mode, with equality
//! exactly when no group shares its pattern across rows.

use bsp_core::DenseMatrix;
use bsp_engine::{plan_loads, reorder, spmv_counted, LoadMode};
use bsp_prune::{BlockPartition, StructuredMask};
use bspc::{encode, BspcMatrix};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn random_sparse(rng: &mut StdRng) -> BspcMatrix {
    let rows = rng.gen_range(1..=12);
    let cols = rng.gen_range(1..=12);
    let part = BlockPartition::new(rng.gen_range(1..=4), rng.gen_range(1..=4)).unwrap();
    let kept_rows: Vec<u32> = (0..rows as u32).filter(|_| rng.gen_bool(0.75)).collect();
    let kept_cols = part
        .strips(rows)
        .map(|_| {
            part.blocks(cols)
                .map(|block| {
                    block
                        .filter(|_| rng.gen_bool(0.5))
                        .map(|c| c as u32)
                        .collect()
                })
                .collect()
        })
        .collect();
    let mask = StructuredMask::new(rows, cols, part, kept_rows, kept_cols).unwrap();
    let mut m = DenseMatrix::from_fn(rows, cols, |_, _| rng.gen_range(-2.0..2.0));
    mask.apply(&mut m);
    encode(&m, &mask).unwrap()
}

#[test]
fn scheduled_never_loads_more_and_results_are_bitwise_equal() {
    let mut rng = StdRng::seed_from_u64(0x10AD);
    for case in 0..120 {
        let b = random_sparse(&mut rng);
        let (reordered, groups) = reorder(&b).unwrap();
        let sched = plan_loads(groups, &reordered).unwrap();
        let x: Vec<f64> = (0..b.cols()).map(|_| rng.gen_range(-2.0..2.0)).collect();

        let (y_naive, naive) = spmv_counted(&reordered, &sched, &x, LoadMode::Naive).unwrap();
        let (y_sched, scheduled) =
            spmv_counted(&reordered, &sched, &x, LoadMode::Scheduled).unwrap();

        for (i, (a, c)) in y_naive.iter().zip(&y_sched).enumerate() {
            assert_eq!(a.to_bits(), c.to_bits(), "case {case}, row {i}");
        }
        assert_eq!(naive.loads, sched.naive_loads(), "case {case}");
        assert_eq!(scheduled.loads, sched.scheduled_loads(), "case {case}");
        assert!(scheduled.loads <= naive.loads, "case {case}");

        // Equality holds exactly when no group can share anything: every
        // group either holds one row or loads nothing at all.
        let nothing_shared = sched
            .groups
            .iter()
            .all(|g| g.rows.len() == 1 || g.row_nnz == 0);
        assert_eq!(
            scheduled.loads == naive.loads,
            nothing_shared,
            "case {case}: equality must coincide with unshareable groups"
        );
    }
}

#[test]
fn shared_pattern_saves_by_the_group_width() {
    // Four rows in one strip with the same three kept columns: the naive
    // executor touches x twelve times, the scheduled one three times.
    let part = BlockPartition::new(1, 1).unwrap();
    let mask = StructuredMask::new(
        4,
        6,
        part,
        vec![0, 1, 2, 3],
        vec![vec![vec![1, 3, 4]]],
    )
    .unwrap();
    let mut m = DenseMatrix::from_fn(4, 6, |r, c| (r * 6 + c) as f64 + 1.0);
    mask.apply(&mut m);
    let b = encode(&m, &mask).unwrap();
    let (reordered, groups) = reorder(&b).unwrap();
    let sched = plan_loads(groups, &reordered).unwrap();
    let x = vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0];

    let (_, naive) = spmv_counted(&reordered, &sched, &x, LoadMode::Naive).unwrap();
    let (_, scheduled) = spmv_counted(&reordered, &sched, &x, LoadMode::Scheduled).unwrap();
    assert_eq!(naive.loads, 12);
    assert_eq!(scheduled.loads, 3);
}
