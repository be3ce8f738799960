//! Multi-worker execution: results must be bit-identical to the serial
//! path for any worker count, and the round-robin deal must balance
//! uniform workloads to within a single row of work.

use bsp_core::DenseMatrix;
use bsp_engine::{plan_loads, reorder, spmv};
use bsp_prune::{BlockPartition, StructuredMask};
use bspc::{encode, BspcMatrix};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn random_sparse(rng: &mut StdRng) -> BspcMatrix {
    let rows = rng.gen_range(1..=14);
    let cols = rng.gen_range(1..=14);
    let part = BlockPartition::new(rng.gen_range(1..=4), rng.gen_range(1..=4)).unwrap();
    let kept_rows: Vec<u32> = (0..rows as u32).filter(|_| rng.gen_bool(0.8)).collect();
    let kept_cols = part
        .strips(rows)
        .map(|_| {
            part.blocks(cols)
                .map(|block| {
                    block
                        .filter(|_| rng.gen_bool(0.55))
                        .map(|c| c as u32)
                        .collect()
                })
                .collect()
        })
        .collect();
    let mask = StructuredMask::new(rows, cols, part, kept_rows, kept_cols).unwrap();
    let mut m = DenseMatrix::from_fn(rows, cols, |_, _| rng.gen_range(-3.0..3.0));
    mask.apply(&mut m);
    encode(&m, &mask).unwrap()
}

#[test]
fn any_worker_count_is_bitwise_identical_to_serial() {
    let mut rng = StdRng::seed_from_u64(0x3057);
    for case in 0..80 {
        let b = random_sparse(&mut rng);
        let (reordered, groups) = reorder(&b).unwrap();
        let serial = plan_loads(groups, &reordered).unwrap();
        let x: Vec<f64> = (0..b.cols()).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let y_serial = spmv(&reordered, &serial, &x).unwrap();

        for workers in [2, 3, 8] {
            let mut sched = serial.clone();
            sched.worker_count = workers;
            let y = spmv(&reordered, &sched, &x).unwrap();
            for (i, (a, c)) in y_serial.iter().zip(&y).enumerate() {
                assert_eq!(
                    a.to_bits(),
                    c.to_bits(),
                    "case {case}, workers {workers}, row {i}"
                );
            }
        }
    }
}

#[test]
fn uniform_rows_balance_within_one_row_of_work() {
    // Twelve rows, four strips of three, each strip keeping a distinct
    // two-column pair so no groups merge: every row carries nnz 2.
    let part = BlockPartition::new(4, 1).unwrap();
    let patterns = [[0u32, 1], [2, 3], [4, 5], [0, 5]];
    let kept_cols = patterns.iter().map(|p| vec![p.to_vec()]).collect();
    let mask = StructuredMask::new(12, 6, part, (0..12).collect(), kept_cols).unwrap();
    let mut m = DenseMatrix::from_fn(12, 6, |r, c| (r * 6 + c) as f64 + 1.0);
    mask.apply(&mut m);
    let b = encode(&m, &mask).unwrap();
    let (reordered, groups) = reorder(&b).unwrap();
    let base = plan_loads(groups, &reordered).unwrap();

    let row_nnz = 2u64;
    for workers in [2, 3, 4, 5] {
        let mut sched = base.clone();
        sched.worker_count = workers;
        let shares = sched.worker_assignments();
        assert_eq!(shares.len(), workers);
        assert_eq!(shares.iter().map(Vec::len).sum::<usize>(), 12);

        let work: Vec<u64> = shares
            .iter()
            .map(|share| {
                share
                    .iter()
                    .map(|&(gi, _)| sched.groups[gi as usize].row_nnz as u64)
                    .sum()
            })
            .collect();
        let max = *work.iter().max().unwrap();
        let min = *work.iter().min().unwrap();
        assert!(
            max - min <= row_nnz,
            "workers {workers}: shares {work:?} spread past one row"
        );
    }
}
