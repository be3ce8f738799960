//! The recorded reference pruning run: train the 16/32 model, prune to an
//! exact overall 8x (column rate 4, row rate 2, 4x4 partition), and check
//! structural feasibility plus accuracy retention against golden values.

use std::collections::HashMap;

use bsp_core::gru::MatrixId;
use bsp_core::task::SyntheticTask;
use bsp_core::train::{accuracy, train, TrainOptions};
use bsp_core::GruParams;
use bsp_prune::{bsp_prune, BlockPartition, GruPartitions, PruneConfig, PruneRates, StructuredMask};

fn load_golden() -> HashMap<String, String> {
    include_str!("golden/reference_prune.txt")
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            let (k, v) = l.split_once(' ').expect("golden line is `key value`");
            (k.to_string(), v.trim().to_string())
        })
        .collect()
}

#[test]
fn reference_prune_holds_accuracy_at_8x() {
    let golden = load_golden();
    let get = |k: &str| golden[k].clone();
    let seed: u64 = get("seed").parse().unwrap();
    let task = SyntheticTask::new(
        get("seq_len").parse().unwrap(),
        get("input_dim").parse().unwrap(),
        get("num_classes").parse().unwrap(),
        get("noise_std").parse().unwrap(),
        seed,
    );
    let train_data = task.sample(get("train_samples").parse().unwrap(), "train");
    let test_data = task.sample(get("test_samples").parse().unwrap(), "test");
    let params = GruParams::init_uniform(
        task.input_dim,
        get("hidden_dim").parse().unwrap(),
        task.num_classes,
        seed,
    );
    let dense = train(
        &params,
        &train_data,
        &TrainOptions {
            seed,
            ..Default::default()
        },
        None,
    )
    .unwrap()
    .params;
    let dense_test = accuracy(&dense, &test_data).unwrap();
    assert_eq!(dense_test, get("dense_test_accuracy").parse::<f64>().unwrap());

    let cfg = PruneConfig {
        rho: get("rho").parse().unwrap(),
        admm_epochs: get("admm_epochs").parse().unwrap(),
        retrain_epochs: get("retrain_epochs").parse().unwrap(),
        seed,
        ..Default::default()
    };
    let parts = GruPartitions::uniform(
        BlockPartition::new(get("num_r").parse().unwrap(), get("num_c").parse().unwrap()).unwrap(),
    );
    let rates = PruneRates::new(
        get("col_rate").parse().unwrap(),
        get("row_rate").parse().unwrap(),
    )
    .unwrap();
    let outcome = bsp_prune(&dense, &parts, rates, &cfg, &train_data).unwrap();

    // Divisible shape: the 8x is exact, not approximate.
    assert_eq!(
        outcome.report.overall_rate,
        get("overall_rate").parse::<f64>().unwrap()
    );

    // Structural feasibility of every mask, reconstructed from its lists.
    for id in MatrixId::ALL {
        let mask = outcome.masks.get(id);
        let m = dense.matrix(id);
        assert_eq!(mask.kept_rows().len(), m.rows() / 2);
        for strip_cols in mask.kept_cols() {
            for (ids, block) in strip_cols.iter().zip(parts.get(id).blocks(m.cols())) {
                assert_eq!(ids.len(), block.len().div_ceil(4));
            }
        }
        // The pruned weights vanish outside the mask product.
        let rebuilt = StructuredMask::new(
            m.rows(),
            m.cols(),
            parts.get(id),
            mask.kept_rows().to_vec(),
            mask.kept_cols().clone(),
        )
        .unwrap();
        let pruned = outcome.params.matrix(id);
        for r in 0..m.rows() {
            for c in 0..m.cols() {
                if !rebuilt.contains(r, c) {
                    assert_eq!(pruned.get(r, c), 0.0, "{:?} ({r},{c})", id);
                }
            }
        }
    }

    // Accuracy retention on held-out data: within 2 percentage points.
    let pruned_test = accuracy(&outcome.params, &test_data).unwrap();
    assert!(
        dense_test - pruned_test <= 0.02,
        "test accuracy dropped {:.4} (dense {dense_test}, pruned {pruned_test})",
        dense_test - pruned_test
    );
    assert_eq!(
        pruned_test,
        get("pruned_test_accuracy").parse::<f64>().unwrap(),
        "drifted from golden run"
    );
}
