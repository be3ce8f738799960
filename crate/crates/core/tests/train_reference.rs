//! Re-runs the reference training configuration and checks it against the
//! recorded golden values: accuracy must clear 0.95, and the final mean
//! loss must reproduce bit-for-bit (training is deterministic by contract).

use std::collections::HashMap;

use bsp_core::task::SyntheticTask;
use bsp_core::train::{accuracy, train, TrainOptions};
use bsp_core::GruParams;

fn load_golden() -> HashMap<String, String> {
    let text = include_str!("golden/reference_train.txt");
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            let (k, v) = l.split_once(' ').expect("golden line is `key value`");
            (k.to_string(), v.trim().to_string())
        })
        .collect()
}

#[test]
fn reference_configuration_reaches_golden_accuracy() {
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
    let data = task.sample(get("train_samples").parse().unwrap(), "train");
    let params = GruParams::init_uniform(
        task.input_dim,
        get("hidden_dim").parse().unwrap(),
        task.num_classes,
        seed,
    );
    let opt = TrainOptions {
        lr: get("lr").parse().unwrap(),
        epochs: get("epochs").parse().unwrap(),
        batch_size: get("batch_size").parse().unwrap(),
        seed,
    };
    let out = train(&params, &data, &opt, None).unwrap();

    let acc = accuracy(&out.params, &data).unwrap();
    let golden_acc: f64 = get("final_accuracy").parse().unwrap();
    assert!(acc >= 0.95, "reference run accuracy {acc} below 0.95");
    assert_eq!(acc, golden_acc, "accuracy drifted from golden value");

    let final_loss = *out.loss_curve.last().unwrap();
    let golden_bits = u64::from_str_radix(get("final_loss_bits").trim_start_matches("0x"), 16)
        .expect("golden loss bits are hex");
    assert_eq!(
        final_loss.to_bits(),
        golden_bits,
        "final loss {final_loss} no longer bit-identical to golden run"
    );
}
