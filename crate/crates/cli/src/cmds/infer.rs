//! `bsp infer`: run the packed sparse model over a dataset file and write
//! per-sample predictions. With `--verify` every sample is additionally
//! checked against the dense forward pass over the same pruned weights,
//! and the packed matrices are checked to decode back to the checkpoint
//! exactly.

use bsp_core::gru::{gru_forward_sequence, MatrixId};
use bsp_engine::sparse_gru_forward;

use crate::dataset_file;
use crate::error::{CliError, Result};
use crate::packed::load_packed;
use crate::runenv::RunEnv;

/// Per-element relative tolerance for `--verify`; with one worker the
/// paths agree bitwise, but the bound also holds for any worker count.
const VERIFY_REL_TOL: f64 = 1e-10;

fn argmax(v: &[f64]) -> usize {
    let mut best = 0;
    for (i, x) in v.iter().enumerate() {
        if *x > v[best] {
            best = i;
        }
    }
    best
}

fn rel_err(got: f64, want: f64) -> f64 {
    if want == 0.0 {
        got.abs()
    } else {
        (got - want).abs() / want.abs()
    }
}

pub fn run(env: &RunEnv, verify: bool, workers: usize) -> Result<()> {
    if workers == 0 {
        return Err(CliError::Usage("--workers must be at least 1".into()));
    }
    let (params, mut weights) = load_packed(env)?;
    weights.set_exec(1, 1, workers);
    let data = dataset_file::load(&env.test_data_file())?;

    if verify {
        for id in MatrixId::ALL {
            let decoded = weights.matrices[id.index()].decode();
            if decoded != *params.matrix(id) {
                return Err(CliError::Verification(format!(
                    "packed {} does not decode back to the checkpoint",
                    id.label()
                )));
            }
        }
    }

    let h0 = vec![0.0; weights.hidden_dim];
    let mut csv = String::from("sample,label,prediction\n");
    let mut correct = 0usize;
    for (i, sample) in data.samples.iter().enumerate() {
        let (_, logits) = sparse_gru_forward(&weights, &sample.xs, &h0)?;
        let prediction = argmax(&logits);
        if prediction == sample.label {
            correct += 1;
        }
        csv.push_str(&format!("{},{},{}\n", i, sample.label, prediction));

        if verify {
            let (_, dense_logits) = gru_forward_sequence(&params, &sample.xs, &h0)?;
            for (k, (s, d)) in logits.iter().zip(&dense_logits).enumerate() {
                if rel_err(*s, *d) > VERIFY_REL_TOL {
                    return Err(CliError::Verification(format!(
                        "sample {i} logit {k}: sparse {s} vs dense {d}"
                    )));
                }
            }
        }
    }
    env.ensure_out()?;
    env.write_text(&env.predictions_csv(), &csv)?;

    let total = data.samples.len();
    let acc = if total == 0 {
        0.0
    } else {
        correct as f64 / total as f64
    };
    println!(
        "inferred samples={} accuracy={:.4} workers={} verified={}",
        total, acc, workers, verify
    );
    Ok(())
}
