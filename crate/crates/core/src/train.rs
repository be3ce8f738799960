//! Deterministic minibatch SGD, optionally constrained by a weight mask.

use rand::seq::SliceRandom;

use crate::error::CoreError;
use crate::grad::{gru_backward, GruGrads};
use crate::gru::{gru_forward_sequence, GruParams, MatrixId};
use crate::mask::WeightMask;
use crate::math::argmax;
use crate::rng::{derive_seed, seeded_rng};
use crate::task::Dataset;

#[derive(Debug, Clone)]
pub struct TrainOptions {
    pub lr: f64,
    pub epochs: usize,
    pub batch_size: usize,
    pub seed: u64,
}

impl Default for TrainOptions {
    fn default() -> Self {
        // Per-sample updates: averaging a minibatch divides the effective
        // step, and the reference schedule (lr 0.01, 30 epochs) is tuned
        // for batch size 1.
        TrainOptions {
            lr: 0.01,
            epochs: 30,
            batch_size: 1,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct TrainOutcome {
    pub params: GruParams,
    pub loss_curve: Vec<f64>,
}

fn apply_update(params: &mut GruParams, grads: &GruGrads, lr: f64) {
    for id in MatrixId::ALL {
        params.matrix_mut(id).add_scaled(-lr, grads.matrix(id));
    }
    for (p, g) in params.bz.iter_mut().zip(&grads.bz) {
        *p -= lr * g;
    }
    for (p, g) in params.br.iter_mut().zip(&grads.br) {
        *p -= lr * g;
    }
    for (p, g) in params.bh.iter_mut().zip(&grads.bh) {
        *p -= lr * g;
    }
    params.readout_w.add_scaled(-lr, &grads.readout_w);
    for (p, g) in params.readout_b.iter_mut().zip(&grads.readout_b) {
        *p -= lr * g;
    }
}

/// Runs one SGD epoch over a fixed visit order. `extra_grad` lets callers
/// add a per-matrix penalty term to each minibatch gradient before the
/// update is applied (the pruning loop uses this). Returns the mean loss.
pub fn sgd_epoch(
    params: &mut GruParams,
    data: &Dataset,
    order: &[usize],
    lr: f64,
    batch_size: usize,
    mask: Option<&WeightMask>,
    mut extra_grad: Option<&mut dyn FnMut(&GruParams, &mut GruGrads)>,
) -> Result<f64, CoreError> {
    let h0 = vec![0.0; params.hidden_dim];
    let mut total_loss = 0.0;
    for chunk in order.chunks(batch_size.max(1)) {
        let mut batch_grads = GruGrads::zeros(params);
        for &idx in chunk {
            let sample = &data.samples[idx];
            let pass = gru_backward(params, &sample.xs, &h0, sample.label)?;
            total_loss += pass.loss;
            batch_grads.accumulate(1.0 / chunk.len() as f64, &pass.grads);
        }
        if let Some(f) = extra_grad.as_deref_mut() {
            f(params, &mut batch_grads);
        }
        apply_update(params, &batch_grads, lr);
        if let Some(m) = mask {
            m.apply(params);
        }
    }
    Ok(total_loss / order.len() as f64)
}

/// Minibatch SGD with a seeded shuffle per epoch. When a mask is given,
/// masked entries are zeroed after every update, so they never revive.
/// Single-threaded; identical seeds give bit-identical parameters.
pub fn train(
    params: &GruParams,
    data: &Dataset,
    opt: &TrainOptions,
    mask: Option<&WeightMask>,
) -> Result<TrainOutcome, CoreError> {
    if let Some(m) = mask {
        if !m.conforms(params) {
            return Err(CoreError::DimMismatch {
                expected: 0,
                got: 0,
                context: "mask shape does not match parameters",
            });
        }
    }
    let mut params = params.clone();
    if let Some(m) = mask {
        m.apply(&mut params);
    }
    let mut loss_curve = Vec::with_capacity(opt.epochs);
    let mut rng = seeded_rng(derive_seed(opt.seed, "train-shuffle"));
    let mut order: Vec<usize> = (0..data.len()).collect();
    for epoch in 0..opt.epochs {
        order.shuffle(&mut rng);
        let mean_loss = sgd_epoch(
            &mut params,
            data,
            &order,
            opt.lr,
            opt.batch_size,
            mask,
            None,
        )?;
        if !mean_loss.is_finite() {
            return Err(CoreError::NumericDivergence { epoch });
        }
        loss_curve.push(mean_loss);
    }
    Ok(TrainOutcome { params, loss_curve })
}

/// Fraction of samples whose argmax logit equals the label.
pub fn accuracy(params: &GruParams, data: &Dataset) -> Result<f64, CoreError> {
    if data.is_empty() {
        return Ok(0.0);
    }
    let h0 = vec![0.0; params.hidden_dim];
    let mut correct = 0usize;
    for sample in &data.samples {
        let (_, logits) = gru_forward_sequence(params, &sample.xs, &h0)?;
        if argmax(&logits) == sample.label {
            correct += 1;
        }
    }
    Ok(correct as f64 / data.len() as f64)
}

/// Mean cross-entropy loss over a dataset, without updating parameters.
pub fn mean_loss(params: &GruParams, data: &Dataset) -> Result<f64, CoreError> {
    let h0 = vec![0.0; params.hidden_dim];
    let mut total = 0.0;
    for sample in &data.samples {
        let pass = gru_backward(params, &sample.xs, &h0, sample.label)?;
        total += pass.loss;
    }
    Ok(total / data.len().max(1) as f64)
}
