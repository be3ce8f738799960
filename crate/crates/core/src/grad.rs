//! Backpropagation through time for the GRU classifier.
//!
//! The loss is cross-entropy of a softmax over the readout of the final
//! hidden state. Gradients are accumulated walking the sequence backwards.

use crate::dense::DenseMatrix;
use crate::error::CoreError;
use crate::gru::{gru_forward_sequence, GruParams, MatrixId};
use crate::math::{cross_entropy, softmax};

/// Gradients with the same shapes as [`GruParams`].
#[derive(Debug, Clone)]
pub struct GruGrads {
    pub wz: DenseMatrix,
    pub wr: DenseMatrix,
    pub wh: DenseMatrix,
    pub uz: DenseMatrix,
    pub ur: DenseMatrix,
    pub uh: DenseMatrix,
    pub bz: Vec<f64>,
    pub br: Vec<f64>,
    pub bh: Vec<f64>,
    pub readout_w: DenseMatrix,
    pub readout_b: Vec<f64>,
}

impl GruGrads {
    pub fn zeros(params: &GruParams) -> Self {
        let (i, h, c) = (params.input_dim, params.hidden_dim, params.num_classes);
        GruGrads {
            wz: DenseMatrix::zeros(h, i),
            wr: DenseMatrix::zeros(h, i),
            wh: DenseMatrix::zeros(h, i),
            uz: DenseMatrix::zeros(h, h),
            ur: DenseMatrix::zeros(h, h),
            uh: DenseMatrix::zeros(h, h),
            bz: vec![0.0; h],
            br: vec![0.0; h],
            bh: vec![0.0; h],
            readout_w: DenseMatrix::zeros(c, h),
            readout_b: vec![0.0; c],
        }
    }

    pub fn matrix(&self, id: MatrixId) -> &DenseMatrix {
        match id {
            MatrixId::Wz => &self.wz,
            MatrixId::Wr => &self.wr,
            MatrixId::Wh => &self.wh,
            MatrixId::Uz => &self.uz,
            MatrixId::Ur => &self.ur,
            MatrixId::Uh => &self.uh,
        }
    }

    pub fn matrix_mut(&mut self, id: MatrixId) -> &mut DenseMatrix {
        match id {
            MatrixId::Wz => &mut self.wz,
            MatrixId::Wr => &mut self.wr,
            MatrixId::Wh => &mut self.wh,
            MatrixId::Uz => &mut self.uz,
            MatrixId::Ur => &mut self.ur,
            MatrixId::Uh => &mut self.uh,
        }
    }

    /// self += scale * other, over every tensor.
    pub fn accumulate(&mut self, scale: f64, other: &GruGrads) {
        self.wz.add_scaled(scale, &other.wz);
        self.wr.add_scaled(scale, &other.wr);
        self.wh.add_scaled(scale, &other.wh);
        self.uz.add_scaled(scale, &other.uz);
        self.ur.add_scaled(scale, &other.ur);
        self.uh.add_scaled(scale, &other.uh);
        for (a, b) in self.bz.iter_mut().zip(&other.bz) {
            *a += scale * b;
        }
        for (a, b) in self.br.iter_mut().zip(&other.br) {
            *a += scale * b;
        }
        for (a, b) in self.bh.iter_mut().zip(&other.bh) {
            *a += scale * b;
        }
        self.readout_w.add_scaled(scale, &other.readout_w);
        for (a, b) in self.readout_b.iter_mut().zip(&other.readout_b) {
            *a += scale * b;
        }
    }
}

/// Forward pass result plus gradients for one labelled sequence.
#[derive(Debug, Clone)]
pub struct BackwardPass {
    pub loss: f64,
    pub grads: GruGrads,
}

/// Full forward + backward for one sequence with a class label.
pub fn gru_backward(
    params: &GruParams,
    xs: &DenseMatrix,
    h0: &[f64],
    label: usize,
) -> Result<BackwardPass, CoreError> {
    let (states, logits) = gru_forward_sequence(params, xs, h0)?;
    let probs = softmax(&logits);
    let loss = cross_entropy(&probs, label);

    let seq_len = states.len();
    let h_dim = params.hidden_dim;
    let mut grads = GruGrads::zeros(params);

    // Readout layer: dlogits = p - onehot(label).
    let mut dlogits = probs;
    dlogits[label] -= 1.0;
    let h_last = &states[seq_len - 1].h;
    grads.readout_w.add_scaled_outer(1.0, &dlogits, h_last);
    for (g, d) in grads.readout_b.iter_mut().zip(&dlogits) {
        *g += d;
    }
    let mut dh = params.readout_w.matvec_transpose(&dlogits)?;

    for t in (0..seq_len).rev() {
        let state = &states[t];
        let h_prev: &[f64] = if t == 0 { h0 } else { &states[t - 1].h };

        // h = z*h_prev + (1-z)*h_tilde
        let mut da_h = vec![0.0; h_dim];
        let mut dz_pre = vec![0.0; h_dim];
        for i in 0..h_dim {
            let dz = dh[i] * (h_prev[i] - state.h_tilde[i]);
            let dh_tilde = dh[i] * (1.0 - state.z[i]);
            da_h[i] = dh_tilde * (1.0 - state.h_tilde[i] * state.h_tilde[i]);
            dz_pre[i] = dz * state.z[i] * (1.0 - state.z[i]);
        }

        // Candidate path: a_h = Wh x + Uh (r .* h_prev) + bh
        let rh: Vec<f64> = state.r.iter().zip(h_prev).map(|(r, h)| r * h).collect();
        grads.wh.add_scaled_outer(1.0, &da_h, xs.row(t));
        grads.uh.add_scaled_outer(1.0, &da_h, &rh);
        for (g, d) in grads.bh.iter_mut().zip(&da_h) {
            *g += d;
        }
        let d_rh = params.uh.matvec_transpose(&da_h)?;
        let mut dr_pre = vec![0.0; h_dim];
        for i in 0..h_dim {
            let dr = d_rh[i] * h_prev[i];
            dr_pre[i] = dr * state.r[i] * (1.0 - state.r[i]);
        }

        grads.wz.add_scaled_outer(1.0, &dz_pre, xs.row(t));
        grads.uz.add_scaled_outer(1.0, &dz_pre, h_prev);
        for (g, d) in grads.bz.iter_mut().zip(&dz_pre) {
            *g += d;
        }
        grads.wr.add_scaled_outer(1.0, &dr_pre, xs.row(t));
        grads.ur.add_scaled_outer(1.0, &dr_pre, h_prev);
        for (g, d) in grads.br.iter_mut().zip(&dr_pre) {
            *g += d;
        }

        // Gradient flowing into h_{t-1}.
        let from_z = params.uz.matvec_transpose(&dz_pre)?;
        let from_r = params.ur.matvec_transpose(&dr_pre)?;
        let mut dh_prev = vec![0.0; h_dim];
        for i in 0..h_dim {
            dh_prev[i] =
                dh[i] * state.z[i] + d_rh[i] * state.r[i] + from_z[i] + from_r[i];
        }
        dh = dh_prev;
    }

    Ok(BackwardPass { loss, grads })
}
