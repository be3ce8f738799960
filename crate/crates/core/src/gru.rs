//! Single-layer GRU classifier: parameters, cell step and sequence forward.
//!
//! Gate wiring, fixed for reproducibility:
//!
//! ```text
//! z = sigmoid(Wz x + Uz h_prev + bz)
//! r = sigmoid(Wr x + Ur h_prev + br)
//! h~ = tanh(Wh x + Uh (r .* h_prev) + bh)
//! h  = z .* h_prev + (1 - z) .* h~
//! ```
//!
//! The readout is a linear layer over the final hidden state.

use rand::Rng;

use crate::dense::DenseMatrix;
use crate::error::CoreError;
use crate::math::sigmoid;
use crate::rng::{derive_seed, seeded_rng};

/// Identifies one of the six prunable weight matrices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MatrixId {
    Wz,
    Wr,
    Wh,
    Uz,
    Ur,
    Uh,
}

impl MatrixId {
    pub const ALL: [MatrixId; 6] = [
        MatrixId::Wz,
        MatrixId::Wr,
        MatrixId::Wh,
        MatrixId::Uz,
        MatrixId::Ur,
        MatrixId::Uh,
    ];

    pub fn index(self) -> usize {
        match self {
            MatrixId::Wz => 0,
            MatrixId::Wr => 1,
            MatrixId::Wh => 2,
            MatrixId::Uz => 3,
            MatrixId::Ur => 4,
            MatrixId::Uh => 5,
        }
    }

    pub fn from_index(idx: usize) -> Option<MatrixId> {
        MatrixId::ALL.get(idx).copied()
    }

    pub fn label(self) -> &'static str {
        match self {
            MatrixId::Wz => "wz",
            MatrixId::Wr => "wr",
            MatrixId::Wh => "wh",
            MatrixId::Uz => "uz",
            MatrixId::Ur => "ur",
            MatrixId::Uh => "uh",
        }
    }

    /// Input-to-hidden matrices are H x I, recurrent ones H x H.
    pub fn is_input(self) -> bool {
        matches!(self, MatrixId::Wz | MatrixId::Wr | MatrixId::Wh)
    }
}

/// All weights and biases of the single-layer GRU classifier.
#[derive(Debug, Clone, PartialEq)]
pub struct GruParams {
    pub input_dim: usize,
    pub hidden_dim: usize,
    pub num_classes: usize,
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

impl GruParams {
    pub fn zeros(input_dim: usize, hidden_dim: usize, num_classes: usize) -> Self {
        GruParams {
            input_dim,
            hidden_dim,
            num_classes,
            wz: DenseMatrix::zeros(hidden_dim, input_dim),
            wr: DenseMatrix::zeros(hidden_dim, input_dim),
            wh: DenseMatrix::zeros(hidden_dim, input_dim),
            uz: DenseMatrix::zeros(hidden_dim, hidden_dim),
            ur: DenseMatrix::zeros(hidden_dim, hidden_dim),
            uh: DenseMatrix::zeros(hidden_dim, hidden_dim),
            bz: vec![0.0; hidden_dim],
            br: vec![0.0; hidden_dim],
            bh: vec![0.0; hidden_dim],
            readout_w: DenseMatrix::zeros(num_classes, hidden_dim),
            readout_b: vec![0.0; num_classes],
        }
    }

    /// Seeded uniform(-1/sqrt(fan_in), +1/sqrt(fan_in)) initialization.
    pub fn init_uniform(input_dim: usize, hidden_dim: usize, num_classes: usize, seed: u64) -> Self {
        let mut params = GruParams::zeros(input_dim, hidden_dim, num_classes);
        let mut rng = seeded_rng(derive_seed(seed, "init"));
        let mut fill = |m: &mut DenseMatrix, fan_in: usize| {
            let bound = 1.0 / (fan_in as f64).sqrt();
            for v in m.values_mut() {
                *v = rng.gen_range(-bound..bound);
            }
        };
        fill(&mut params.wz, input_dim);
        fill(&mut params.wr, input_dim);
        fill(&mut params.wh, input_dim);
        fill(&mut params.uz, hidden_dim);
        fill(&mut params.ur, hidden_dim);
        fill(&mut params.uh, hidden_dim);
        fill(&mut params.readout_w, hidden_dim);
        params
    }

    /// 3H(I+H+1) + C(H+1)
    pub fn param_count(&self) -> usize {
        3 * self.hidden_dim * (self.input_dim + self.hidden_dim + 1)
            + self.num_classes * (self.hidden_dim + 1)
    }

    /// Parameters subject to pruning: the six gate matrices.
    pub fn prunable_param_count(&self) -> usize {
        3 * self.hidden_dim * (self.input_dim + self.hidden_dim)
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

    pub fn validate(&self) -> Result<(), CoreError> {
        let (i, h, c) = (self.input_dim, self.hidden_dim, self.num_classes);
        let checks = [
            (self.wz.rows(), h, "wz rows"),
            (self.wz.cols(), i, "wz cols"),
            (self.wr.rows(), h, "wr rows"),
            (self.wr.cols(), i, "wr cols"),
            (self.wh.rows(), h, "wh rows"),
            (self.wh.cols(), i, "wh cols"),
            (self.uz.rows(), h, "uz rows"),
            (self.uz.cols(), h, "uz cols"),
            (self.ur.rows(), h, "ur rows"),
            (self.ur.cols(), h, "ur cols"),
            (self.uh.rows(), h, "uh rows"),
            (self.uh.cols(), h, "uh cols"),
            (self.bz.len(), h, "bz len"),
            (self.br.len(), h, "br len"),
            (self.bh.len(), h, "bh len"),
            (self.readout_w.rows(), c, "readout rows"),
            (self.readout_w.cols(), h, "readout cols"),
            (self.readout_b.len(), c, "readout_b len"),
        ];
        for (got, expected, context) in checks {
            if got != expected {
                return Err(CoreError::DimMismatch {
                    expected,
                    got,
                    context,
                });
            }
        }
        Ok(())
    }
}

/// Per-timestep gate activations and cell output.
#[derive(Debug, Clone)]
pub struct GruState {
    pub z: Vec<f64>,
    pub r: Vec<f64>,
    pub h_tilde: Vec<f64>,
    pub h: Vec<f64>,
}

fn check_finite(xs: &[f64], context: &'static str) -> Result<(), CoreError> {
    if xs.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(CoreError::NonFinite { context })
    }
}

/// One GRU step. `x_t` has length I, `h_prev` length H.
pub fn gru_cell_forward(
    params: &GruParams,
    x_t: &[f64],
    h_prev: &[f64],
) -> Result<GruState, CoreError> {
    if x_t.len() != params.input_dim {
        return Err(CoreError::DimMismatch {
            expected: params.input_dim,
            got: x_t.len(),
            context: "gru_cell_forward x_t",
        });
    }
    if h_prev.len() != params.hidden_dim {
        return Err(CoreError::DimMismatch {
            expected: params.hidden_dim,
            got: h_prev.len(),
            context: "gru_cell_forward h_prev",
        });
    }
    check_finite(x_t, "gru_cell_forward x_t")?;
    check_finite(h_prev, "gru_cell_forward h_prev")?;

    let wzx = params.wz.matvec(x_t)?;
    let uzh = params.uz.matvec(h_prev)?;
    let wrx = params.wr.matvec(x_t)?;
    let urh = params.ur.matvec(h_prev)?;

    let h_dim = params.hidden_dim;
    let mut z = vec![0.0; h_dim];
    let mut r = vec![0.0; h_dim];
    for i in 0..h_dim {
        z[i] = sigmoid(wzx[i] + uzh[i] + params.bz[i]);
        r[i] = sigmoid(wrx[i] + urh[i] + params.br[i]);
    }

    let rh: Vec<f64> = r.iter().zip(h_prev).map(|(rv, hv)| rv * hv).collect();
    let whx = params.wh.matvec(x_t)?;
    let uhrh = params.uh.matvec(&rh)?;

    let mut h_tilde = vec![0.0; h_dim];
    let mut h = vec![0.0; h_dim];
    for i in 0..h_dim {
        h_tilde[i] = (whx[i] + uhrh[i] + params.bh[i]).tanh();
        h[i] = z[i] * h_prev[i] + (1.0 - z[i]) * h_tilde[i];
    }

    Ok(GruState { z, r, h_tilde, h })
}

/// Runs the cell over a T x I input, then applies the readout to the final
/// hidden state. Returns all intermediate states (needed for backprop).
pub fn gru_forward_sequence(
    params: &GruParams,
    xs: &DenseMatrix,
    h0: &[f64],
) -> Result<(Vec<GruState>, Vec<f64>), CoreError> {
    if xs.rows() == 0 {
        return Err(CoreError::EmptySequence);
    }
    if xs.cols() != params.input_dim {
        return Err(CoreError::DimMismatch {
            expected: params.input_dim,
            got: xs.cols(),
            context: "gru_forward_sequence input width",
        });
    }
    let mut states = Vec::with_capacity(xs.rows());
    let mut h_prev = h0;
    for t in 0..xs.rows() {
        let state = gru_cell_forward(params, xs.row(t), h_prev)?;
        states.push(state);
        h_prev = &states[states.len() - 1].h;
    }
    let h_last = &states[states.len() - 1].h;
    let mut logits = params.readout_w.matvec(h_last)?;
    for (l, b) in logits.iter_mut().zip(&params.readout_b) {
        *l += b;
    }
    Ok((states, logits))
}
