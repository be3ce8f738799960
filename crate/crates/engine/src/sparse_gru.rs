//! GRU inference over compact sparse weights.
//!
//! The cell mirrors the dense recurrence step for step:
//!
//! ```text
//! z = sigmoid(Wz x + Uz h_prev + bz)
//! r = sigmoid(Wr x + Ur h_prev + br)
//! h~ = tanh(Wh x + Uh (r .* h_prev) + bh)
//! h  = z .* h_prev + (1 - z) .* h~
//! ```
//!
//! with each weight matvec routed through the scheduled sparse executor.
//! Per-row accumulation order matches dense matvec, so with all-true
//! masks and one worker the two paths agree bitwise.

use bsp_core::gru::{GruParams, GruState, MatrixId};
use bsp_core::math::sigmoid;
use bsp_core::{CoreError, DenseMatrix};
use bsp_prune::GruMasks;
use bspc::{encode, BspcMatrix};

use crate::error::{EngineError, Result};
use crate::exec::spmv;
use crate::reorder::reorder;
use crate::schedule::{plan_loads, ExecutionSchedule};

/// The six gate matrices in compact form with their schedules, plus the
/// dense remainder of the model (biases and readout).
#[derive(Debug, Clone)]
pub struct SparseGruWeights {
    pub input_dim: usize,
    pub hidden_dim: usize,
    pub num_classes: usize,
    /// `MatrixId` order: Wz, Wr, Wh, Uz, Ur, Uh.
    pub matrices: [BspcMatrix; 6],
    pub schedules: [ExecutionSchedule; 6],
    pub bz: Vec<f64>,
    pub br: Vec<f64>,
    pub bh: Vec<f64>,
    pub readout_w: DenseMatrix,
    pub readout_b: Vec<f64>,
}

impl SparseGruWeights {
    /// Packs already-pruned parameters: each gate matrix is encoded
    /// against its mask (nonzeros outside the mask are rejected), then
    /// reordered and given a shared-load schedule.
    pub fn from_pruned(params: &GruParams, masks: &GruMasks) -> Result<Self> {
        params.validate().map_err(EngineError::Core)?;
        let mut encoded: Vec<(BspcMatrix, ExecutionSchedule)> = Vec::with_capacity(6);
        for id in MatrixId::ALL {
            let packed = encode(params.matrix(id), masks.get(id))?;
            let (reordered, groups) = reorder(&packed)?;
            let sched = plan_loads(groups, &reordered)?;
            encoded.push((reordered, sched));
        }
        let mut it = encoded.into_iter();
        let mut next = || it.next().expect("six matrices were just packed");
        let (m0, s0) = next();
        let (m1, s1) = next();
        let (m2, s2) = next();
        let (m3, s3) = next();
        let (m4, s4) = next();
        let (m5, s5) = next();
        Ok(SparseGruWeights {
            input_dim: params.input_dim,
            hidden_dim: params.hidden_dim,
            num_classes: params.num_classes,
            matrices: [m0, m1, m2, m3, m4, m5],
            schedules: [s0, s1, s2, s3, s4, s5],
            bz: params.bz.clone(),
            br: params.br.clone(),
            bh: params.bh.clone(),
            readout_w: params.readout_w.clone(),
            readout_b: params.readout_b.clone(),
        })
    }

    /// Applies one traversal configuration to all six schedules.
    pub fn set_exec(&mut self, tile_size: usize, unroll_factor: usize, worker_count: usize) {
        for sched in &mut self.schedules {
            sched.tile_size = tile_size;
            sched.unroll_factor = unroll_factor;
            sched.worker_count = worker_count;
        }
    }

    /// Surviving weight entries across the six gate matrices.
    pub fn weight_nnz(&self) -> usize {
        self.matrices.iter().map(|m| m.nnz()).sum()
    }

    fn mat(&self, id: MatrixId) -> (&BspcMatrix, &ExecutionSchedule) {
        (&self.matrices[id.index()], &self.schedules[id.index()])
    }
}

fn check_finite(xs: &[f64], context: &'static str) -> Result<()> {
    if xs.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(EngineError::Core(CoreError::NonFinite { context }))
    }
}

/// One sparse GRU step; mirrors the dense cell's operation order.
pub fn sparse_gru_cell_forward(
    w: &SparseGruWeights,
    x_t: &[f64],
    h_prev: &[f64],
) -> Result<GruState> {
    if x_t.len() != w.input_dim {
        return Err(EngineError::DimMismatch {
            expected: w.input_dim,
            got: x_t.len(),
            context: "sparse_gru_cell_forward x_t",
        });
    }
    if h_prev.len() != w.hidden_dim {
        return Err(EngineError::DimMismatch {
            expected: w.hidden_dim,
            got: h_prev.len(),
            context: "sparse_gru_cell_forward h_prev",
        });
    }
    check_finite(x_t, "sparse_gru_cell_forward x_t")?;
    check_finite(h_prev, "sparse_gru_cell_forward h_prev")?;

    let (mwz, swz) = w.mat(MatrixId::Wz);
    let (muz, suz) = w.mat(MatrixId::Uz);
    let (mwr, swr) = w.mat(MatrixId::Wr);
    let (mur, sur) = w.mat(MatrixId::Ur);
    let wzx = spmv(mwz, swz, x_t)?;
    let uzh = spmv(muz, suz, h_prev)?;
    let wrx = spmv(mwr, swr, x_t)?;
    let urh = spmv(mur, sur, h_prev)?;

    let h_dim = w.hidden_dim;
    let mut z = vec![0.0; h_dim];
    let mut r = vec![0.0; h_dim];
    for i in 0..h_dim {
        z[i] = sigmoid(wzx[i] + uzh[i] + w.bz[i]);
        r[i] = sigmoid(wrx[i] + urh[i] + w.br[i]);
    }

    let rh: Vec<f64> = r.iter().zip(h_prev).map(|(rv, hv)| rv * hv).collect();
    let (mwh, swh) = w.mat(MatrixId::Wh);
    let (muh, suh) = w.mat(MatrixId::Uh);
    let whx = spmv(mwh, swh, x_t)?;
    let uhrh = spmv(muh, suh, &rh)?;

    let mut h_tilde = vec![0.0; h_dim];
    let mut h = vec![0.0; h_dim];
    for i in 0..h_dim {
        h_tilde[i] = (whx[i] + uhrh[i] + w.bh[i]).tanh();
        h[i] = z[i] * h_prev[i] + (1.0 - z[i]) * h_tilde[i];
    }

    Ok(GruState { z, r, h_tilde, h })
}

/// Runs the sparse cell over a T x I input and applies the dense readout
/// to the final hidden state.
pub fn sparse_gru_forward(
    w: &SparseGruWeights,
    xs: &DenseMatrix,
    h0: &[f64],
) -> Result<(Vec<GruState>, Vec<f64>)> {
    if xs.rows() == 0 {
        return Err(EngineError::Core(CoreError::EmptySequence));
    }
    if xs.cols() != w.input_dim {
        return Err(EngineError::DimMismatch {
            expected: w.input_dim,
            got: xs.cols(),
            context: "sparse_gru_forward input width",
        });
    }
    let mut states = Vec::with_capacity(xs.rows());
    let mut h_prev = h0;
    for t in 0..xs.rows() {
        let state = sparse_gru_cell_forward(w, xs.row(t), h_prev)?;
        states.push(state);
        h_prev = &states[states.len() - 1].h;
    }
    let h_last = &states[states.len() - 1].h;
    let mut logits = w.readout_w.matvec(h_last).map_err(EngineError::Core)?;
    for (l, b) in logits.iter_mut().zip(&w.readout_b) {
        *l += b;
    }
    Ok((states, logits))
}
