//! Loading a packed model directory (six .bspc matrices plus the pruned
//! checkpoint) back into runnable sparse weights.

use bsp_core::gru::{GruParams, MatrixId};
use bsp_engine::{plan_loads, reorder, SparseGruWeights};
use bspc::BspcMatrix;

use crate::error::{CliError, Result};
use crate::runenv::RunEnv;

/// Expected (rows, cols) of one gate matrix.
fn expected_shape(id: MatrixId, params: &GruParams) -> (usize, usize) {
    let cols = if id.is_input() {
        params.input_dim
    } else {
        params.hidden_dim
    };
    (params.hidden_dim, cols)
}

/// Reads the packed directory and rebuilds schedules. The stored reorder
/// permutation is recomputed from the patterns, which reproduces it
/// exactly; execution knobs start at their serial defaults.
pub fn load_packed(env: &RunEnv) -> Result<(GruParams, SparseGruWeights)> {
    let params = bsp_core::checkpoint::load(&env.pack_params())
        .map_err(|e| CliError::in_file(&env.pack_params(), CliError::from(e)))?;

    let mut matrices = Vec::with_capacity(6);
    let mut schedules = Vec::with_capacity(6);
    for id in MatrixId::ALL {
        let path = env.bspc_path(id);
        let m: BspcMatrix =
            bspc::load(&path).map_err(|e| CliError::in_file(&path, CliError::from(e)))?;
        let (rows, cols) = expected_shape(id, &params);
        if m.rows() != rows || m.cols() != cols {
            return Err(CliError::Parse(format!(
                "{}: expected {}x{} for {}, found {}x{}",
                path.display(),
                rows,
                cols,
                id.label(),
                m.rows(),
                m.cols()
            )));
        }
        let (reordered, groups) = reorder(&m)?;
        let sched = plan_loads(groups, &reordered)?;
        matrices.push(reordered);
        schedules.push(sched);
    }

    let matrices: [BspcMatrix; 6] = matrices
        .try_into()
        .expect("six matrices were just loaded");
    let schedules = schedules
        .try_into()
        .expect("six schedules were just planned");
    let weights = SparseGruWeights {
        input_dim: params.input_dim,
        hidden_dim: params.hidden_dim,
        num_classes: params.num_classes,
        matrices,
        schedules,
        bz: params.bz.clone(),
        br: params.br.clone(),
        bh: params.bh.clone(),
        readout_w: params.readout_w.clone(),
        readout_b: params.readout_b.clone(),
    };
    Ok((params, weights))
}
