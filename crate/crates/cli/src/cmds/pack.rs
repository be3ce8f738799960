//! `bsp pack`: encode the pruned checkpoint into one compact sparse file
//! per gate matrix, row-reordered so the stored permutation matches what
//! the executor will use, plus a copy of the checkpoint for the dense
//! remainder (biases, readout) and verification.

use bsp_core::gru::MatrixId;
use bsp_engine::reorder;
use bspc::{encode, index_overhead};

use crate::error::{CliError, Result};
use crate::runenv::RunEnv;

pub fn run(env: &RunEnv) -> Result<()> {
    let params = bsp_core::checkpoint::load(&env.pruned_checkpoint())
        .map_err(|e| CliError::in_file(&env.pruned_checkpoint(), CliError::from(e)))?;
    let masks = bsp_prune::maskfile::load(&env.mask_file())
        .map_err(|e| CliError::in_file(&env.mask_file(), CliError::from(e)))?;
    env.ensure_pack_dir()?;

    let mut nnz = 0usize;
    let mut bspc_entries = 0usize;
    let mut csr_entries = 0usize;
    for id in MatrixId::ALL {
        let packed = encode(params.matrix(id), masks.get(id))?;
        let (reordered, _groups) = reorder(&packed)?;
        let overhead = index_overhead(&reordered);
        nnz += reordered.nnz();
        bspc_entries += overhead.bspc_index_entries;
        csr_entries += overhead.csr_index_entries;
        bspc::save(&reordered, &env.bspc_path(id))
            .map_err(|e| CliError::in_file(&env.bspc_path(id), CliError::from(e)))?;
    }
    bsp_core::checkpoint::save(&params, &env.pack_params())?;

    println!(
        "packed matrices=6 nnz={} bspc_index_entries={} csr_index_entries={}",
        nnz, bspc_entries, csr_entries
    );
    Ok(())
}
