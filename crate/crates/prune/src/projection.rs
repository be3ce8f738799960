//! Euclidean projections onto the structured sparsity sets.
//!
//! Keeping the top-k columns of a block (or top-k rows of the matrix) by L2
//! norm and zeroing the rest is the exact Frobenius-nearest feasible point:
//! the squared distance decomposes per column (row), so the optimum drops
//! the smallest-norm ones. Ties break toward the lower index so masks are
//! deterministic.

use bsp_core::DenseMatrix;

use crate::error::PruneError;
use crate::partition::BlockPartition;

/// Indices of the `k` largest values; equal values prefer the lower index.
/// Returned ids are sorted ascending.
fn top_k_ids(norms: &[(usize, f64)], k: usize) -> Vec<usize> {
    let mut ranked: Vec<&(usize, f64)> = norms.iter().collect();
    ranked.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then(a.0.cmp(&b.0)));
    let mut ids: Vec<usize> = ranked[..k].iter().map(|(i, _)| *i).collect();
    ids.sort_unstable();
    ids
}

/// Kept-column ids per (strip, block), sorted ascending, as global column
/// indices.
pub type KeptCols = Vec<Vec<Vec<u32>>>;

/// Projects each (strip, block) onto "at most `col_keep[block]` nonzero
/// columns": the top columns by L2 norm within the strip survive verbatim.
/// Also returns the surviving column ids.
pub fn project_block_columns_detailed(
    w: &DenseMatrix,
    partition: BlockPartition,
    col_keep: &[usize],
) -> Result<(DenseMatrix, KeptCols), PruneError> {
    if col_keep.len() != partition.block_count(w.cols()) {
        return Err(PruneError::BadMask(format!(
            "{} column budgets for {} blocks",
            col_keep.len(),
            partition.block_count(w.cols())
        )));
    }
    for (&keep, block) in col_keep.iter().zip(partition.blocks(w.cols())) {
        if keep > block.len() {
            return Err(PruneError::Infeasible {
                keep,
                available: block.len(),
                context: "column keep exceeds block width",
            });
        }
    }
    let mut out = DenseMatrix::zeros(w.rows(), w.cols());
    let mut kept = Vec::with_capacity(partition.strip_count(w.rows()));
    for strip in partition.strips(w.rows()) {
        let mut strip_cols = Vec::with_capacity(col_keep.len());
        for (block_idx, block) in partition.blocks(w.cols()).enumerate() {
            let norms: Vec<(usize, f64)> = block
                .clone()
                .map(|c| {
                    let sq: f64 = strip.clone().map(|r| w.get(r, c) * w.get(r, c)).sum();
                    (c, sq)
                })
                .collect();
            let ids = top_k_ids(&norms, col_keep[block_idx]);
            for &c in &ids {
                for r in strip.clone() {
                    out.set(r, c, w.get(r, c));
                }
            }
            strip_cols.push(ids.into_iter().map(|c| c as u32).collect());
        }
        kept.push(strip_cols);
    }
    Ok((out, kept))
}

/// Uniform-budget wrapper: the same `k` for every block.
pub fn project_block_columns(
    w: &DenseMatrix,
    partition: BlockPartition,
    k: usize,
) -> Result<DenseMatrix, PruneError> {
    let budgets = vec![k; partition.block_count(w.cols())];
    Ok(project_block_columns_detailed(w, partition, &budgets)?.0)
}

/// Projects onto "at most `row_keep` nonzero rows": the top rows of the
/// whole matrix by L2 norm survive verbatim. Also returns surviving row
/// ids, sorted ascending.
pub fn project_rows_detailed(
    w: &DenseMatrix,
    row_keep: usize,
) -> Result<(DenseMatrix, Vec<u32>), PruneError> {
    if row_keep > w.rows() {
        return Err(PruneError::Infeasible {
            keep: row_keep,
            available: w.rows(),
            context: "row keep exceeds row count",
        });
    }
    let norms: Vec<(usize, f64)> = (0..w.rows())
        .map(|r| (r, w.row(r).iter().map(|v| v * v).sum()))
        .collect();
    let ids = top_k_ids(&norms, row_keep);
    let mut out = DenseMatrix::zeros(w.rows(), w.cols());
    for &r in &ids {
        out.row_mut(r).copy_from_slice(w.row(r));
    }
    Ok((out, ids.into_iter().map(|r| r as u32).collect()))
}

pub fn project_rows(w: &DenseMatrix, row_keep: usize) -> Result<DenseMatrix, PruneError> {
    Ok(project_rows_detailed(w, row_keep)?.0)
}
