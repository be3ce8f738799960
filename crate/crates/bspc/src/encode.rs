//! Dense-to-compact encoding against a structured mask.

use bsp_core::DenseMatrix;
use bsp_prune::StructuredMask;

use crate::error::{BspcError, Result, MAX_REPORTED_COORDS};
use crate::matrix::BspcMatrix;

/// Packs `m` into the compact format using `mask` as the structure.
///
/// Every nonzero of `m` must lie inside the mask; zeros inside the mask
/// are stored explicitly (the kept grids are dense), so the roundtrip
/// through [`BspcMatrix::decode`] is exact.
///
/// Strips whose rows were all pruned are stored with empty column lists
/// even if the mask still lists column choices for them: the columns carry
/// no values there, and dropping them keeps the index strictly smaller
/// than CSR's.
pub fn encode(m: &DenseMatrix, mask: &StructuredMask) -> Result<BspcMatrix> {
    if m.rows() != mask.rows() || m.cols() != mask.cols() {
        return Err(BspcError::Invalid(format!(
            "matrix is {}x{} but mask is {}x{}",
            m.rows(),
            m.cols(),
            mask.rows(),
            mask.cols()
        )));
    }
    let mut coords = Vec::new();
    let mut total = 0usize;
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            if m.get(r, c) != 0.0 && !mask.contains(r, c) {
                total += 1;
                if coords.len() < MAX_REPORTED_COORDS {
                    coords.push((r, c));
                }
            }
        }
    }
    if total > 0 {
        return Err(BspcError::SupportViolation { coords, total });
    }

    let partition = mask.partition();
    let kept_rows = mask.kept_rows().to_vec();
    let mut kept_cols = Vec::new();
    let mut values = Vec::new();
    for (s, range) in partition.strips(m.rows()).enumerate() {
        let strip_rows: Vec<u32> = kept_rows
            .iter()
            .copied()
            .filter(|&r| range.contains(&(r as usize)))
            .collect();
        let mut strip_ids = Vec::new();
        let mut strip_grids = Vec::new();
        for b in 0..partition.block_count(m.cols()) {
            let ids: Vec<u32> = if strip_rows.is_empty() {
                Vec::new()
            } else {
                mask.kept_cols()[s][b].clone()
            };
            let mut grid = Vec::with_capacity(strip_rows.len() * ids.len());
            for &r in &strip_rows {
                for &c in &ids {
                    grid.push(m.get(r as usize, c as usize));
                }
            }
            strip_ids.push(ids);
            strip_grids.push(grid);
        }
        kept_cols.push(strip_ids);
        values.push(strip_grids);
    }
    BspcMatrix::new(
        m.rows(),
        m.cols(),
        partition,
        kept_rows,
        kept_cols,
        values,
        None,
    )
}
