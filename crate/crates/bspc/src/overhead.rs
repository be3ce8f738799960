//! Index-size accounting: how many index integers each format stores.

use crate::csr::CsrMatrix;
use crate::matrix::BspcMatrix;

/// Index integers (not values) stored by each format for the same support.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IndexOverhead {
    /// One entry per kept row plus one per kept column id.
    pub bspc_index_entries: usize,
    /// CSR's column array plus row pointers: nnz + rows + 1.
    pub csr_index_entries: usize,
}

/// Counts index entries for the compact form and for a CSR encoding of
/// the same structural support.
///
/// Every surviving row of a strip reuses the strip's column ids, so the
/// compact index holds |kept rows| + sum of kept-column list lengths.
/// Each live strip contributes at most one id per stored entry (its kept
/// rows number at least one), so the total never exceeds rows + nnz and
/// always undercuts CSR's nnz + rows + 1.
pub fn index_overhead(b: &BspcMatrix) -> IndexOverhead {
    let col_ids: usize = b
        .kept_cols()
        .iter()
        .flatten()
        .map(|ids| ids.len())
        .sum();
    let csr = CsrMatrix::from_bspc(b);
    IndexOverhead {
        bspc_index_entries: b.kept_rows().len() + col_ids,
        csr_index_entries: csr.nnz() + b.rows() + 1,
    }
}

/// True when some (strip, block) kept grid has at least two rows and two
/// columns — the regime where sharing column ids across rows is a strict
/// win over per-entry indices.
pub fn has_two_by_two_grid(b: &BspcMatrix) -> bool {
    (0..b.partition().strip_count(b.rows())).any(|s| {
        b.strip_kept_rows(s).len() >= 2 && b.kept_cols()[s].iter().any(|ids| ids.len() >= 2)
    })
}
