//! Execution planning: shared-load lists per row group, traversal
//! parameters, and the deterministic worker assignment.

use bsp_prune::BlockPartition;
use bspc::BspcMatrix;

use crate::error::{EngineError, Result};
use crate::reorder::RowGroup;

/// Fingerprint of a matrix's index structure (shape, partition, kept rows
/// and columns — not values, not the row permutation). A schedule carries
/// the fingerprint of the matrix it was planned for, and the executor
/// refuses matrices that do not match. The matrix stores its digest, so
/// the executor's per-call check is a single comparison.
pub fn structure_key(b: &BspcMatrix) -> u64 {
    b.index_digest()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExecutionSchedule {
    /// Ordered row groups; their concatenated rows are the execution order.
    pub groups: Vec<RowGroup>,
    /// Per group, the columns loaded once and shared by all of its rows.
    /// Always exactly the group's pattern.
    pub shared_loads: Vec<Vec<u32>>,
    /// Rows processed per traversal chunk inside a worker's share.
    pub tile_size: usize,
    /// Inner-loop step over a row's entries. Neither knob changes the
    /// per-row accumulation order, only how the loops are walked.
    pub unroll_factor: usize,
    /// Workers the executor should spawn; rows are dealt round-robin.
    pub worker_count: usize,
    rows: usize,
    cols: usize,
    partition: BlockPartition,
    matrix_key: u64,
    /// Per group, per row: (strip, index of the row within the strip's
    /// kept rows) — precomputed so execution never searches.
    locators: Vec<Vec<(u32, u32)>>,
}

/// Builds the schedule for `groups` over `b`: every pattern column is
/// loaded once per group, so scheduled input loads per group equal the
/// pattern length instead of rows x pattern length.
///
/// Fails when the groups do not cover `b`'s kept rows exactly once or a
/// group's pattern is not the column set its rows actually store.
pub fn plan_loads(groups: Vec<RowGroup>, b: &BspcMatrix) -> Result<ExecutionSchedule> {
    let mut seen: Vec<u32> = groups.iter().flat_map(|g| g.rows.iter().copied()).collect();
    seen.sort_unstable();
    if seen != b.kept_rows() {
        return Err(EngineError::ScheduleMismatch(format!(
            "groups cover {} rows, matrix keeps {}",
            seen.len(),
            b.kept_rows().len()
        )));
    }
    let mut locators = Vec::with_capacity(groups.len());
    for (gi, g) in groups.iter().enumerate() {
        if g.row_nnz != g.pattern.len() {
            return Err(EngineError::ScheduleMismatch(format!(
                "group {gi}: row_nnz {} but pattern length {}",
                g.row_nnz,
                g.pattern.len()
            )));
        }
        let mut locs = Vec::with_capacity(g.rows.len());
        for &row in &g.rows {
            let s = b.partition().strip_of_row(b.rows(), row as usize);
            if b.strip_pattern(s) != g.pattern {
                return Err(EngineError::ScheduleMismatch(format!(
                    "group {gi}: row {row} stores a different column pattern"
                )));
            }
            let span = b.strip_row_span(s);
            let idx = b.kept_rows()[span.clone()]
                .binary_search(&row)
                .expect("row is kept: verified by the cover check above");
            locs.push((s as u32, idx as u32));
        }
        locators.push(locs);
    }
    let shared_loads = groups.iter().map(|g| g.pattern.clone()).collect();
    // Default tile covers the largest group (one chunk per group); tiling
    // below that is a tuning knob, not the baseline traversal.
    let tile_size = groups.iter().map(|g| g.rows.len()).max().unwrap_or(1).max(1);
    Ok(ExecutionSchedule {
        groups,
        shared_loads,
        tile_size,
        unroll_factor: 1,
        worker_count: 1,
        rows: b.rows(),
        cols: b.cols(),
        partition: b.partition(),
        matrix_key: structure_key(b),
        locators,
    })
}

impl ExecutionSchedule {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn partition(&self) -> BlockPartition {
        self.partition
    }

    pub(crate) fn locators(&self) -> &[Vec<(u32, u32)>] {
        &self.locators
    }

    /// Verifies `b` is structurally the matrix this schedule was built for.
    pub fn check_matrix(&self, b: &BspcMatrix) -> Result<()> {
        if structure_key(b) != self.matrix_key {
            return Err(EngineError::ScheduleMismatch(
                "matrix structure differs from the planned one".into(),
            ));
        }
        Ok(())
    }

    /// Kept rows in execution order (groups concatenated).
    pub fn execution_order(&self) -> impl Iterator<Item = u32> + '_ {
        self.groups.iter().flat_map(|g| g.rows.iter().copied())
    }

    /// Total input loads without sharing: one per stored entry.
    pub fn naive_loads(&self) -> u64 {
        self.groups
            .iter()
            .map(|g| (g.rows.len() * g.row_nnz) as u64)
            .sum()
    }

    /// Total input loads with sharing: one per (group, pattern column).
    pub fn scheduled_loads(&self) -> u64 {
        self.shared_loads.iter().map(|p| p.len() as u64).sum()
    }

    /// Deals rows to `worker_count` workers round-robin over the global
    /// execution order — the cursor keeps running across group boundaries,
    /// so uniform-pattern workloads split within one row of each other.
    /// Returns, per worker, (group index, row index within group) pairs.
    pub fn worker_assignments(&self) -> Vec<Vec<(u32, u32)>> {
        let workers = self.worker_count.max(1);
        let mut shares = vec![Vec::new(); workers];
        let mut cursor = 0usize;
        for (gi, g) in self.groups.iter().enumerate() {
            for ri in 0..g.rows.len() {
                shares[cursor % workers].push((gi as u32, ri as u32));
                cursor += 1;
            }
        }
        shares
    }
}
