//! The sparse matrix-vector executor: group-at-a-time traversal with
//! shared input loads, optional worker threads, and an instrumented
//! variant that counts input-vector loads.
//!
//! Determinism contract: every output row is computed by exactly one
//! worker, and each row accumulates its products in ascending kept-column
//! order starting from 0.0 — the same order dense matvec uses on the
//! decoded matrix. Worker count, tile size and unroll factor change how
//! the work is walked, never what any single row computes, so results are
//! bit-identical across all of them.

use bspc::BspcMatrix;

use crate::error::{EngineError, Result};
use crate::schedule::ExecutionSchedule;

/// Counted input-vector element loads during an instrumented execution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct LoadCounter {
    pub loads: u64,
}

/// How the instrumented executor fetches input elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LoadMode {
    /// One load per (row, kept column) pair.
    Naive,
    /// One load per (group, pattern column): the shared-load plan.
    Scheduled,
}

/// One row's dot product against the group's gathered pattern values.
/// `idx` is the row's position within its strip's kept rows. The adds run
/// in ascending pattern order whatever the unroll factor.
fn row_dot(b: &BspcMatrix, s: usize, idx: usize, scratch: &[f64], unroll: usize) -> f64 {
    let mut acc = 0.0;
    let mut off = 0usize;
    for (ids, grid) in b.kept_cols()[s].iter().zip(&b.values()[s]) {
        let len = ids.len();
        let row = &grid[idx * len..(idx + 1) * len];
        let vals = &scratch[off..off + len];
        let mut j = 0;
        while j + unroll <= len {
            for k in 0..unroll {
                acc += row[j + k] * vals[j + k];
            }
            j += unroll;
        }
        while j < len {
            acc += row[j] * vals[j];
            j += 1;
        }
        off += len;
    }
    acc
}

fn check_dims(b: &BspcMatrix, sched: &ExecutionSchedule, x: &[f64]) -> Result<()> {
    if x.len() != b.cols() {
        return Err(EngineError::DimMismatch {
            expected: b.cols(),
            got: x.len(),
            context: "spmv input length",
        });
    }
    sched.check_matrix(b)
}

/// Walks one group against its gathered scratch: strip runs outer, then
/// row tiles, then blocks, then the rows of the tile — so each grid slice
/// is bound once per tile instead of once per row, and the value walk
/// within a block is sequential. Every output row still accumulates its
/// products in ascending kept-column order (block 0's columns, then block
/// 1's, ...), exactly the order `row_dot` uses, so the result is bitwise
/// identical. Requires `y` zeroed at the group's rows.
fn run_group(
    b: &BspcMatrix,
    locs: &[(u32, u32)],
    rows: &[u32],
    scratch: &[f64],
    tile: usize,
    unroll: usize,
    y: &mut [f64],
) {
    // A group's rows may span strips (equal patterns in different
    // strips); each strip stores its own grids, so walk per strip run.
    let mut start = 0;
    while start < rows.len() {
        let s = locs[start].0;
        let mut end = start + 1;
        while end < rows.len() && locs[end].0 == s {
            end += 1;
        }
        let ids = &b.kept_cols()[s as usize];
        let grids = &b.values()[s as usize];
        let mut tile_start = start;
        while tile_start < end {
            let tile_end = (tile_start + tile).min(end);
            let mut off = 0usize;
            for (bi, bids) in ids.iter().enumerate() {
                let len = bids.len();
                if len == 0 {
                    continue;
                }
                let grid = &grids[bi];
                let xs = &scratch[off..off + len];
                for i in tile_start..tile_end {
                    let idx = locs[i].1 as usize;
                    let row = &grid[idx * len..(idx + 1) * len];
                    let mut acc = y[rows[i] as usize];
                    let mut j = 0;
                    while j + unroll <= len {
                        for k in 0..unroll {
                            acc += row[j + k] * xs[j + k];
                        }
                        j += unroll;
                    }
                    while j < len {
                        acc += row[j] * xs[j];
                        j += 1;
                    }
                    y[rows[i] as usize] = acc;
                }
                off += len;
            }
            tile_start = tile_end;
        }
        start = end;
    }
}

/// Stack room for gathered patterns; longer patterns fall back to a heap
/// buffer allocated once per call.
const SCRATCH_STACK: usize = 256;

/// Single-worker path: walks groups in order, gathers each group's
/// pattern once, accumulates results straight into the zeroed `y`.
fn run_single(b: &BspcMatrix, sched: &ExecutionSchedule, x: &[f64], y: &mut [f64]) {
    let tile = sched.tile_size.max(1);
    let unroll = sched.unroll_factor.max(1);
    let max_pattern = sched.shared_loads.iter().map(Vec::len).max().unwrap_or(0);
    let mut stack_buf = [0.0f64; SCRATCH_STACK];
    let mut heap_buf: Vec<f64>;
    let buf: &mut [f64] = if max_pattern <= SCRATCH_STACK {
        &mut stack_buf
    } else {
        heap_buf = vec![0.0; max_pattern];
        &mut heap_buf
    };
    for (gi, g) in sched.groups.iter().enumerate() {
        let pattern = &sched.shared_loads[gi];
        let scratch = &mut buf[..pattern.len()];
        for (dst, &c) in scratch.iter_mut().zip(pattern) {
            *dst = x[c as usize];
        }
        run_group(b, &sched.locators()[gi], &g.rows, scratch, tile, unroll, y);
    }
}

/// One worker's share: (group, row) pairs in execution order.
fn run_share(
    b: &BspcMatrix,
    sched: &ExecutionSchedule,
    share: &[(u32, u32)],
    x: &[f64],
) -> Vec<(u32, f64)> {
    let tile = sched.tile_size.max(1);
    let unroll = sched.unroll_factor.max(1);
    let mut out = Vec::with_capacity(share.len());
    let mut current = usize::MAX;
    let mut scratch: Vec<f64> = Vec::new();
    for chunk in share.chunks(tile) {
        for &(gi, ri) in chunk {
            let gi = gi as usize;
            if gi != current {
                scratch.clear();
                scratch.extend(sched.shared_loads[gi].iter().map(|&c| x[c as usize]));
                current = gi;
            }
            let (s, idx) = sched.locators()[gi][ri as usize];
            let row = sched.groups[gi].rows[ri as usize];
            out.push((row, row_dot(b, s as usize, idx as usize, &scratch, unroll)));
        }
    }
    out
}

/// y = (decoded matrix) · x written into a caller-owned buffer, which is
/// zeroed first; rows outside the kept set stay 0. Reusing the buffer
/// across calls keeps hot paths allocation-free.
pub fn spmv_into(
    b: &BspcMatrix,
    sched: &ExecutionSchedule,
    x: &[f64],
    y: &mut [f64],
) -> Result<()> {
    check_dims(b, sched, x)?;
    if y.len() != b.rows() {
        return Err(EngineError::DimMismatch {
            expected: b.rows(),
            got: y.len(),
            context: "spmv output length",
        });
    }
    y.fill(0.0);
    let workers = sched.worker_count.max(1);
    if workers == 1 {
        run_single(b, sched, x, y);
    } else {
        let shares = sched.worker_assignments();
        let results: Vec<Vec<(u32, f64)>> = std::thread::scope(|scope| {
            let handles: Vec<_> = shares
                .iter()
                .map(|share| scope.spawn(move || run_share(b, sched, share, x)))
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("spmv worker panicked"))
                .collect()
        });
        for pairs in results {
            for (row, v) in pairs {
                y[row as usize] = v;
            }
        }
    }
    Ok(())
}

/// y = (decoded matrix) · x. Rows outside the kept set stay 0.
pub fn spmv(b: &BspcMatrix, sched: &ExecutionSchedule, x: &[f64]) -> Result<Vec<f64>> {
    let mut y = vec![0.0; b.rows()];
    spmv_into(b, sched, x, &mut y)?;
    Ok(y)
}

/// Instrumented single-threaded execution. Both modes produce bitwise
/// identical vectors; they differ only in how many input loads they
/// perform (and count).
pub fn spmv_counted(
    b: &BspcMatrix,
    sched: &ExecutionSchedule,
    x: &[f64],
    mode: LoadMode,
) -> Result<(Vec<f64>, LoadCounter)> {
    check_dims(b, sched, x)?;
    let mut y = vec![0.0; b.rows()];
    let mut counter = LoadCounter::default();
    let unroll = sched.unroll_factor.max(1);
    match mode {
        LoadMode::Scheduled => {
            let mut scratch: Vec<f64> = Vec::new();
            for (gi, g) in sched.groups.iter().enumerate() {
                scratch.clear();
                scratch.extend(sched.shared_loads[gi].iter().map(|&c| x[c as usize]));
                counter.loads += sched.shared_loads[gi].len() as u64;
                for (ri, &row) in g.rows.iter().enumerate() {
                    let (s, idx) = sched.locators()[gi][ri];
                    y[row as usize] = row_dot(b, s as usize, idx as usize, &scratch, unroll);
                }
            }
        }
        LoadMode::Naive => {
            for (gi, g) in sched.groups.iter().enumerate() {
                for (ri, &row) in g.rows.iter().enumerate() {
                    let (s, idx) = sched.locators()[gi][ri];
                    let s = s as usize;
                    let idx = idx as usize;
                    // Same multiply-add sequence as row_dot, but every
                    // element is fetched from x individually.
                    let mut acc = 0.0;
                    for (ids, grid) in b.kept_cols()[s].iter().zip(&b.values()[s]) {
                        let len = ids.len();
                        let wrow = &grid[idx * len..(idx + 1) * len];
                        for (j, &c) in ids.iter().enumerate() {
                            counter.loads += 1;
                            acc += wrow[j] * x[c as usize];
                        }
                    }
                    y[row as usize] = acc;
                }
            }
        }
    }
    Ok((y, counter))
}
