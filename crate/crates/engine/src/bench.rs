//! Wall-clock micro-benchmarking with percentile reporting.

use std::time::Instant;

use crate::error::{EngineError, Result};

/// A sample must cover at least this long or the timer's granularity
/// dominates; shorter workloads are looped and the per-call time derived.
const MIN_SAMPLE_NS: u128 = 20_000;

pub const MIN_REPS: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BenchStats {
    pub median_ns: f64,
    pub p10_ns: f64,
    pub p90_ns: f64,
    /// Samples taken (as requested).
    pub reps: usize,
    /// Calls per sample after automatic widening; 1 when the workload is
    /// long enough on its own.
    pub inner_iters: usize,
}

impl BenchStats {
    /// Giga-operations per second: ops per nanosecond.
    pub fn gops(&self, ops: u64) -> f64 {
        ops as f64 / self.median_ns
    }
}

/// Nearest-rank percentile over an ascending slice.
pub fn percentile(sorted_ns: &[f64], q: f64) -> f64 {
    let idx = (q * (sorted_ns.len() - 1) as f64).round() as usize;
    sorted_ns[idx]
}

/// Times `f` over `reps` samples after `warmup` untimed calls.
///
/// If a single call finishes below the timer-granularity floor, the call
/// count per sample doubles until a sample is long enough; the reported
/// per-call times divide by that count, and the count is returned in
/// `inner_iters`.
pub fn benchmark(mut f: impl FnMut(), reps: usize, warmup: usize) -> Result<BenchStats> {
    if reps < MIN_REPS {
        return Err(EngineError::TooFewReps {
            min: MIN_REPS,
            got: reps,
        });
    }
    for _ in 0..warmup {
        f();
    }
    let mut inner = 1usize;
    loop {
        let start = Instant::now();
        for _ in 0..inner {
            f();
        }
        if start.elapsed().as_nanos() >= MIN_SAMPLE_NS || inner >= 1 << 20 {
            break;
        }
        inner *= 2;
    }
    let mut samples = Vec::with_capacity(reps);
    for _ in 0..reps {
        let start = Instant::now();
        for _ in 0..inner {
            f();
        }
        samples.push(start.elapsed().as_nanos() as f64 / inner as f64);
    }
    samples.sort_by(|a, b| a.partial_cmp(b).expect("timings are finite"));
    Ok(BenchStats {
        median_ns: percentile(&samples, 0.5),
        p10_ns: percentile(&samples, 0.1),
        p90_ns: percentile(&samples, 0.9),
        reps,
        inner_iters: inner,
    })
}

/// One benchmark table row.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRecord {
    pub kernel: String,
    pub compression_rate: f64,
    pub stats: BenchStats,
    pub gops: f64,
    pub loads_naive: u64,
    pub loads_scheduled: u64,
    pub workers: usize,
}

pub fn bench_csv(records: &[BenchRecord]) -> String {
    let mut out = String::from(
        "kernel,compression_rate,median_ns,p10_ns,p90_ns,gops,loads_naive,loads_scheduled,workers\n",
    );
    for r in records {
        out.push_str(&format!(
            "{},{},{:.1},{:.1},{:.1},{:.6},{},{},{}\n",
            r.kernel,
            bsp_prune::format_rate(r.compression_rate),
            r.stats.median_ns,
            r.stats.p10_ns,
            r.stats.p90_ns,
            r.gops,
            r.loads_naive,
            r.loads_scheduled,
            r.workers,
        ));
    }
    out
}
