//! `bsp bench`: time the scheduled sparse kernels against the dense
//! baseline on this machine. Emits one row per gate matrix for each path
//! plus `spmv_all`/`dense_all` aggregate rows (all six matvecs back to
//! back), which the report command uses for the speedup column.

use bsp_core::gru::{GruParams, MatrixId};
use bsp_core::rng::seeded_rng;
use bsp_engine::{bench_csv, benchmark, spmv_into, BenchRecord, SparseGruWeights};
use rand::Rng;
use std::hint::black_box;

use crate::error::{CliError, Result};
use crate::packed::load_packed;
use crate::runenv::RunEnv;

const WARMUP: usize = 3;

fn input_for<'a>(id: MatrixId, x: &'a [f64], h: &'a [f64]) -> &'a [f64] {
    if id.is_input() {
        x
    } else {
        h
    }
}

fn sparse_record(
    weights: &SparseGruWeights,
    id: MatrixId,
    input: &[f64],
    reps: usize,
    workers: usize,
) -> Result<BenchRecord> {
    let m = &weights.matrices[id.index()];
    let sched = &weights.schedules[id.index()];
    let mut y = vec![0.0; m.rows()];
    let stats = benchmark(
        || {
            spmv_into(m, sched, black_box(input), &mut y).expect("planned spmv");
            black_box(&mut y);
        },
        reps,
        WARMUP,
    )?;
    let dense_params = (m.rows() * m.cols()) as f64;
    let ops = 2 * m.nnz() as u64;
    Ok(BenchRecord {
        kernel: format!("spmv_{}", id.label()),
        compression_rate: dense_params / m.nnz() as f64,
        stats,
        gops: stats.gops(ops),
        loads_naive: sched.naive_loads(),
        loads_scheduled: sched.scheduled_loads(),
        workers,
    })
}

fn dense_record(
    params: &GruParams,
    id: MatrixId,
    input: &[f64],
    reps: usize,
) -> Result<BenchRecord> {
    let m = params.matrix(id);
    let mut y = vec![0.0; m.rows()];
    let stats = benchmark(
        || {
            m.matvec_into(black_box(input), &mut y).expect("conforming matvec");
            black_box(&mut y);
        },
        reps,
        WARMUP,
    )?;
    let loads = (m.rows() * m.cols()) as u64;
    Ok(BenchRecord {
        kernel: format!("dense_{}", id.label()),
        compression_rate: 1.0,
        stats,
        gops: stats.gops(2 * loads),
        loads_naive: loads,
        loads_scheduled: loads,
        workers: 1,
    })
}

pub fn run(env: &RunEnv, reps: usize, workers: usize) -> Result<()> {
    if workers == 0 {
        return Err(CliError::Usage("--workers must be at least 1".into()));
    }
    let (_, mut weights) = load_packed(env)?;
    weights.set_exec(1, 1, workers);
    let dense = bsp_core::checkpoint::load(&env.dense_checkpoint())
        .map_err(|e| CliError::in_file(&env.dense_checkpoint(), CliError::from(e)))?;

    let mut rng = seeded_rng(env.seed_for("bench-x"));
    let x: Vec<f64> = (0..weights.input_dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let h: Vec<f64> = (0..weights.hidden_dim).map(|_| rng.gen_range(-1.0..1.0)).collect();

    let mut records = Vec::with_capacity(14);
    for id in MatrixId::ALL {
        let input = input_for(id, &x, &h);
        records.push(sparse_record(&weights, id, input, reps, workers)?);
        records.push(dense_record(&dense, id, input, reps)?);
    }

    // Aggregates: all six matvecs in sequence, the per-step weight work of
    // one GRU cell evaluation.
    let mut y = vec![0.0; weights.hidden_dim];
    let sparse_stats = benchmark(
        || {
            for id in MatrixId::ALL {
                let m = &weights.matrices[id.index()];
                let sched = &weights.schedules[id.index()];
                spmv_into(m, sched, black_box(input_for(id, &x, &h)), &mut y)
                    .expect("planned spmv");
                black_box(&mut y);
            }
        },
        reps,
        WARMUP,
    )?;
    let total_nnz = weights.weight_nnz();
    let total_dense: usize = MatrixId::ALL
        .iter()
        .map(|&id| dense.matrix(id).rows() * dense.matrix(id).cols())
        .sum();
    records.push(BenchRecord {
        kernel: "spmv_all".into(),
        compression_rate: total_dense as f64 / total_nnz as f64,
        stats: sparse_stats,
        gops: sparse_stats.gops(2 * total_nnz as u64),
        loads_naive: weights.schedules.iter().map(|s| s.naive_loads()).sum(),
        loads_scheduled: weights.schedules.iter().map(|s| s.scheduled_loads()).sum(),
        workers,
    });

    let dense_stats = benchmark(
        || {
            for id in MatrixId::ALL {
                dense
                    .matrix(id)
                    .matvec_into(black_box(input_for(id, &x, &h)), &mut y)
                    .expect("conforming matvec");
                black_box(&mut y);
            }
        },
        reps,
        WARMUP,
    )?;
    records.push(BenchRecord {
        kernel: "dense_all".into(),
        compression_rate: 1.0,
        stats: dense_stats,
        gops: dense_stats.gops(2 * total_dense as u64),
        loads_naive: total_dense as u64,
        loads_scheduled: total_dense as u64,
        workers: 1,
    });

    env.ensure_out()?;
    env.write_text(&env.bench_csv_file(), &bench_csv(&records))?;

    println!(
        "benched reps={} speedup={:.3} (dense_all {:.1} ns / spmv_all {:.1} ns)",
        reps,
        dense_stats.median_ns / sparse_stats.median_ns,
        dense_stats.median_ns,
        sparse_stats.median_ns
    );
    Ok(())
}
