//! `bsp tune`: exhaustive offline search over the configured grid. Each
//! candidate gets an accuracy proxy (short pruning run against the trained
//! checkpoint) and a measured spmv median on a synthetic matrix shaped by
//! the candidate partition at the configured rates.

use bsp_core::rng::{derive_seed, seeded_rng};
use bsp_engine::{benchmark, plan_loads, reorder, spmv};
use bsp_prune::{BlockPartition, PruneRates, SparsityConstraint, StructuredMask};
use bsp_tuner::{accuracy_proxy, tune, tuning_csv, Measurement, ProxyContext, SearchSpace, TuneConfig};
use rand::Rng;
use std::hint::black_box;

use crate::error::{CliError, Result};
use crate::runenv::RunEnv;
use crate::summary::ChosenConfig;

/// Evenly spread `keep` indices over `0..n` (strictly increasing when
/// `keep <= n`).
fn spread(keep: usize, n: usize, offset: usize) -> Vec<u32> {
    (0..keep).map(|i| (offset + i * n / keep) as u32).collect()
}

/// Times the scheduled kernel on an H x H matrix pruned to the candidate
/// partition at the configured rates, with the candidate's execution
/// knobs applied.
fn time_candidate(
    hidden: usize,
    rates: PruneRates,
    c: TuneConfig,
    reps: usize,
    seed: u64,
) -> std::result::Result<f64, String> {
    let fail = |e: &dyn std::fmt::Display| e.to_string();
    let partition = BlockPartition::new(c.num_r, c.num_c).map_err(|e| fail(&e))?;
    let sc = SparsityConstraint::from_rates(hidden, hidden, partition, rates).map_err(|e| fail(&e))?;

    let kept_rows = spread(sc.row_keep, hidden, 0);
    let kept_cols = partition
        .strips(hidden)
        .map(|_| {
            partition
                .blocks(hidden)
                .zip(&sc.col_keep)
                .map(|(block, &keep)| spread(keep, block.len(), block.start))
                .collect()
        })
        .collect();
    let mask =
        StructuredMask::new(hidden, hidden, partition, kept_rows, kept_cols).map_err(|e| fail(&e))?;

    let mut rng = seeded_rng(seed);
    let mut m = bsp_core::DenseMatrix::from_fn(hidden, hidden, |_, _| rng.gen_range(-1.0..1.0));
    mask.apply(&mut m);
    let packed = bspc::encode(&m, &mask).map_err(|e| fail(&e))?;
    let (reordered, groups) = reorder(&packed).map_err(|e| fail(&e))?;
    let mut sched = plan_loads(groups, &reordered).map_err(|e| fail(&e))?;
    sched.tile_size = c.tile_size;
    sched.unroll_factor = c.unroll_factor;
    sched.worker_count = c.worker_count;

    let x: Vec<f64> = (0..hidden).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let stats = benchmark(
        || {
            black_box(spmv(&reordered, &sched, black_box(&x)).expect("planned spmv"));
        },
        reps,
        2,
    )
    .map_err(|e| fail(&e))?;
    Ok(stats.median_ns)
}

pub fn run(env: &RunEnv, reps_override: Option<usize>) -> Result<()> {
    let cfg = &env.cfg;
    let dense = bsp_core::checkpoint::load(&env.dense_checkpoint())
        .map_err(|e| CliError::in_file(&env.dense_checkpoint(), CliError::from(e)))?;

    let ctx = ProxyContext::new(dense, env.train_split(), env.test_split());
    let space = SearchSpace::new(
        cfg.tuner.num_r.clone(),
        cfg.tuner.num_c.clone(),
        cfg.tuner.tile_size.clone(),
        cfg.tuner.unroll_factor.clone(),
        cfg.tuner.worker_count.clone(),
    )?;
    let rates = PruneRates::new(cfg.prune.col_rate, cfg.prune.row_rate)?;
    let reps = reps_override.unwrap_or(cfg.tuner.bench_reps);
    let hidden = cfg.model.hidden_dim;
    let budget = cfg.tuner.budget_epochs;

    let evaluator = |c: TuneConfig, seed: u64| {
        let proxy = accuracy_proxy(&ctx, c.num_r, c.num_c, rates, budget, derive_seed(seed, "proxy"))
            .map_err(|e| e.to_string())?;
        let median_ns = time_candidate(hidden, rates, c, reps, derive_seed(seed, "probe"))?;
        Ok(Measurement {
            median_ns,
            accuracy_proxy: proxy,
        })
    };
    let result = tune(&space, evaluator, cfg.tuner.lambda, env.seed_for("tune"))?;

    env.ensure_out()?;
    env.write_text(&env.tuning_csv_file(), &tuning_csv(&result))?;
    let best = result.chosen_record();
    let chosen = ChosenConfig {
        num_r: best.config.num_r,
        num_c: best.config.num_c,
        tile_size: best.config.tile_size,
        unroll_factor: best.config.unroll_factor,
        worker_count: best.config.worker_count,
        median_ns: best.median_ns,
        accuracy_proxy: best.accuracy_proxy,
        score: best.score,
    };
    chosen.save(&env.tuned_config_json())?;

    println!(
        "tuned candidates={} chosen: {} (score={:.6})",
        result.records.len(),
        best.config,
        best.score
    );
    Ok(())
}
