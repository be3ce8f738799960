//! `bsp prune`: two-phase block-structured pruning of the trained dense
//! checkpoint, writing the pruned checkpoint, the mask file, the
//! per-matrix report, and the run summary the report command consumes.

use bsp_core::train::accuracy;
use bsp_prune::{bsp_prune, BlockPartition, GruPartitions, PruneConfig, PruneRates};

use crate::error::{CliError, Result};
use crate::runenv::RunEnv;
use crate::summary::PruneSummary;

pub fn run(env: &RunEnv) -> Result<()> {
    env.ensure_out()?;
    let cfg = &env.cfg;
    let dense = bsp_core::checkpoint::load(&env.dense_checkpoint())
        .map_err(|e| CliError::in_file(&env.dense_checkpoint(), CliError::from(e)))?;
    if dense.input_dim != cfg.task.input_dim
        || dense.hidden_dim != cfg.model.hidden_dim
        || dense.num_classes != cfg.task.num_classes
    {
        return Err(CliError::Parse(format!(
            "{}: checkpoint dims ({}, {}, {}) do not match the config",
            env.dense_checkpoint().display(),
            dense.input_dim,
            dense.hidden_dim,
            dense.num_classes
        )));
    }

    let train_data = env.train_split();
    let test_data = env.test_split();
    let partition = BlockPartition::new(cfg.prune.num_r, cfg.prune.num_c)?;
    let rates = PruneRates::new(cfg.prune.col_rate, cfg.prune.row_rate)?;
    let prune_cfg = PruneConfig {
        rho: cfg.prune.rho,
        admm_epochs: cfg.prune.admm_epochs,
        retrain_epochs: cfg.prune.retrain_epochs,
        lr: cfg.train.lr,
        batch_size: cfg.train.batch_size,
        seed: env.seed_for("prune"),
    };
    let outcome = bsp_prune(
        &dense,
        &GruPartitions::uniform(partition),
        rates,
        &prune_cfg,
        &train_data,
    )?;

    bsp_core::checkpoint::save(&outcome.params, &env.pruned_checkpoint())?;
    bsp_prune::maskfile::save(&outcome.masks, &env.mask_file())?;
    env.write_text(&env.prune_report_csv(), &outcome.report.to_csv())?;

    let summary = PruneSummary {
        compression_rate: outcome.report.overall_rate,
        accuracy_dense: accuracy(&dense, &test_data)?,
        accuracy_pruned: accuracy(&outcome.params, &test_data)?,
    };
    summary.save(&env.prune_summary_json())?;

    println!(
        "pruned compression_rate={} accuracy_dense={:.4} accuracy_pruned={:.4}",
        bsp_prune::format_rate(summary.compression_rate),
        summary.accuracy_dense,
        summary.accuracy_pruned
    );
    Ok(())
}
