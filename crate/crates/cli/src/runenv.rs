//! Resolved invocation context: the effective configuration, the output
//! directory, and the artifact paths every command agrees on. All
//! randomness flows from the single top-level seed through named
//! substreams, so re-running any one command reproduces its outputs.

use std::path::{Path, PathBuf};

use bsp_core::gru::MatrixId;
use bsp_core::rng::derive_seed;
use bsp_core::task::Dataset;
use bsp_core::SyntheticTask;

use crate::config::RunConfig;
use crate::error::{CliError, Result};

pub struct RunEnv {
    pub cfg: RunConfig,
    pub out: PathBuf,
}

impl RunEnv {
    /// Loads the config (or defaults when no path is given) and applies
    /// the command-line seed override.
    pub fn new(config: Option<&Path>, seed: Option<u64>, out: PathBuf) -> Result<Self> {
        let mut cfg = match config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        if let Some(s) = seed {
            cfg.seed = s;
        }
        Ok(RunEnv { cfg, out })
    }

    pub fn ensure_out(&self) -> Result<()> {
        std::fs::create_dir_all(&self.out)
            .map_err(|e| CliError::Parse(format!("{}: {}", self.out.display(), e)))?;
        Ok(())
    }

    pub fn ensure_pack_dir(&self) -> Result<()> {
        std::fs::create_dir_all(self.pack_dir())
            .map_err(|e| CliError::Parse(format!("{}: {}", self.pack_dir().display(), e)))?;
        Ok(())
    }

    // Artifact paths.

    pub fn effective_config_json(&self) -> PathBuf {
        self.out.join("config.json")
    }

    pub fn dense_checkpoint(&self) -> PathBuf {
        self.out.join("dense.grup")
    }

    pub fn train_metrics_csv(&self) -> PathBuf {
        self.out.join("train_metrics.csv")
    }

    pub fn test_data_file(&self) -> PathBuf {
        self.out.join("test.data")
    }

    pub fn pruned_checkpoint(&self) -> PathBuf {
        self.out.join("pruned.grup")
    }

    pub fn mask_file(&self) -> PathBuf {
        self.out.join("masks.bspm")
    }

    pub fn prune_report_csv(&self) -> PathBuf {
        self.out.join("prune_report.csv")
    }

    pub fn prune_summary_json(&self) -> PathBuf {
        self.out.join("prune_summary.json")
    }

    pub fn pack_dir(&self) -> PathBuf {
        self.out.join("pack")
    }

    pub fn bspc_path(&self, id: MatrixId) -> PathBuf {
        self.pack_dir().join(format!("{}.bspc", id.label()))
    }

    pub fn pack_params(&self) -> PathBuf {
        self.pack_dir().join("params.grup")
    }

    pub fn predictions_csv(&self) -> PathBuf {
        self.out.join("predictions.csv")
    }

    pub fn bench_csv_file(&self) -> PathBuf {
        self.out.join("bench.csv")
    }

    pub fn tuning_csv_file(&self) -> PathBuf {
        self.out.join("tuning.csv")
    }

    pub fn tuned_config_json(&self) -> PathBuf {
        self.out.join("tuned_config.json")
    }

    // Seed substreams.

    pub fn seed_for(&self, label: &str) -> u64 {
        derive_seed(self.cfg.seed, label)
    }

    // Data generation; identical across commands by construction.

    pub fn task(&self) -> SyntheticTask {
        let t = &self.cfg.task;
        SyntheticTask::new(
            t.seq_len,
            t.input_dim,
            t.num_classes,
            t.noise_std,
            self.seed_for("task"),
        )
    }

    pub fn train_split(&self) -> Dataset {
        self.task().sample(self.cfg.task.train_samples, "train")
    }

    pub fn test_split(&self) -> Dataset {
        self.task().sample(self.cfg.task.test_samples, "test")
    }

    pub fn write_text(&self, path: &Path, text: &str) -> Result<()> {
        std::fs::write(path, text)
            .map_err(|e| CliError::Parse(format!("{}: {}", path.display(), e)))
    }
}
