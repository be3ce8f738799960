//! Run configuration: one JSON document drives the whole pipeline, and a
//! run is reproducible from that document plus its seed. Unknown keys are
//! rejected everywhere so a typo fails loudly instead of silently falling
//! back to a default.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema_version: u32,
    /// Top-level seed; every component derives a named substream from it.
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default)]
    pub task: TaskConfig,
    #[serde(default)]
    pub model: ModelConfig,
    #[serde(default)]
    pub train: TrainConfig,
    #[serde(default)]
    pub prune: PruneSection,
    #[serde(default)]
    pub tuner: TunerSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TaskConfig {
    pub seq_len: usize,
    pub input_dim: usize,
    pub num_classes: usize,
    pub noise_std: f64,
    pub train_samples: usize,
    pub test_samples: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ModelConfig {
    pub hidden_dim: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TrainConfig {
    pub lr: f64,
    pub epochs: usize,
    pub batch_size: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PruneSection {
    pub col_rate: f64,
    pub row_rate: f64,
    pub num_r: usize,
    pub num_c: usize,
    pub rho: f64,
    pub admm_epochs: usize,
    pub retrain_epochs: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TunerSection {
    pub num_r: Vec<usize>,
    pub num_c: Vec<usize>,
    pub tile_size: Vec<usize>,
    pub unroll_factor: Vec<usize>,
    pub worker_count: Vec<usize>,
    pub lambda: f64,
    /// Retraining epochs inside each accuracy-proxy evaluation.
    pub budget_epochs: usize,
    pub bench_reps: usize,
}

fn default_seed() -> u64 {
    7
}

impl Default for TaskConfig {
    fn default() -> Self {
        TaskConfig {
            seq_len: 20,
            input_dim: 16,
            num_classes: 4,
            noise_std: 0.25,
            train_samples: 128,
            test_samples: 64,
        }
    }
}

impl Default for ModelConfig {
    fn default() -> Self {
        ModelConfig { hidden_dim: 32 }
    }
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            lr: 0.01,
            epochs: 30,
            batch_size: 1,
        }
    }
}

impl Default for PruneSection {
    fn default() -> Self {
        // The reference 8x recipe: 4x block-column pruning times 2x row
        // pruning, with a penalty weight and retraining budget that recover
        // the dense accuracy on the default task.
        PruneSection {
            col_rate: 4.0,
            row_rate: 2.0,
            num_r: 2,
            num_c: 4,
            rho: 0.05,
            admm_epochs: 8,
            retrain_epochs: 20,
        }
    }
}

impl Default for TunerSection {
    fn default() -> Self {
        TunerSection {
            num_r: vec![1, 2, 4],
            num_c: vec![2, 4],
            tile_size: vec![1, 4],
            unroll_factor: vec![1, 4],
            worker_count: vec![1, 2],
            lambda: bsp_tuner::DEFAULT_LAMBDA,
            budget_epochs: 2,
            bench_reps: 7,
        }
    }
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            schema_version: SCHEMA_VERSION,
            seed: default_seed(),
            task: TaskConfig::default(),
            model: ModelConfig::default(),
            train: TrainConfig::default(),
            prune: PruneSection::default(),
            tuner: TunerSection::default(),
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(CliError::Parse(format!(
                "unsupported schema_version {} (expected {})",
                self.schema_version, SCHEMA_VERSION
            )));
        }
        for (name, v) in [
            ("task.seq_len", self.task.seq_len),
            ("task.input_dim", self.task.input_dim),
            ("task.num_classes", self.task.num_classes),
            ("task.train_samples", self.task.train_samples),
            ("task.test_samples", self.task.test_samples),
            ("model.hidden_dim", self.model.hidden_dim),
            ("train.batch_size", self.train.batch_size),
        ] {
            if v == 0 {
                return Err(CliError::Parse(format!("{name} must be at least 1")));
            }
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: RunConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Parse(format!("{}: {}", path.display(), e)))?;
        Self::from_json(&text).map_err(|e| CliError::in_file(path, e))
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("config always serializes");
        s.push('\n');
        s
    }
}
