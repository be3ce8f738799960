//! JSON artifact schemas shared between commands: the pruning summary the
//! report step reads, and the tuned execution profile the bench step can
//! pick up.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

fn save_json<T: Serialize>(value: &T, path: &Path) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    std::fs::write(path, text).map_err(|e| CliError::Parse(format!("{}: {}", path.display(), e)))
}

fn load_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Parse(format!("{}: {}", path.display(), e)))?;
    serde_json::from_str(&text).map_err(|e| CliError::in_file(path, CliError::from(e)))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PruneSummary {
    pub compression_rate: f64,
    /// Test-split accuracy of the dense checkpoint.
    pub accuracy_dense: f64,
    /// Test-split accuracy after pruning and retraining.
    pub accuracy_pruned: f64,
}

impl PruneSummary {
    pub fn save(&self, path: &Path) -> Result<()> {
        save_json(self, path)
    }

    pub fn load(path: &Path) -> Result<Self> {
        load_json(path)
    }
}

/// The winning tuner candidate with its recorded measurements.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChosenConfig {
    pub num_r: usize,
    pub num_c: usize,
    pub tile_size: usize,
    pub unroll_factor: usize,
    pub worker_count: usize,
    pub median_ns: f64,
    pub accuracy_proxy: f64,
    pub score: f64,
}

impl ChosenConfig {
    pub fn save(&self, path: &Path) -> Result<()> {
        save_json(self, path)
    }

    pub fn load(path: &Path) -> Result<Self> {
        load_json(path)
    }
}
