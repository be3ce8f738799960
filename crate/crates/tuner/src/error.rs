use bsp_core::CoreError;
use bsp_prune::PruneError;
use thiserror::Error;

use crate::space::TuneConfig;

#[derive(Debug, Error)]
pub enum TunerError {
    /// A candidate list in the search space has no entries.
    #[error("search space field `{field}` is empty")]
    EmptySpace { field: &'static str },

    /// A candidate value that can never describe a runnable configuration.
    #[error("search space field `{field}` contains infeasible value {value}")]
    BadCandidate { field: &'static str, value: usize },

    /// The accuracy/time trade-off weight must be a finite nonnegative real.
    #[error("lambda must be finite and >= 0, got {lambda}")]
    BadLambda { lambda: f64 },

    /// The evaluator failed (or returned a non-finite measurement) for one
    /// candidate; the candidate is attached so the caller can reproduce it.
    #[error("evaluator failed on {config}: {message}")]
    EvaluatorFailed { config: TuneConfig, message: String },

    #[error(transparent)]
    Core(#[from] CoreError),

    #[error(transparent)]
    Prune(#[from] PruneError),
}

pub type Result<T> = std::result::Result<T, TunerError>;
