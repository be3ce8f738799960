use bsp_core::CoreError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PruneError {
    /// A keep count fell outside [1, available]; carries what was requested.
    #[error("infeasible constraint: keep {keep} of {available} ({context})")]
    Infeasible {
        keep: usize,
        available: usize,
        context: &'static str,
    },
    #[error("compression rate must be >= 1, got {rate}")]
    BadRate { rate: f64 },
    #[error("degenerate mask: no prunable weight survives")]
    DegenerateMask,
    #[error("mask structure violated: {0}")]
    BadMask(String),
    #[error(transparent)]
    Core(#[from] CoreError),
}
