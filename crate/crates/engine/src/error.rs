use bsp_core::CoreError;
use bspc::BspcError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("dimension mismatch: expected {expected}, got {got} ({context})")]
    DimMismatch {
        expected: usize,
        got: usize,
        context: &'static str,
    },

    /// The schedule was planned for a different matrix structure.
    #[error("schedule does not match matrix: {0}")]
    ScheduleMismatch(String),

    #[error("benchmark needs at least {min} repetitions, got {got}")]
    TooFewReps { min: usize, got: usize },

    #[error(transparent)]
    Core(#[from] CoreError),

    #[error(transparent)]
    Format(#[from] BspcError),
}

pub type Result<T> = std::result::Result<T, EngineError>;
