use thiserror::Error;

#[derive(Debug, Error)]
pub enum CoreError {
    #[error("dimension mismatch: expected {expected}, got {got} ({context})")]
    DimMismatch {
        expected: usize,
        got: usize,
        context: &'static str,
    },

    #[error("non-finite value encountered ({context})")]
    NonFinite { context: &'static str },

    #[error("training diverged: non-finite loss at epoch {epoch}")]
    NumericDivergence { epoch: usize },

    #[error("empty sequence: the GRU requires at least one timestep")]
    EmptySequence,

    #[error("checkpoint: bad magic at offset 0 (expected {expected:?})")]
    BadMagic { expected: [u8; 4] },

    #[error("checkpoint: unsupported format version {found}")]
    BadVersion { found: u32 },

    #[error("checkpoint: truncated input at byte offset {offset}")]
    Truncated { offset: usize },

    #[error("checkpoint: {0}")]
    Malformed(String),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}
