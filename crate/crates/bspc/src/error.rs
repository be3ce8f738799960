use bsp_core::CoreError;
use bsp_prune::PruneError;
use thiserror::Error;

/// How many offending coordinates a support-violation message spells out
/// before switching to a summary count.
pub const MAX_REPORTED_COORDS: usize = 8;

fn list_coords(coords: &[(usize, usize)], total: &usize) -> String {
    let shown: Vec<String> = coords.iter().map(|(r, c)| format!("({r},{c})")).collect();
    let mut out = shown.join(", ");
    if *total > coords.len() {
        out.push_str(&format!(", and {} more", total - coords.len()));
    }
    out
}

#[derive(Debug, Error)]
pub enum BspcError {
    /// The matrix being encoded has nonzero entries outside the mask.
    #[error("encode: {total} nonzero value(s) outside the mask support, at {}", list_coords(.coords, .total))]
    SupportViolation {
        /// The first few offending (row, col) coordinates.
        coords: Vec<(usize, usize)>,
        /// The full offender count.
        total: usize,
    },

    /// Structurally inconsistent index lists or value grids.
    #[error("invalid BSPC structure: {0}")]
    Invalid(String),

    #[error(transparent)]
    Core(#[from] CoreError),

    #[error(transparent)]
    Prune(#[from] PruneError),
}

pub type Result<T> = std::result::Result<T, BspcError>;
