//! Compression accounting: total prunable parameters over survivors.

use crate::error::PruneError;
use crate::mask::GruMasks;

/// Total prunable parameter count divided by surviving count.
pub fn compression_rate(masks: &GruMasks) -> Result<f64, PruneError> {
    let nnz = masks.nnz();
    if nnz == 0 {
        return Err(PruneError::DegenerateMask);
    }
    Ok(masks.prunable() as f64 / nnz as f64)
}

/// Rounds to three significant figures (the reporting precision for rates).
/// Scaling always multiplies or divides by an exact integer power of ten,
/// so decimal values land on the same f64 a literal would parse to.
pub fn to_3_sig(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    let magnitude = x.abs().log10().floor() as i32;
    if magnitude <= 2 {
        let scale = 10f64.powi(2 - magnitude);
        (x * scale).round() / scale
    } else {
        let div = 10f64.powi(magnitude - 2);
        (x / div).round() * div
    }
}

/// Formats a rate at three significant figures without trailing zeros.
pub fn format_rate(x: f64) -> String {
    let r = to_3_sig(x);
    if r == r.trunc() && r.abs() < 1e15 {
        format!("{}", r)
    } else {
        let magnitude = r.abs().log10().floor() as i32;
        let digits = (2 - magnitude).max(0) as usize;
        format!("{r:.digits$}")
    }
}
