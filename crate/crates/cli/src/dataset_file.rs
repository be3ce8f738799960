//! On-disk form of a synthetic dataset, so inference can consume exactly
//! the split a training run produced. Layout (all little-endian): magic
//! "BSPD", version u32, sample count u32, then per sample the label u32,
//! timestep count u32, input width u32, and the row-major values.

use std::path::Path;

use bsp_core::task::{Dataset, Sample};
use bsp_core::wire::{ByteReader, ByteWriter};
use bsp_core::{CoreError, DenseMatrix};

use crate::error::{CliError, Result};

pub const DATASET_MAGIC: [u8; 4] = *b"BSPD";
pub const DATASET_VERSION: u32 = 1;

pub fn to_bytes(data: &Dataset) -> Vec<u8> {
    let mut w = ByteWriter::new();
    w.put_bytes(&DATASET_MAGIC);
    w.put_u32(DATASET_VERSION);
    w.put_u32(data.samples.len() as u32);
    for s in &data.samples {
        w.put_u32(s.label as u32);
        w.put_u32(s.xs.rows() as u32);
        w.put_u32(s.xs.cols() as u32);
        w.put_f64_slice(s.xs.values());
    }
    w.into_bytes()
}

pub fn from_bytes(bytes: &[u8]) -> std::result::Result<Dataset, CoreError> {
    let mut r = ByteReader::new(bytes);
    r.get_magic(DATASET_MAGIC)?;
    let version = r.get_u32()?;
    if version != DATASET_VERSION {
        return Err(CoreError::BadVersion { found: version });
    }
    let count = r.get_u32()? as usize;
    let mut samples = Vec::with_capacity(count.min(bytes.len()));
    for _ in 0..count {
        let label = r.get_u32()? as usize;
        let rows = r.get_u32()? as usize;
        let cols = r.get_u32()? as usize;
        let values = r.get_f64_slice()?;
        if values.len() != rows * cols {
            return Err(CoreError::Malformed(format!(
                "dataset sample holds {} values for a {rows}x{cols} input",
                values.len()
            )));
        }
        let xs = DenseMatrix::from_vec(rows, cols, values)?;
        samples.push(Sample { xs, label });
    }
    r.finish()?;
    Ok(Dataset { samples })
}

pub fn save(data: &Dataset, path: &Path) -> Result<()> {
    std::fs::write(path, to_bytes(data))
        .map_err(|e| CliError::Parse(format!("{}: {}", path.display(), e)))
}

pub fn load(path: &Path) -> Result<Dataset> {
    let bytes = std::fs::read(path)
        .map_err(|e| CliError::Parse(format!("{}: {}", path.display(), e)))?;
    from_bytes(&bytes).map_err(|e| CliError::in_file(path, CliError::from(e)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use bsp_core::SyntheticTask;

    #[test]
    fn roundtrip_preserves_every_bit() {
        let task = SyntheticTask::new(5, 3, 2, 0.3, 11);
        let data = task.sample(7, "io");
        let back = from_bytes(&to_bytes(&data)).unwrap();
        assert_eq!(back.samples.len(), data.samples.len());
        for (a, b) in data.samples.iter().zip(&back.samples) {
            assert_eq!(a.label, b.label);
            assert_eq!(a.xs.rows(), b.xs.rows());
            for (x, y) in a.xs.values().iter().zip(b.xs.values()) {
                assert_eq!(x.to_bits(), y.to_bits());
            }
        }
    }

    #[test]
    fn truncation_is_detected() {
        let task = SyntheticTask::new(3, 2, 2, 0.1, 4);
        let bytes = to_bytes(&task.sample(2, "t"));
        for cut in 0..bytes.len() {
            assert!(from_bytes(&bytes[..cut]).is_err(), "prefix {cut} accepted");
        }
    }

    #[test]
    fn bad_magic_rejected() {
        let task = SyntheticTask::new(3, 2, 2, 0.1, 4);
        let mut bytes = to_bytes(&task.sample(1, "t"));
        bytes[0] ^= 0xFF;
        assert!(matches!(
            from_bytes(&bytes),
            Err(CoreError::BadMagic { .. })
        ));
    }
}
