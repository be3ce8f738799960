//! GRUP checkpoint files: dense model parameters on disk.
//!
//! Layout (all integers and floats little-endian):
//!
//! ```text
//! magic  "GRUP"
//! u32    format version (currently 1)
//! u32    input_dim, u32 hidden_dim, u32 num_classes
//! then, for each tensor in field order
//!   Wz Wr Wh Uz Ur Uh bz br bh readout_W readout_b:
//! u32    element count
//! f64[]  row-major values
//! ```

use std::fs;
use std::path::Path;

use crate::dense::DenseMatrix;
use crate::error::CoreError;
use crate::gru::{GruParams, MatrixId};
use crate::wire::{ByteReader, ByteWriter};

pub const CHECKPOINT_MAGIC: [u8; 4] = *b"GRUP";
pub const CHECKPOINT_VERSION: u32 = 1;

pub fn to_bytes(params: &GruParams) -> Vec<u8> {
    let mut w = ByteWriter::new();
    w.put_bytes(&CHECKPOINT_MAGIC);
    w.put_u32(CHECKPOINT_VERSION);
    w.put_u32(params.input_dim as u32);
    w.put_u32(params.hidden_dim as u32);
    w.put_u32(params.num_classes as u32);
    for id in MatrixId::ALL {
        w.put_f64_slice(params.matrix(id).values());
    }
    w.put_f64_slice(&params.bz);
    w.put_f64_slice(&params.br);
    w.put_f64_slice(&params.bh);
    w.put_f64_slice(params.readout_w.values());
    w.put_f64_slice(&params.readout_b);
    w.into_bytes()
}

pub fn from_bytes(bytes: &[u8]) -> Result<GruParams, CoreError> {
    let mut r = ByteReader::new(bytes);
    r.get_magic(CHECKPOINT_MAGIC)?;
    let version = r.get_u32()?;
    if version != CHECKPOINT_VERSION {
        return Err(CoreError::BadVersion { found: version });
    }
    let input_dim = r.get_u32()? as usize;
    let hidden_dim = r.get_u32()? as usize;
    let num_classes = r.get_u32()? as usize;

    let mut params = GruParams::zeros(input_dim, hidden_dim, num_classes);
    for id in MatrixId::ALL {
        let values = r.get_f64_slice()?;
        let target = params.matrix_mut(id);
        let (rows, cols) = (target.rows(), target.cols());
        if values.len() != rows * cols {
            return Err(CoreError::Malformed(format!(
                "tensor {} has {} values, expected {}",
                id.label(),
                values.len(),
                rows * cols
            )));
        }
        *target = DenseMatrix::from_vec(rows, cols, values)?;
    }
    let read_bias = |r: &mut ByteReader, name: &str, len: usize| -> Result<Vec<f64>, CoreError> {
        let v = r.get_f64_slice()?;
        if v.len() != len {
            return Err(CoreError::Malformed(format!(
                "bias {name} has {} values, expected {len}",
                v.len()
            )));
        }
        Ok(v)
    };
    params.bz = read_bias(&mut r, "bz", hidden_dim)?;
    params.br = read_bias(&mut r, "br", hidden_dim)?;
    params.bh = read_bias(&mut r, "bh", hidden_dim)?;
    let readout = r.get_f64_slice()?;
    if readout.len() != num_classes * hidden_dim {
        return Err(CoreError::Malformed(format!(
            "readout has {} values, expected {}",
            readout.len(),
            num_classes * hidden_dim
        )));
    }
    params.readout_w = DenseMatrix::from_vec(num_classes, hidden_dim, readout)?;
    params.readout_b = read_bias(&mut r, "readout_b", num_classes)?;
    r.finish()?;
    params.validate()?;
    Ok(params)
}

pub fn save(params: &GruParams, path: &Path) -> Result<(), CoreError> {
    fs::write(path, to_bytes(params))?;
    Ok(())
}

pub fn load(path: &Path) -> Result<GruParams, CoreError> {
    let bytes = fs::read(path)?;
    from_bytes(&bytes)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_is_bit_exact() {
        let params = GruParams::init_uniform(3, 5, 2, 99);
        let bytes = to_bytes(&params);
        let back = from_bytes(&bytes).unwrap();
        assert_eq!(params, back);
    }

    #[test]
    fn bad_magic_rejected() {
        let params = GruParams::zeros(2, 2, 2);
        let mut bytes = to_bytes(&params);
        bytes[0] = b'X';
        assert!(matches!(
            from_bytes(&bytes),
            Err(CoreError::BadMagic { .. })
        ));
    }

    #[test]
    fn future_version_rejected() {
        let params = GruParams::zeros(2, 2, 2);
        let mut bytes = to_bytes(&params);
        bytes[4..8].copy_from_slice(&2u32.to_le_bytes());
        assert!(matches!(
            from_bytes(&bytes),
            Err(CoreError::BadVersion { found: 2 })
        ));
    }

    #[test]
    fn every_prefix_truncation_errors_cleanly() {
        let params = GruParams::init_uniform(2, 3, 2, 7);
        let bytes = to_bytes(&params);
        for cut in 0..bytes.len() {
            assert!(
                from_bytes(&bytes[..cut]).is_err(),
                "prefix of {cut} bytes should not parse"
            );
        }
    }

    #[test]
    fn trailing_garbage_rejected() {
        let params = GruParams::zeros(2, 2, 2);
        let mut bytes = to_bytes(&params);
        bytes.push(0);
        assert!(from_bytes(&bytes).is_err());
    }
}
