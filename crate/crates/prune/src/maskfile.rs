//! BSPM mask files: the structured masks of all six prunable matrices.
//!
//! Layout (all integers little-endian):
//!
//! ```text
//! magic  "BSPM"
//! u32    format version (currently 1)
//! u32    record count
//! then per record:
//! u32    matrix id, u32 rows, u32 cols
//! u32    num_r, u32 num_c
//! u32    kept-row count, u32[] kept-row ids
//! per (strip, block), strip-major:
//! u32    kept-column count, u32[] kept-column ids
//! ```

use std::fs;
use std::path::Path;

use bsp_core::gru::MatrixId;
use bsp_core::wire::{ByteReader, ByteWriter};
use bsp_core::CoreError;

use crate::error::PruneError;
use crate::mask::{GruMasks, StructuredMask};
use crate::partition::BlockPartition;

pub const MASKFILE_MAGIC: [u8; 4] = *b"BSPM";
pub const MASKFILE_VERSION: u32 = 1;

pub fn to_bytes(masks: &GruMasks) -> Vec<u8> {
    let mut w = ByteWriter::new();
    w.put_bytes(&MASKFILE_MAGIC);
    w.put_u32(MASKFILE_VERSION);
    w.put_u32(masks.masks.len() as u32);
    for id in MatrixId::ALL {
        let mask = masks.get(id);
        w.put_u32(id.index() as u32);
        w.put_u32(mask.rows() as u32);
        w.put_u32(mask.cols() as u32);
        w.put_u32(mask.partition().num_r as u32);
        w.put_u32(mask.partition().num_c as u32);
        w.put_u32_slice(mask.kept_rows());
        for strip_cols in mask.kept_cols() {
            for ids in strip_cols {
                w.put_u32_slice(ids);
            }
        }
    }
    w.into_bytes()
}

pub fn from_bytes(bytes: &[u8]) -> Result<GruMasks, PruneError> {
    let mut r = ByteReader::new(bytes);
    r.get_magic(MASKFILE_MAGIC).map_err(CoreError::from)?;
    let version = r.get_u32()?;
    if version != MASKFILE_VERSION {
        return Err(CoreError::BadVersion { found: version }.into());
    }
    let count = r.get_u32()? as usize;
    if count != MatrixId::ALL.len() {
        return Err(PruneError::BadMask(format!(
            "expected {} mask records, found {count}",
            MatrixId::ALL.len()
        )));
    }
    let mut slots: [Option<StructuredMask>; 6] = Default::default();
    for _ in 0..count {
        let id_index = r.get_u32()? as usize;
        let id = MatrixId::from_index(id_index).ok_or_else(|| {
            PruneError::BadMask(format!("unknown matrix id {id_index}"))
        })?;
        let rows = r.get_u32()? as usize;
        let cols = r.get_u32()? as usize;
        let num_r = r.get_u32()? as usize;
        let num_c = r.get_u32()? as usize;
        let partition = BlockPartition::new(num_r, num_c)?;
        let kept_rows = r.get_u32_slice()?;
        let mut kept_cols = Vec::with_capacity(partition.strip_count(rows));
        for _ in 0..partition.strip_count(rows) {
            let mut strip_cols = Vec::with_capacity(partition.block_count(cols));
            for _ in 0..partition.block_count(cols) {
                strip_cols.push(r.get_u32_slice()?);
            }
            kept_cols.push(strip_cols);
        }
        let mask = StructuredMask::new(rows, cols, partition, kept_rows, kept_cols)?;
        if slots[id.index()].replace(mask).is_some() {
            return Err(PruneError::BadMask(format!(
                "duplicate record for matrix {}",
                id.label()
            )));
        }
    }
    r.finish().map_err(PruneError::Core)?;
    let masks = slots.map(|s| s.expect("all six present: count checked and ids unique"));
    Ok(GruMasks { masks })
}

pub fn save(masks: &GruMasks, path: &Path) -> Result<(), PruneError> {
    fs::write(path, to_bytes(masks)).map_err(CoreError::from)?;
    Ok(())
}

pub fn load(path: &Path) -> Result<GruMasks, PruneError> {
    let bytes = fs::read(path).map_err(CoreError::from)?;
    from_bytes(&bytes)
}
