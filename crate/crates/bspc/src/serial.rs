//! On-disk BSPC layout.
//!
//! Little-endian throughout: magic `BSPC`, version, rows, cols, num_r,
//! num_c, the kept-row id list (count + ids), a permutation-present flag
//! byte followed by the permutation ids when set (one per kept row), then
//! per (strip, block) in row-major block order the kept-column id list
//! (count + ids) and the raw value grid. Grid lengths are implied by the
//! kept counts, so every field is validated against the remaining byte
//! count as it is read.

use std::path::Path;

use bsp_core::wire::{ByteReader, ByteWriter};
use bsp_core::CoreError;
use bsp_prune::BlockPartition;

use crate::error::{BspcError, Result};
use crate::matrix::BspcMatrix;

pub const BSPC_MAGIC: [u8; 4] = *b"BSPC";
pub const BSPC_VERSION: u32 = 1;

pub fn serialize(b: &BspcMatrix) -> Vec<u8> {
    let mut w = ByteWriter::new();
    w.put_bytes(&BSPC_MAGIC);
    w.put_u32(BSPC_VERSION);
    w.put_u32(b.rows() as u32);
    w.put_u32(b.cols() as u32);
    w.put_u32(b.partition().num_r as u32);
    w.put_u32(b.partition().num_c as u32);
    w.put_u32_slice(b.kept_rows());
    match b.row_perm() {
        Some(perm) => {
            w.put_u8(1);
            for &p in perm {
                w.put_u32(p);
            }
        }
        None => w.put_u8(0),
    }
    let strips = b.partition().strip_count(b.rows());
    let blocks = b.partition().block_count(b.cols());
    for s in 0..strips {
        for blk in 0..blocks {
            w.put_u32_slice(&b.kept_cols()[s][blk]);
            for &v in &b.values()[s][blk] {
                w.put_f64(v);
            }
        }
    }
    w.into_bytes()
}

/// Reads `n` u32 ids whose count is implied by context (no length prefix).
fn get_ids(r: &mut ByteReader, n: usize) -> Result<Vec<u32>> {
    if r.remaining() < n * 4 {
        return Err(CoreError::Truncated { offset: r.offset() }.into());
    }
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        out.push(r.get_u32()?);
    }
    Ok(out)
}

/// Reads a raw f64 grid of `n` values, validating the byte budget first.
fn get_grid(r: &mut ByteReader, n: usize) -> Result<Vec<f64>> {
    if r.remaining() < n * 8 {
        return Err(CoreError::Truncated { offset: r.offset() }.into());
    }
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        out.push(r.get_f64()?);
    }
    Ok(out)
}

pub fn deserialize(bytes: &[u8]) -> Result<BspcMatrix> {
    let mut r = ByteReader::new(bytes);
    r.get_magic(BSPC_MAGIC)?;
    let version = r.get_u32()?;
    if version != BSPC_VERSION {
        return Err(CoreError::BadVersion { found: version }.into());
    }
    let rows = r.get_u32()? as usize;
    let cols = r.get_u32()? as usize;
    let num_r = r.get_u32()? as usize;
    let num_c = r.get_u32()? as usize;
    let partition = BlockPartition::new(num_r, num_c)?;

    let kept_rows = r.get_u32_slice()?;
    // The structural validator requires sorted rows; checking here lets the
    // grid sizes below be trusted.
    if kept_rows.windows(2).any(|w| w[0] >= w[1])
        || kept_rows.iter().any(|&id| id as usize >= rows)
    {
        return Err(BspcError::Invalid(format!(
            "kept-row ids unsorted or out of range before offset {}",
            r.offset()
        )));
    }

    let perm_flag = r.get_u8()?;
    let row_perm = match perm_flag {
        0 => None,
        1 => Some(get_ids(&mut r, kept_rows.len())?),
        other => {
            return Err(BspcError::Invalid(format!(
                "bad permutation flag {other} at offset {}",
                r.offset() - 1
            )))
        }
    };

    let strips = partition.strip_count(rows);
    let blocks = partition.block_count(cols);
    let mut kept_cols = Vec::with_capacity(strips);
    let mut values = Vec::with_capacity(strips);
    for range in partition.strips(rows) {
        let rows_here = kept_rows
            .iter()
            .filter(|&&id| range.contains(&(id as usize)))
            .count();
        let mut strip_ids = Vec::with_capacity(blocks);
        let mut strip_grids = Vec::with_capacity(blocks);
        for _ in 0..blocks {
            let ids = r.get_u32_slice()?;
            let grid = get_grid(&mut r, rows_here * ids.len())?;
            strip_ids.push(ids);
            strip_grids.push(grid);
        }
        kept_cols.push(strip_ids);
        values.push(strip_grids);
    }
    r.finish()?;
    BspcMatrix::new(rows, cols, partition, kept_rows, kept_cols, values, row_perm)
}

pub fn save(b: &BspcMatrix, path: &Path) -> Result<()> {
    std::fs::write(path, serialize(b)).map_err(CoreError::Io)?;
    Ok(())
}

pub fn load(path: &Path) -> Result<BspcMatrix> {
    let bytes = std::fs::read(path).map_err(CoreError::Io)?;
    deserialize(&bytes)
}
