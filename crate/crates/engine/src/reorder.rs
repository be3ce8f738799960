//! Row grouping and matrix reorder.
//!
//! Every surviving row of a strip reads the same input positions — the
//! strip's kept columns. Reordering sorts rows so that rows with identical
//! column patterns sit together (strips that chose the same columns
//! merge), which lets the executor load each pattern column once per group
//! instead of once per row.

use bspc::BspcMatrix;

use crate::error::Result;

/// FNV-1a over the column ids, each widened to 8 little-endian bytes.
/// Canonical: equal id sequences always hash equal.
pub fn pattern_key(ids: &[u32]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &id in ids {
        for byte in (id as u64).to_le_bytes() {
            h ^= byte as u64;
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
    }
    h
}

/// Rows that read exactly the same input positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowGroup {
    /// Hash of the shared kept-column sequence, used as the sort key.
    pub pattern_key: u64,
    /// Original row ids, ascending; every row has an identical pattern.
    pub rows: Vec<u32>,
    /// Entries stored per row: the pattern length.
    pub row_nnz: usize,
    /// The shared kept-column ids, ascending.
    pub pattern: Vec<u32>,
}

/// One group per live strip, in strip order, without merging or sorting.
/// This is the unreordered execution baseline.
pub fn strip_groups(b: &BspcMatrix) -> Vec<RowGroup> {
    let mut groups = Vec::new();
    for s in 0..b.partition().strip_count(b.rows()) {
        let rows = b.strip_kept_rows(s);
        if rows.is_empty() {
            continue;
        }
        let pattern = b.strip_pattern(s);
        groups.push(RowGroup {
            pattern_key: pattern_key(&pattern),
            rows: rows.to_vec(),
            row_nnz: pattern.len(),
            pattern,
        });
    }
    groups
}

/// Groups rows by exact column pattern and sorts the groups by
/// (pattern_key, per-row entry count, pattern); rows inside a group stay
/// in ascending id order. Returns a copy of the matrix carrying the
/// resulting execution-order permutation, plus the groups.
///
/// Grouping compares full patterns, never just their hashes, so a hash
/// collision between different patterns costs a merge opportunity ranking
/// only, not correctness: the colliding groups stay separate and are
/// ordered by the pattern itself.
pub fn reorder(b: &BspcMatrix) -> Result<(BspcMatrix, Vec<RowGroup>)> {
    let mut groups: Vec<RowGroup> = Vec::new();
    for strip in strip_groups(b) {
        match groups.iter_mut().find(|g| g.pattern == strip.pattern) {
            Some(g) => g.rows.extend_from_slice(&strip.rows),
            None => groups.push(strip),
        }
    }
    // Strips are visited in ascending row order, so merged row lists are
    // already sorted; only the groups themselves need ordering.
    groups.sort_by(|a, b| {
        (a.pattern_key, a.row_nnz, &a.pattern).cmp(&(b.pattern_key, b.row_nnz, &b.pattern))
    });
    let perm: Vec<u32> = groups.iter().flat_map(|g| g.rows.iter().copied()).collect();
    let mut reordered = b.clone();
    reordered.set_row_perm(perm)?;
    Ok((reordered, groups))
}
