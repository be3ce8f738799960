//! BSPC: a compact storage format for block-structured sparse matrices.
//!
//! Matrices pruned to a (kept rows) x (per-block kept columns) product
//! structure need far less index data than general sparse formats: one id
//! per surviving row and one per surviving column, instead of CSR's one
//! per nonzero. This crate provides the in-memory type, the dense
//! encoder/decoder, CSR conversion and index-size accounting, and a
//! little-endian on-disk form with offset-reporting parse errors.

pub mod csr;
pub mod encode;
pub mod error;
pub mod matrix;
pub mod overhead;
pub mod serial;

pub use csr::CsrMatrix;
pub use encode::encode;
pub use error::BspcError;
pub use matrix::BspcMatrix;
pub use overhead::{has_two_by_two_grid, index_overhead, IndexOverhead};
pub use serial::{deserialize, load, save, serialize, BSPC_MAGIC, BSPC_VERSION};
