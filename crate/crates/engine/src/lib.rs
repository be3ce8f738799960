//! Schedule-optimizing execution for block-sparse matrices: rows are
//! regrouped by identical column patterns, each group's input loads are
//! shared instead of repeated per row, and the resulting kernels drive a
//! sparse GRU inference path that matches the dense recurrence bit for
//! bit under all-true masks. Includes operation counting and a small
//! wall-clock benchmark harness.

pub mod bench;
pub mod error;
pub mod exec;
pub mod ops;
pub mod reorder;
pub mod schedule;
pub mod sparse_gru;

pub use bench::{bench_csv, benchmark, BenchRecord, BenchStats};
pub use error::EngineError;
pub use exec::{spmv, spmv_counted, spmv_into, LoadCounter, LoadMode};
pub use ops::{count_ops, count_ops_masks, dense_weight_nnz, OpCounts};
pub use reorder::{pattern_key, reorder, strip_groups, RowGroup};
pub use schedule::{plan_loads, structure_key, ExecutionSchedule};
pub use sparse_gru::{sparse_gru_cell_forward, sparse_gru_forward, SparseGruWeights};
