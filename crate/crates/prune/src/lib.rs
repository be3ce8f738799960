//! Block-based structured pruning: Euclidean projections onto block-sparse
//! sets, an alternating penalized-gradient/projection/dual scheme, the
//! two-step pruning pipeline with mask-respecting retraining, structured
//! mask types, compression accounting, and the BSPM mask file format.

pub mod admm;
pub mod compression;
pub mod constraint;
pub mod error;
pub mod mask;
pub mod maskfile;
pub mod partition;
pub mod pipeline;
pub mod projection;
pub mod report;

pub use admm::{admm_step, AdmmState};
pub use compression::{compression_rate, format_rate, to_3_sig};
pub use constraint::{keep_count, PruneRates, SparsityConstraint};
pub use error::PruneError;
pub use mask::{GruMasks, StructuredMask};
pub use partition::BlockPartition;
pub use pipeline::{bsp_prune, GruPartitions, PruneConfig, PruneOutcome};
pub use projection::{
    project_block_columns, project_block_columns_detailed, project_rows, project_rows_detailed,
};
pub use report::{MatrixReport, PruneReport};
