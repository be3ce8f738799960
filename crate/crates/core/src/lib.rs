//! Dense linear algebra, a single-layer GRU classifier with manual
//! backpropagation through time, a synthetic sequence-classification task,
//! and a deterministic SGD training loop.
//!
//! Everything in this crate runs in 64-bit floating point and is seeded
//! explicitly; identical seeds produce bit-identical results.

pub mod checkpoint;
pub mod dense;
pub mod error;
pub mod grad;
pub mod gru;
pub mod mask;
pub mod math;
pub mod rng;
pub mod task;
pub mod train;
pub mod wire;

pub use dense::DenseMatrix;
pub use error::CoreError;
pub use grad::{gru_backward, BackwardPass, GruGrads};
pub use gru::{gru_cell_forward, gru_forward_sequence, GruParams, GruState, MatrixId};
pub use mask::WeightMask;
pub use task::{Dataset, Sample, SyntheticTask};
pub use train::{accuracy, train, TrainOptions, TrainOutcome};
