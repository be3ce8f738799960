//! Offline auto-tuning over block partitions and executor knobs.
//!
//! The search is an exhaustive sweep of a small grid ([`SearchSpace`]):
//! every candidate is evaluated exactly once by a caller-supplied
//! evaluator returning a median kernel time and an accuracy proxy, the
//! two are combined by `score = accuracy_proxy - lambda * normalized_time`
//! (time min-max normalized over the space), and the score-maximal
//! configuration wins with lexicographic tie-breaking. With a
//! deterministic evaluator the whole search is reproducible bit for bit.
//!
//! [`accuracy_proxy`] is the standard accuracy half of an evaluator: it
//! prunes a reference model under the candidate partition with a short
//! retraining budget and scores the result on held-out data.

pub mod error;
pub mod proxy;
pub mod space;
pub mod tune;

pub use error::TunerError;
pub use proxy::{accuracy_proxy, ProxyContext, PROXY_ADMM_EPOCHS};
pub use space::{SearchSpace, TuneConfig};
pub use tune::{tune, tuning_csv, CandidateRecord, Measurement, TuneResult, DEFAULT_LAMBDA};
