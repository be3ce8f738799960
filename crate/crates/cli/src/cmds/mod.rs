pub mod bench;
pub mod infer;
pub mod pack;
pub mod prune;
pub mod report;
pub mod train;
pub mod tune;
