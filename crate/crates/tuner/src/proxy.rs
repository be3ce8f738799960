//! A cheap, deterministic estimate of how much accuracy a candidate block
//! partition costs: prune the reference model under that partition with a
//! short retraining budget and score it on held-out data.

use bsp_core::gru::GruParams;
use bsp_core::task::Dataset;
use bsp_core::train::accuracy;
use bsp_prune::{bsp_prune, BlockPartition, GruPartitions, PruneConfig, PruneRates};

use crate::error::Result;

/// Penalized epochs per pruning phase inside the proxy. Two is enough for
/// the projection to see lightly adapted weights while keeping a full grid
/// sweep cheap; the retraining budget is the caller's knob.
pub const PROXY_ADMM_EPOCHS: usize = 2;

/// The fixed inputs a proxy evaluation reuses across the whole grid: the
/// trained reference weights, the pruning data, and a held-out split that
/// scoring never trains on.
#[derive(Debug, Clone)]
pub struct ProxyContext {
    pub params: GruParams,
    pub train: Dataset,
    pub holdout: Dataset,
}

impl ProxyContext {
    pub fn new(params: GruParams, train: Dataset, holdout: Dataset) -> Self {
        ProxyContext {
            params,
            train,
            holdout,
        }
    }
}

/// Prunes `ctx.params` under a uniform (num_r, num_c) partition at the
/// given rates with `budget_epochs` of masked retraining, and returns the
/// held-out accuracy of the result. Identical inputs give bitwise
/// identical proxies; with rates (1, 1) the run degenerates to plain
/// retraining, so a zero budget returns the dense held-out accuracy.
pub fn accuracy_proxy(
    ctx: &ProxyContext,
    num_r: usize,
    num_c: usize,
    rates: PruneRates,
    budget_epochs: usize,
    seed: u64,
) -> Result<f64> {
    let partition = BlockPartition::new(num_r, num_c)?;
    let partitions = GruPartitions::uniform(partition);
    let cfg = PruneConfig {
        admm_epochs: PROXY_ADMM_EPOCHS,
        retrain_epochs: budget_epochs,
        seed,
        ..PruneConfig::default()
    };
    let outcome = bsp_prune(&ctx.params, &partitions, rates, &cfg, &ctx.train)?;
    Ok(accuracy(&outcome.params, &ctx.holdout)?)
}
