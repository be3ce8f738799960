//! The accuracy proxy against its training oracle: with vacuous rates the
//! pruning run collapses to plain masked-free retraining, and tightening
//! the column rate can only cost accuracy on average.

use bsp_core::gru::GruParams;
use bsp_core::train::{accuracy, train};
use bsp_core::SyntheticTask;
use bsp_prune::{PruneConfig, PruneRates};
use bsp_tuner::{accuracy_proxy, ProxyContext, PROXY_ADMM_EPOCHS};

fn trained_context() -> ProxyContext {
    // Input width 16 with num_c=2 gives 8-wide blocks everywhere, so each
    // doubling of the column rate strictly tightens every weight matrix
    // (keeps 8 -> 4 -> 2 -> 1 columns per block).
    let task = SyntheticTask::new(6, 16, 4, 0.4, 13);
    let train_data = task.sample(64, "train");
    let holdout = task.sample(96, "holdout");
    let init = GruParams::init_uniform(16, 16, 4, 1);
    let opts = bsp_core::train::TrainOptions::default();
    let trained = train(&init, &train_data, &opts, None).unwrap().params;
    ProxyContext::new(trained, train_data, holdout)
}

#[test]
fn noop_rates_equal_the_plain_retrain_oracle_bitwise() {
    let ctx = trained_context();
    let rates = PruneRates::new(1.0, 1.0).unwrap();
    let budget = 3;
    let seed = 17;
    let proxy = accuracy_proxy(&ctx, 2, 2, rates, budget, seed).unwrap();

    // Oracle: run the retraining pass directly with the exact options the
    // pruning pipeline derives, no pruning machinery involved.
    let cfg = PruneConfig {
        admm_epochs: PROXY_ADMM_EPOCHS,
        retrain_epochs: budget,
        seed,
        ..PruneConfig::default()
    };
    let retrained = train(&ctx.params, &ctx.train, &cfg.retrain_options(), None)
        .unwrap()
        .params;
    let oracle = accuracy(&retrained, &ctx.holdout).unwrap();
    assert_eq!(proxy.to_bits(), oracle.to_bits());
}

#[test]
fn mean_proxy_is_nonincreasing_in_col_rate() {
    let ctx = trained_context();
    let seeds = [0u64, 1, 2, 3, 4, 5, 6, 7];
    let mut means = Vec::new();
    for col_rate in [1.0, 2.0, 4.0, 8.0] {
        let rates = PruneRates::new(col_rate, 1.0).unwrap();
        let total: f64 = seeds
            .iter()
            .map(|&s| accuracy_proxy(&ctx, 2, 2, rates, 3, s).unwrap())
            .sum();
        means.push(total / seeds.len() as f64);
    }
    for pair in means.windows(2) {
        assert!(
            pair[1] <= pair[0] + 1e-12,
            "mean proxy must not rise with the column rate: {means:?}"
        );
    }
    assert!(
        means[0] - means[3] > 0.0,
        "an 8x column rate on this model must cost some accuracy: {means:?}"
    );
}
