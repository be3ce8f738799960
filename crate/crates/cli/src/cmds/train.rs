//! `bsp train`: fit the dense reference model on the synthetic task and
//! write the checkpoint, the per-epoch loss curve, and the held-out split
//! inference will later consume.

use bsp_core::gru::GruParams;
use bsp_core::train::{accuracy, train, TrainOptions};

use crate::dataset_file;
use crate::error::Result;
use crate::runenv::RunEnv;

pub fn run(env: &RunEnv) -> Result<()> {
    env.ensure_out()?;
    let cfg = &env.cfg;
    // Persist the effective (post-override) configuration so the run stays
    // reproducible from its directory alone.
    env.write_text(&env.effective_config_json(), &cfg.to_json())?;
    let train_data = env.train_split();
    let test_data = env.test_split();

    let init = GruParams::init_uniform(
        cfg.task.input_dim,
        cfg.model.hidden_dim,
        cfg.task.num_classes,
        env.seed_for("init"),
    );
    let opts = TrainOptions {
        lr: cfg.train.lr,
        epochs: cfg.train.epochs,
        batch_size: cfg.train.batch_size,
        seed: env.seed_for("train"),
    };
    let outcome = train(&init, &train_data, &opts, None)?;

    bsp_core::checkpoint::save(&outcome.params, &env.dense_checkpoint())?;
    let mut metrics = String::from("epoch,loss\n");
    for (epoch, loss) in outcome.loss_curve.iter().enumerate() {
        metrics.push_str(&format!("{epoch},{loss:.6}\n"));
    }
    env.write_text(&env.train_metrics_csv(), &metrics)?;
    dataset_file::save(&test_data, &env.test_data_file())?;

    let train_acc = accuracy(&outcome.params, &train_data)?;
    let test_acc = accuracy(&outcome.params, &test_data)?;
    println!(
        "trained hidden_dim={} input_dim={} epochs={} train_accuracy={:.4} test_accuracy={:.4}",
        cfg.model.hidden_dim, cfg.task.input_dim, cfg.train.epochs, train_acc, test_acc
    );
    Ok(())
}
