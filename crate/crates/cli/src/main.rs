//! `bsp` — block-structured pruning toolkit driver.
//!
//! One run directory accumulates the artifacts of a pipeline:
//! train -> prune -> pack -> infer/bench, with tune and report alongside.
//! Every failure exits with a category-specific code (2 usage, 3 parse,
//! 4 infeasible, 5 divergence, 6 verification) and a single JSON line on
//! stderr.

mod cmds;
mod config;
mod dataset_file;
mod error;
mod packed;
mod runenv;
mod summary;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::error::{CliError, Result};
use crate::runenv::RunEnv;

#[derive(Parser)]
#[command(name = "bsp", version, about = "Block-structured pruning toolkit")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Common {
    /// Run configuration (JSON); defaults apply when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Overrides the config's top-level seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Run directory for inputs and outputs.
    #[arg(long, default_value = "run")]
    out: PathBuf,
}

#[derive(Subcommand)]
enum Cmd {
    /// Train the dense reference model.
    Train {
        #[command(flatten)]
        common: Common,
    },
    /// Prune the trained checkpoint with block-structured ADMM.
    Prune {
        #[command(flatten)]
        common: Common,
    },
    /// Encode the pruned checkpoint into compact sparse files.
    Pack {
        #[command(flatten)]
        common: Common,
    },
    /// Run sparse inference over the held-out split.
    Infer {
        #[command(flatten)]
        common: Common,
        /// Check every output against the dense reference.
        #[arg(long)]
        verify: bool,
        /// Executor worker threads.
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
    /// Benchmark sparse kernels against the dense baseline.
    Bench {
        #[command(flatten)]
        common: Common,
        /// Timing samples per kernel.
        #[arg(long, default_value_t = 9)]
        reps: usize,
        /// Executor worker threads.
        #[arg(long, default_value_t = 1)]
        workers: usize,
    },
    /// Search the configured grid for the best execution configuration.
    Tune {
        #[command(flatten)]
        common: Common,
        /// Overrides the config's timing samples per candidate.
        #[arg(long)]
        reps: Option<usize>,
    },
    /// Summarize completed runs under a directory.
    Report {
        /// Directory containing one subdirectory per run.
        #[arg(long, default_value = "run")]
        out: PathBuf,
    },
}

fn dispatch(cmd: Cmd) -> Result<()> {
    match cmd {
        Cmd::Train { common } => {
            let env = RunEnv::new(common.config.as_deref(), common.seed, common.out)?;
            cmds::train::run(&env)
        }
        Cmd::Prune { common } => {
            let env = RunEnv::new(common.config.as_deref(), common.seed, common.out)?;
            cmds::prune::run(&env)
        }
        Cmd::Pack { common } => {
            let env = RunEnv::new(common.config.as_deref(), common.seed, common.out)?;
            cmds::pack::run(&env)
        }
        Cmd::Infer {
            common,
            verify,
            workers,
        } => {
            let env = RunEnv::new(common.config.as_deref(), common.seed, common.out)?;
            cmds::infer::run(&env, verify, workers)
        }
        Cmd::Bench {
            common,
            reps,
            workers,
        } => {
            let env = RunEnv::new(common.config.as_deref(), common.seed, common.out)?;
            cmds::bench::run(&env, reps, workers)
        }
        Cmd::Tune { common, reps } => {
            let env = RunEnv::new(common.config.as_deref(), common.seed, common.out)?;
            cmds::tune::run(&env, reps)
        }
        Cmd::Report { out } => cmds::report::run(&out),
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests are successes, not usage errors.
            if e.use_stderr() {
                let err = CliError::Usage(e.to_string());
                eprintln!("{}", err.to_json_line());
                std::process::exit(err.exit_code());
            }
            print!("{e}");
            return;
        }
    };
    if let Err(err) = dispatch(cli.cmd) {
        eprintln!("{}", err.to_json_line());
        std::process::exit(err.exit_code());
    }
}
