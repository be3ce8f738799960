//! `bsp report`: collect every completed run under a directory into one
//! compression-vs-accuracy-vs-speedup table, as CSV and as plain text on
//! stdout. A run counts as completed when it has both a prune summary and
//! a benchmark table; rows are ordered by compression rate.

use std::path::Path;

use bsp_prune::format_rate;

use crate::error::{CliError, Result};
use crate::summary::PruneSummary;

struct ReportRow {
    run: String,
    compression_rate: f64,
    accuracy: f64,
    speedup: f64,
}

/// Pulls the median_ns column for `kernel` out of a benchmark CSV.
fn median_for(csv: &str, kernel: &str, path: &Path) -> Result<f64> {
    for line in csv.lines().skip(1) {
        let mut fields = line.split(',');
        if fields.next() == Some(kernel) {
            let median = fields.nth(1).ok_or_else(|| {
                CliError::Parse(format!("{}: malformed row for {kernel}", path.display()))
            })?;
            return median.parse().map_err(|_| {
                CliError::Parse(format!("{}: bad median for {kernel}", path.display()))
            });
        }
    }
    Err(CliError::Parse(format!(
        "{}: kernel {kernel} not found",
        path.display()
    )))
}

pub fn run(root: &Path) -> Result<()> {
    let entries = std::fs::read_dir(root)
        .map_err(|e| CliError::Parse(format!("{}: {}", root.display(), e)))?;
    let mut dirs: Vec<_> = entries
        .filter_map(|e| e.ok())
        .map(|e| e.path())
        .filter(|p| p.is_dir())
        .collect();
    dirs.sort();

    let mut rows = Vec::new();
    for dir in dirs {
        let summary_path = dir.join("prune_summary.json");
        let bench_path = dir.join("bench.csv");
        if !summary_path.exists() || !bench_path.exists() {
            continue;
        }
        let summary = PruneSummary::load(&summary_path)?;
        let csv = std::fs::read_to_string(&bench_path)
            .map_err(|e| CliError::Parse(format!("{}: {}", bench_path.display(), e)))?;
        let dense_ns = median_for(&csv, "dense_all", &bench_path)?;
        let sparse_ns = median_for(&csv, "spmv_all", &bench_path)?;
        let run = dir
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default();
        rows.push(ReportRow {
            run,
            compression_rate: summary.compression_rate,
            accuracy: summary.accuracy_pruned,
            speedup: dense_ns / sparse_ns,
        });
    }
    if rows.is_empty() {
        return Err(CliError::Parse(format!(
            "{}: no completed runs (need prune_summary.json and bench.csv)",
            root.display()
        )));
    }
    rows.sort_by(|a, b| {
        a.compression_rate
            .partial_cmp(&b.compression_rate)
            .expect("rates are finite")
            .then_with(|| a.run.cmp(&b.run))
    });

    let mut csv = String::from("run,compression_rate,accuracy,speedup\n");
    for r in &rows {
        csv.push_str(&format!(
            "{},{},{:.4},{:.3}\n",
            r.run,
            format_rate(r.compression_rate),
            r.accuracy,
            r.speedup
        ));
    }
    std::fs::write(root.join("report.csv"), &csv)
        .map_err(|e| CliError::Parse(format!("{}: {}", root.join("report.csv").display(), e)))?;

    let name_w = rows.iter().map(|r| r.run.len()).max().unwrap_or(3).max(3);
    println!("{:name_w$}  {:>11}  {:>8}  {:>7}", "run", "compression", "accuracy", "speedup");
    for r in &rows {
        println!(
            "{:name_w$}  {:>10}x  {:>8.4}  {:>7.3}",
            r.run,
            format_rate(r.compression_rate),
            r.accuracy,
            r.speedup
        );
    }
    Ok(())
}
