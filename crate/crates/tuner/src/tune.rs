//! Exhaustive grid search balancing measured time against a pruned-model
//! accuracy proxy. Scores combine the two linearly: after min-max
//! normalizing median times over the space, `score = proxy - lambda * t`.

use crate::error::{Result, TunerError};
use crate::space::{SearchSpace, TuneConfig};

/// Default accuracy/time trade-off weight.
pub const DEFAULT_LAMBDA: f64 = 0.5;

/// What the evaluator reports for one candidate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Measurement {
    pub median_ns: f64,
    pub accuracy_proxy: f64,
}

/// One scored grid point, in enumeration order.
#[derive(Debug, Clone, PartialEq)]
pub struct CandidateRecord {
    pub config: TuneConfig,
    pub median_ns: f64,
    pub accuracy_proxy: f64,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TuneResult {
    /// The score-maximal configuration; ties go to the lexicographically
    /// smallest (num_r, num_c, tile, unroll, workers).
    pub chosen: TuneConfig,
    /// Every candidate exactly once, in ascending configuration order.
    pub records: Vec<CandidateRecord>,
}

impl TuneResult {
    /// The record backing the chosen configuration.
    pub fn chosen_record(&self) -> &CandidateRecord {
        self.records
            .iter()
            .find(|r| r.config == self.chosen)
            .expect("chosen configuration always comes from the table")
    }
}

/// Runs every candidate in `space` through `evaluator` once and picks the
/// score-maximal configuration. `seed` is forwarded to the evaluator
/// verbatim so accuracy proxies can be made deterministic; with a
/// deterministic evaluator the whole search is a pure function.
pub fn tune<F>(space: &SearchSpace, mut evaluator: F, lambda: f64, seed: u64) -> Result<TuneResult>
where
    F: FnMut(TuneConfig, u64) -> std::result::Result<Measurement, String>,
{
    if !lambda.is_finite() || lambda < 0.0 {
        return Err(TunerError::BadLambda { lambda });
    }

    let candidates = space.candidates();
    let mut measured = Vec::with_capacity(candidates.len());
    for config in candidates {
        let m = evaluator(config, seed)
            .map_err(|message| TunerError::EvaluatorFailed { config, message })?;
        if !m.median_ns.is_finite() || m.median_ns < 0.0 || !m.accuracy_proxy.is_finite() {
            return Err(TunerError::EvaluatorFailed {
                config,
                message: format!(
                    "non-finite measurement (median_ns={}, accuracy_proxy={})",
                    m.median_ns, m.accuracy_proxy
                ),
            });
        }
        measured.push((config, m));
    }

    // Min-max normalize time over the space; a flat time column carries no
    // ranking information, so it normalizes to zero everywhere.
    let t_min = measured.iter().map(|(_, m)| m.median_ns).fold(f64::INFINITY, f64::min);
    let t_max = measured
        .iter()
        .map(|(_, m)| m.median_ns)
        .fold(f64::NEG_INFINITY, f64::max);
    let spread = t_max - t_min;
    let normalize = |t: f64| if spread > 0.0 { (t - t_min) / spread } else { 0.0 };

    let records: Vec<CandidateRecord> = measured
        .into_iter()
        .map(|(config, m)| CandidateRecord {
            config,
            median_ns: m.median_ns,
            accuracy_proxy: m.accuracy_proxy,
            score: m.accuracy_proxy - lambda * normalize(m.median_ns),
        })
        .collect();

    let mut best = &records[0];
    for r in &records[1..] {
        if r.score > best.score || (r.score == best.score && r.config < best.config) {
            best = r;
        }
    }

    Ok(TuneResult {
        chosen: best.config,
        records,
    })
}

/// Renders the full tuning log; the trailing flag marks the chosen row.
pub fn tuning_csv(result: &TuneResult) -> String {
    let mut out = String::from("num_r,num_c,tile,unroll,workers,median_ns,accuracy_proxy,score,chosen\n");
    for r in &result.records {
        let chosen = if r.config == result.chosen { 1 } else { 0 };
        out.push_str(&format!(
            "{},{},{},{},{},{:.1},{:.6},{:.6},{}\n",
            r.config.num_r,
            r.config.num_c,
            r.config.tile_size,
            r.config.unroll_factor,
            r.config.worker_count,
            r.median_ns,
            r.accuracy_proxy,
            r.score,
            chosen
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space(num_c: Vec<usize>) -> SearchSpace {
        SearchSpace::new(vec![1], num_c, vec![1], vec![1], vec![1]).unwrap()
    }

    fn ok(median_ns: f64, accuracy_proxy: f64) -> std::result::Result<Measurement, String> {
        Ok(Measurement {
            median_ns,
            accuracy_proxy,
        })
    }

    #[test]
    fn singleton_space_returns_its_only_point() {
        let s = SearchSpace::new(vec![2], vec![4], vec![8], vec![2], vec![1]).unwrap();
        let result = tune(&s, |_, _| ok(100.0, 0.9), 0.5, 0).unwrap();
        assert_eq!(result.records.len(), 1);
        assert_eq!(
            result.chosen,
            TuneConfig {
                num_r: 2,
                num_c: 4,
                tile_size: 8,
                unroll_factor: 2,
                worker_count: 1
            }
        );
        // Single point: its own time is both min and max, so score = proxy.
        assert_eq!(result.chosen_record().score, 0.9);
    }

    #[test]
    fn lambda_zero_ignores_time_entirely() {
        let s = space(vec![1, 2, 3]);
        // Highest accuracy is also the slowest by far.
        let result = tune(
            &s,
            |c, _| match c.num_c {
                1 => ok(10.0, 0.50),
                2 => ok(20.0, 0.70),
                _ => ok(1e9, 0.90),
            },
            0.0,
            0,
        )
        .unwrap();
        assert_eq!(result.chosen.num_c, 3);
    }

    #[test]
    fn lambda_trades_time_against_accuracy() {
        let s = space(vec![1, 2]);
        // num_c=2 is slightly more accurate but normalizes to t=1.
        let eval = |c: TuneConfig, _| match c.num_c {
            1 => ok(100.0, 0.80),
            _ => ok(900.0, 0.90),
        };
        assert_eq!(tune(&s, eval, 0.0, 0).unwrap().chosen.num_c, 2);
        assert_eq!(tune(&s, eval, 0.5, 0).unwrap().chosen.num_c, 1);
    }

    #[test]
    fn equal_scores_pick_lexicographically_smallest() {
        let s = SearchSpace::new(vec![1, 2], vec![1, 2], vec![1], vec![1], vec![1]).unwrap();
        let result = tune(&s, |_, _| ok(500.0, 0.75), 0.5, 0).unwrap();
        assert_eq!(
            result.chosen,
            TuneConfig {
                num_r: 1,
                num_c: 1,
                tile_size: 1,
                unroll_factor: 1,
                worker_count: 1
            }
        );
    }

    #[test]
    fn chosen_score_dominates_every_record() {
        let s = SearchSpace::new(vec![1, 2], vec![1, 2, 3], vec![1, 4], vec![1], vec![1, 2]).unwrap();
        let result = tune(
            &s,
            |c, _| {
                ok(
                    (c.num_c * 100 + c.tile_size * 7 + c.worker_count) as f64,
                    1.0 / (1.0 + c.num_r as f64 + 0.3 * c.num_c as f64),
                )
            },
            0.5,
            0,
        )
        .unwrap();
        let best = result.chosen_record().score;
        assert!(result.records.iter().all(|r| r.score <= best));
    }

    #[test]
    fn every_candidate_evaluated_exactly_once() {
        let s = SearchSpace::new(vec![1, 2], vec![2, 4], vec![1, 2], vec![1, 2], vec![1]).unwrap();
        let mut seen = Vec::new();
        tune(
            &s,
            |c, _| {
                seen.push(c);
                ok(1.0, 0.5)
            },
            0.5,
            0,
        )
        .unwrap();
        assert_eq!(seen.len(), s.len());
        let mut dedup = seen.clone();
        dedup.sort();
        dedup.dedup();
        assert_eq!(dedup.len(), seen.len(), "no candidate may repeat");
    }

    #[test]
    fn evaluator_failure_carries_the_config() {
        let s = space(vec![1, 2, 3]);
        let err = tune(
            &s,
            |c, _| {
                if c.num_c == 2 {
                    Err("bench exploded".into())
                } else {
                    ok(1.0, 0.5)
                }
            },
            0.5,
            0,
        )
        .unwrap_err();
        match err {
            TunerError::EvaluatorFailed { config, message } => {
                assert_eq!(config.num_c, 2);
                assert_eq!(message, "bench exploded");
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn non_finite_measurement_is_an_evaluator_failure() {
        let s = space(vec![1]);
        let err = tune(&s, |_, _| ok(f64::NAN, 0.5), 0.5, 0).unwrap_err();
        assert!(matches!(err, TunerError::EvaluatorFailed { .. }));
        let err = tune(&space(vec![1]), |_, _| ok(1.0, f64::INFINITY), 0.5, 0).unwrap_err();
        assert!(matches!(err, TunerError::EvaluatorFailed { .. }));
    }

    #[test]
    fn negative_lambda_rejected() {
        let s = space(vec![1]);
        let err = tune(&s, |_, _| ok(1.0, 0.5), -0.1, 0).unwrap_err();
        assert!(matches!(err, TunerError::BadLambda { .. }));
    }

    #[test]
    fn csv_layout_is_pinned() {
        let s = space(vec![1, 2]);
        let result = tune(
            &s,
            |c, _| match c.num_c {
                1 => ok(1200.0, 0.80),
                _ => ok(1000.0, 0.70),
            },
            0.5,
            0,
        )
        .unwrap();
        let csv = tuning_csv(&result);
        let mut lines = csv.lines();
        assert_eq!(
            lines.next().unwrap(),
            "num_r,num_c,tile,unroll,workers,median_ns,accuracy_proxy,score,chosen"
        );
        // num_c=1 normalizes to t=1: score 0.8 - 0.5 = 0.30.
        // num_c=2 normalizes to t=0: score 0.70, which wins.
        assert_eq!(lines.next().unwrap(), "1,1,1,1,1,1200.0,0.800000,0.300000,0");
        assert_eq!(lines.next().unwrap(), "1,2,1,1,1,1000.0,0.700000,0.700000,1");
        assert!(lines.next().is_none());
    }
}
