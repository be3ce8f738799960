//! The two-step structured pruning pipeline.
//!
//! Step 1 runs the alternating scheme with the per-block column projection,
//! then hard-prunes (the projected weights replace the trained ones and the
//! surviving column ids are fixed). Step 2 does the same with the global row
//! projection, starting from the column-pruned weights with a fresh
//! auxiliary/dual pair and the column mask enforced during its gradient
//! epochs. Mask-respecting retraining finishes the job. A phase whose
//! constraint is vacuous (rate 1) is skipped outright, so no-op pruning is
//! exactly a plain retrain.

use bsp_core::gru::{GruParams, MatrixId};
use bsp_core::mask::WeightMask;
use bsp_core::rng::{derive_seed, seeded_rng};
use bsp_core::task::Dataset;
use bsp_core::train::{accuracy, sgd_epoch, train, TrainOptions};
use bsp_core::{CoreError, DenseMatrix, GruGrads};
use rand::seq::SliceRandom;

use crate::compression::compression_rate;
use crate::constraint::{PruneRates, SparsityConstraint};
use crate::error::PruneError;
use crate::mask::{GruMasks, StructuredMask};
use crate::partition::BlockPartition;
use crate::projection::{project_block_columns_detailed, project_rows_detailed, KeptCols};
use crate::report::{MatrixReport, PruneReport};

/// One block partition per prunable matrix, in `MatrixId` order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GruPartitions {
    parts: [BlockPartition; 6],
}

impl GruPartitions {
    pub fn uniform(part: BlockPartition) -> Self {
        GruPartitions { parts: [part; 6] }
    }

    pub fn new(parts: [BlockPartition; 6]) -> Self {
        GruPartitions { parts }
    }

    pub fn get(&self, id: MatrixId) -> BlockPartition {
        self.parts[id.index()]
    }

    pub fn set(&mut self, id: MatrixId, part: BlockPartition) {
        self.parts[id.index()] = part;
    }
}

#[derive(Debug, Clone)]
pub struct PruneConfig {
    /// Penalty weight on ||W - Z + U||_F^2 / 2.
    pub rho: f64,
    /// Gradient epochs per phase; each epoch ends with one projection and
    /// dual update per matrix. Zero epochs means one-shot projection.
    pub admm_epochs: usize,
    /// Mask-respecting retraining epochs after both phases.
    pub retrain_epochs: usize,
    pub lr: f64,
    pub batch_size: usize,
    pub seed: u64,
}

impl Default for PruneConfig {
    fn default() -> Self {
        PruneConfig {
            rho: 1e-2,
            admm_epochs: 8,
            retrain_epochs: 10,
            lr: 0.01,
            batch_size: 1,
            seed: 0,
        }
    }
}

impl PruneConfig {
    /// The options used for the final retraining pass; exposed so a plain
    /// retrain can be reproduced exactly.
    pub fn retrain_options(&self) -> TrainOptions {
        TrainOptions {
            lr: self.lr,
            epochs: self.retrain_epochs,
            batch_size: self.batch_size,
            seed: derive_seed(self.seed, "retrain"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct PruneOutcome {
    pub params: GruParams,
    pub masks: GruMasks,
    pub report: PruneReport,
}

/// Runs one pruning phase: `admm_epochs` penalized gradient epochs, each
/// followed by the projection and dual updates, then a hard prune (the last
/// projected weights replace the trained ones). Returns the projection
/// detail (kept ids) captured at the final projection.
fn run_phase<D>(
    work: &mut GruParams,
    data: &Dataset,
    cfg: &PruneConfig,
    stream: &str,
    train_mask: Option<&WeightMask>,
    project: &mut dyn FnMut(MatrixId, &DenseMatrix) -> Result<(DenseMatrix, D), PruneError>,
) -> Result<Vec<D>, PruneError> {
    let mut zs = Vec::with_capacity(6);
    let mut us = Vec::with_capacity(6);
    let mut details = Vec::with_capacity(6);
    for id in MatrixId::ALL {
        let w = work.matrix(id);
        let (z, d) = project(id, w)?;
        us.push(DenseMatrix::zeros(w.rows(), w.cols()));
        zs.push(z);
        details.push(d);
    }

    let mut rng = seeded_rng(derive_seed(cfg.seed, stream));
    let mut order: Vec<usize> = (0..data.len()).collect();
    for epoch in 0..cfg.admm_epochs {
        order.shuffle(&mut rng);
        let rho = cfg.rho;
        let (zs_ref, us_ref) = (&zs, &us);
        let mut add_penalty = |params: &GruParams, grads: &mut GruGrads| {
            for id in MatrixId::ALL {
                let i = id.index();
                let w = params.matrix(id);
                let g = grads.matrix_mut(id);
                for (((gv, wv), zv), uv) in g
                    .values_mut()
                    .iter_mut()
                    .zip(w.values())
                    .zip(zs_ref[i].values())
                    .zip(us_ref[i].values())
                {
                    *gv += rho * (wv - zv + uv);
                }
            }
        };
        let mean_loss = sgd_epoch(
            work,
            data,
            &order,
            cfg.lr,
            cfg.batch_size,
            train_mask,
            Some(&mut add_penalty),
        )?;
        if !mean_loss.is_finite() {
            return Err(CoreError::NumericDivergence { epoch }.into());
        }
        for id in MatrixId::ALL {
            let i = id.index();
            let w = work.matrix(id);
            let mut target = w.clone();
            target.add_scaled(1.0, &us[i]);
            let (z, d) = project(id, &target)?;
            for ((uv, wv), zv) in us[i]
                .values_mut()
                .iter_mut()
                .zip(w.values())
                .zip(z.values())
            {
                *uv = (*uv + *wv) - *zv;
            }
            if !z.is_finite() || !us[i].is_finite() {
                return Err(CoreError::NonFinite {
                    context: "admm projection/dual update",
                }
                .into());
            }
            zs[i] = z;
            details[i] = d;
        }
    }

    for id in MatrixId::ALL {
        *work.matrix_mut(id) = zs[id.index()].clone();
    }
    Ok(details)
}

/// The full two-step pipeline. Only the six gate matrices are pruned; the
/// readout is left untouched.
pub fn bsp_prune(
    params: &GruParams,
    partitions: &GruPartitions,
    rates: PruneRates,
    cfg: &PruneConfig,
    data: &Dataset,
) -> Result<PruneOutcome, PruneError> {
    params.validate()?;
    let accuracy_before = accuracy(params, data)?;

    let constraints: Vec<SparsityConstraint> = MatrixId::ALL
        .iter()
        .map(|&id| {
            let m = params.matrix(id);
            SparsityConstraint::from_rates(m.rows(), m.cols(), partitions.get(id), rates)
        })
        .collect::<Result<_, _>>()?;
    let cols_bind = MatrixId::ALL.iter().any(|&id| {
        !constraints[id.index()].cols_vacuous(params.matrix(id).cols(), partitions.get(id))
    });
    let rows_bind = MatrixId::ALL
        .iter()
        .any(|&id| !constraints[id.index()].rows_vacuous(params.matrix(id).rows()));

    let mut work = params.clone();

    let kept_cols: Vec<KeptCols> = if cols_bind {
        run_phase(&mut work, data, cfg, "admm-cols", None, &mut |id, m| {
            project_block_columns_detailed(m, partitions.get(id), &constraints[id.index()].col_keep)
        })?
    } else {
        MatrixId::ALL
            .iter()
            .map(|&id| {
                let m = params.matrix(id);
                let part = partitions.get(id);
                part.strips(m.rows())
                    .map(|_| {
                        part.blocks(m.cols())
                            .map(|b| (b.start as u32..b.end as u32).collect())
                            .collect()
                    })
                    .collect()
            })
            .collect()
    };

    // Column-only masks keep step 1's support fixed through step 2.
    let col_masks = build_masks(params, partitions, None, &kept_cols)?;
    let col_weight_mask = col_masks.to_weight_mask();

    let kept_rows: Vec<Vec<u32>> = if rows_bind {
        let mask = cols_bind.then_some(&col_weight_mask);
        run_phase(&mut work, data, cfg, "admm-rows", mask, &mut |id, m| {
            project_rows_detailed(m, constraints[id.index()].row_keep)
        })?
    } else {
        MatrixId::ALL
            .iter()
            .map(|&id| (0..params.matrix(id).rows() as u32).collect())
            .collect()
    };

    let masks = build_masks(params, partitions, Some(&kept_rows), &kept_cols)?;
    let weight_mask = masks.to_weight_mask();
    weight_mask.apply(&mut work);

    let final_params = if cfg.retrain_epochs > 0 {
        train(&work, data, &cfg.retrain_options(), Some(&weight_mask))?.params
    } else {
        work
    };

    let overall_rate = compression_rate(&masks)?;
    let accuracy_after = accuracy(&final_params, data)?;
    let per_matrix = MatrixId::ALL
        .map(|id| {
            let m = masks.get(id);
            MatrixReport {
                matrix: id,
                rows: m.rows(),
                cols: m.cols(),
                nnz: m.nnz(),
                rate: (m.rows() * m.cols()) as f64 / m.nnz().max(1) as f64,
            }
        })
        .to_vec();
    Ok(PruneOutcome {
        params: final_params,
        masks,
        report: PruneReport {
            per_matrix,
            overall_rate,
            accuracy_before,
            accuracy_after,
        },
    })
}

/// Assembles per-matrix structured masks; `kept_rows = None` keeps all rows.
fn build_masks(
    params: &GruParams,
    partitions: &GruPartitions,
    kept_rows: Option<&Vec<Vec<u32>>>,
    kept_cols: &[KeptCols],
) -> Result<GruMasks, PruneError> {
    let mut masks = Vec::with_capacity(6);
    for id in MatrixId::ALL {
        let m = params.matrix(id);
        let rows = match kept_rows {
            Some(lists) => lists[id.index()].clone(),
            None => (0..m.rows() as u32).collect(),
        };
        masks.push(StructuredMask::new(
            m.rows(),
            m.cols(),
            partitions.get(id),
            rows,
            kept_cols[id.index()].clone(),
        )?);
    }
    let masks: [StructuredMask; 6] = masks.try_into().expect("six matrices");
    Ok(GruMasks { masks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use bsp_core::task::SyntheticTask;

    fn tiny_setup() -> (GruParams, Dataset) {
        let task = SyntheticTask::new(5, 4, 2, 0.2, 3);
        let data = task.sample(24, "train");
        let params = GruParams::init_uniform(4, 8, 2, 3);
        (params, data)
    }

    #[test]
    fn noop_rates_equal_plain_retrain() {
        let (params, data) = tiny_setup();
        let cfg = PruneConfig {
            admm_epochs: 3,
            retrain_epochs: 4,
            ..Default::default()
        };
        let parts = GruPartitions::uniform(BlockPartition::new(2, 2).unwrap());
        let outcome = bsp_prune(
            &params,
            &parts,
            PruneRates::new(1.0, 1.0).unwrap(),
            &cfg,
            &data,
        )
        .unwrap();
        assert!(outcome.masks.to_weight_mask().is_all_true());
        assert_eq!(outcome.report.overall_rate, 1.0);

        let plain = train(&params, &data, &cfg.retrain_options(), None).unwrap();
        assert_eq!(outcome.params, plain.params);
    }

    #[test]
    fn masks_are_respected_and_structured() {
        let (params, data) = tiny_setup();
        let cfg = PruneConfig {
            admm_epochs: 2,
            retrain_epochs: 2,
            ..Default::default()
        };
        let parts = GruPartitions::uniform(BlockPartition::new(2, 2).unwrap());
        let outcome = bsp_prune(
            &params,
            &parts,
            PruneRates::new(2.0, 2.0).unwrap(),
            &cfg,
            &data,
        )
        .unwrap();
        assert!(outcome.masks.to_weight_mask().respects(&outcome.params));
        for id in MatrixId::ALL {
            let mask = outcome.masks.get(id);
            // Row budget: 8 rows at rate 2 -> 4 kept.
            assert_eq!(mask.kept_rows().len(), 4);
            // Column budget met per (strip, block).
            for strip_cols in mask.kept_cols() {
                for (ids, block) in strip_cols.iter().zip(
                    parts
                        .get(id)
                        .blocks(params.matrix(id).cols()),
                ) {
                    assert_eq!(ids.len(), block.len().div_ceil(2));
                }
            }
        }
    }

    #[test]
    fn zero_admm_epochs_is_one_shot_projection() {
        let (params, data) = tiny_setup();
        let cfg = PruneConfig {
            admm_epochs: 0,
            retrain_epochs: 0,
            ..Default::default()
        };
        let parts = GruPartitions::uniform(BlockPartition::new(1, 1).unwrap());
        let outcome = bsp_prune(
            &params,
            &parts,
            PruneRates::new(2.0, 1.0).unwrap(),
            &cfg,
            &data,
        )
        .unwrap();
        // With no gradient epochs the surviving values are the originals.
        for id in MatrixId::ALL {
            let (orig, pruned) = (params.matrix(id), outcome.params.matrix(id));
            for r in 0..orig.rows() {
                for c in 0..orig.cols() {
                    if outcome.masks.get(id).contains(r, c) {
                        assert_eq!(pruned.get(r, c), orig.get(r, c));
                    } else {
                        assert_eq!(pruned.get(r, c), 0.0);
                    }
                }
            }
        }
    }

    #[test]
    fn infeasible_rate_is_rejected() {
        let (params, data) = tiny_setup();
        let parts = GruPartitions::uniform(BlockPartition::new(1, 1).unwrap());
        let err = bsp_prune(
            &params,
            &parts,
            PruneRates::new(0.5, 1.0).unwrap_or(PruneRates {
                col_rate: 0.5,
                row_rate: 1.0,
            }),
            &PruneConfig::default(),
            &data,
        );
        assert!(err.is_err());
    }

    #[test]
    fn compression_rate_ten_on_divisible_shape() {
        // Synthetic shape where every budget divides exactly: rate 10/1.
        let params = GruParams::init_uniform(20, 10, 2, 9);
        let task = SyntheticTask::new(3, 20, 2, 0.1, 9);
        let data = task.sample(4, "train");
        let cfg = PruneConfig {
            admm_epochs: 0,
            retrain_epochs: 0,
            ..Default::default()
        };
        let parts = GruPartitions::uniform(BlockPartition::new(1, 1).unwrap());
        let outcome = bsp_prune(
            &params,
            &parts,
            PruneRates::new(10.0, 1.0).unwrap(),
            &cfg,
            &data,
        )
        .unwrap();
        assert_eq!(outcome.report.overall_rate, 10.0);
    }
}
