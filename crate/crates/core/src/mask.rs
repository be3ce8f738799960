//! Boolean masks over the six gate matrices, used for mask-respecting
//! retraining: masked entries are forced back to zero after every update.

use crate::error::CoreError;
use crate::gru::{GruParams, MatrixId};

/// One boolean grid per prunable matrix; `true` means the weight survives.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightMask {
    grids: [Vec<bool>; 6],
    shapes: [(usize, usize); 6],
}

impl WeightMask {
    pub fn all_true(params: &GruParams) -> Self {
        let mut grids: [Vec<bool>; 6] = Default::default();
        let mut shapes = [(0usize, 0usize); 6];
        for id in MatrixId::ALL {
            let m = params.matrix(id);
            grids[id.index()] = vec![true; m.rows() * m.cols()];
            shapes[id.index()] = (m.rows(), m.cols());
        }
        WeightMask { grids, shapes }
    }

    pub fn from_grids(grids: [Vec<bool>; 6], shapes: [(usize, usize); 6]) -> Result<Self, CoreError> {
        for (grid, (r, c)) in grids.iter().zip(&shapes) {
            if grid.len() != r * c {
                return Err(CoreError::DimMismatch {
                    expected: r * c,
                    got: grid.len(),
                    context: "WeightMask grid length",
                });
            }
        }
        Ok(WeightMask { grids, shapes })
    }

    pub fn grid(&self, id: MatrixId) -> &[bool] {
        &self.grids[id.index()]
    }

    pub fn shape(&self, id: MatrixId) -> (usize, usize) {
        self.shapes[id.index()]
    }

    pub fn conforms(&self, params: &GruParams) -> bool {
        MatrixId::ALL.iter().all(|id| {
            let m = params.matrix(*id);
            self.shapes[id.index()] == (m.rows(), m.cols())
        })
    }

    pub fn is_all_true(&self) -> bool {
        self.grids.iter().all(|g| g.iter().all(|b| *b))
    }

    /// Number of surviving weights across the six matrices.
    pub fn nnz(&self) -> usize {
        self.grids
            .iter()
            .map(|g| g.iter().filter(|b| **b).count())
            .sum()
    }

    /// Zeroes every masked entry of the six gate matrices in place.
    pub fn apply(&self, params: &mut GruParams) {
        for id in MatrixId::ALL {
            let grid = &self.grids[id.index()];
            let m = params.matrix_mut(id);
            for (v, keep) in m.values_mut().iter_mut().zip(grid) {
                if !keep {
                    *v = 0.0;
                }
            }
        }
    }

    /// True when every nonzero of each gate matrix sits on a surviving cell.
    pub fn respects(&self, params: &GruParams) -> bool {
        MatrixId::ALL.iter().all(|id| {
            let grid = &self.grids[id.index()];
            params
                .matrix(*id)
                .values()
                .iter()
                .zip(grid)
                .all(|(v, keep)| *keep || *v == 0.0)
        })
    }
}

/// Convenience for tests and pruning code: build a mask from per-matrix
/// closures over (row, col).
pub fn mask_from_fn(params: &GruParams, f: impl Fn(MatrixId, usize, usize) -> bool) -> WeightMask {
    let mut grids: [Vec<bool>; 6] = Default::default();
    let mut shapes = [(0usize, 0usize); 6];
    for id in MatrixId::ALL {
        let m = params.matrix(id);
        let mut grid = Vec::with_capacity(m.rows() * m.cols());
        for r in 0..m.rows() {
            for c in 0..m.cols() {
                grid.push(f(id, r, c));
            }
        }
        grids[id.index()] = grid;
        shapes[id.index()] = (m.rows(), m.cols());
    }
    WeightMask { grids, shapes }
}

impl std::ops::Index<MatrixId> for WeightMask {
    type Output = [bool];
    fn index(&self, id: MatrixId) -> &[bool] {
        &self.grids[id.index()]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn apply_zeroes_masked_entries() {
        let mut params = GruParams::init_uniform(2, 3, 2, 5);
        let mask = mask_from_fn(&params, |_, r, _| r != 1);
        mask.apply(&mut params);
        for id in MatrixId::ALL {
            let m = params.matrix(id);
            for c in 0..m.cols() {
                assert_eq!(m.get(1, c), 0.0);
            }
        }
        assert!(mask.respects(&params));
    }

    #[test]
    fn all_true_mask_is_noop() {
        let mut params = GruParams::init_uniform(2, 3, 2, 5);
        let before = params.clone();
        WeightMask::all_true(&params).apply(&mut params);
        assert_eq!(params, before);
    }
}
