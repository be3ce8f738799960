//! Pruning report: per-matrix survival counts and the overall outcome.

use bsp_core::gru::MatrixId;

use crate::compression::format_rate;

#[derive(Debug, Clone, PartialEq)]
pub struct MatrixReport {
    pub matrix: MatrixId,
    pub rows: usize,
    pub cols: usize,
    pub nnz: usize,
    /// rows*cols / nnz for this matrix.
    pub rate: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PruneReport {
    pub per_matrix: Vec<MatrixReport>,
    /// Total prunable parameters / total survivors.
    pub overall_rate: f64,
    pub accuracy_before: f64,
    pub accuracy_after: f64,
}

impl PruneReport {
    /// CSV with header `matrix,rows,cols,nnz,rate`; rates at three
    /// significant figures.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("matrix,rows,cols,nnz,rate\n");
        for m in &self.per_matrix {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                m.matrix.label(),
                m.rows,
                m.cols,
                m.nnz,
                format_rate(m.rate)
            ));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_header_and_rows() {
        let report = PruneReport {
            per_matrix: vec![MatrixReport {
                matrix: MatrixId::Wz,
                rows: 4,
                cols: 16,
                nnz: 2,
                rate: 32.0,
            }],
            overall_rate: 32.0,
            accuracy_before: 1.0,
            accuracy_after: 0.99,
        };
        let csv = report.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("matrix,rows,cols,nnz,rate"));
        assert_eq!(lines.next(), Some("wz,4,16,2,32"));
        assert_eq!(lines.next(), None);
    }
}
