use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::exterior::blade::check_dim;

/// Relative eigenvalue floor for accepting a metric as positive-definite.
const SPD_TOLERANCE: f64 = 1e-12;

/// Symmetric positive-definite bilinear form on `R^n`.
///
/// Validated on construction: the matrix must be exactly symmetric as stored
/// and its smallest eigenvalue must exceed `1e-12` times the largest.
#[derive(Clone, Debug, PartialEq)]
pub struct Metric {
    matrix: DMatrix<f64>,
    det: f64,
}

impl Metric {
    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::InvalidMetric(format!(
                "matrix is {}x{}, not square",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let n = matrix.nrows();
        check_dim(n)?;
        for i in 0..n {
            for j in (i + 1)..n {
                if matrix[(i, j)] != matrix[(j, i)] {
                    return Err(Error::InvalidMetric(format!(
                        "entry ({i},{j}) = {} differs from ({j},{i}) = {}",
                        matrix[(i, j)],
                        matrix[(j, i)]
                    )));
                }
            }
        }
        let eigenvalues = matrix.clone().symmetric_eigen().eigenvalues;
        let min = eigenvalues.min();
        let max = eigenvalues.max();
        if !(min > SPD_TOLERANCE * max && max > 0.0) {
            return Err(Error::InvalidMetric(format!(
                "eigenvalues span [{min:.6e}, {max:.6e}]"
            )));
        }
        let det = eigenvalues.iter().product();
        Ok(Metric { matrix, det })
    }

    pub fn identity(dim: usize) -> Self {
        Metric::new(DMatrix::identity(dim, dim)).expect("identity metric is SPD")
    }

    pub fn from_diagonal(diagonal: &[f64]) -> Result<Self> {
        Metric::new(DMatrix::from_diagonal(&nalgebra::DVector::from_row_slice(
            diagonal,
        )))
    }

    /// Builds a metric from row vectors, e.g. as parsed from a config file.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidMetric(
                "rows do not form a square matrix".into(),
            ));
        }
        Metric::new(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    /// Determinant, precomputed from the eigenvalues (always positive).
    pub fn det(&self) -> f64 {
        self.det
    }

    /// The bilinear form `u^T G v` on coordinate vectors.
    pub fn dot(&self, u: &[f64], v: &[f64]) -> f64 {
        assert_eq!(u.len(), self.dim(), "dimension mismatch");
        assert_eq!(v.len(), self.dim(), "dimension mismatch");
        let mut acc = 0.0;
        for (i, ui) in u.iter().enumerate() {
            for (j, vj) in v.iter().enumerate() {
                acc += ui * self.matrix[(i, j)] * vj;
            }
        }
        acc
    }

    /// Solves `G x = rhs` (Cholesky; the metric is SPD by construction).
    pub fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        let chol = self
            .matrix
            .clone()
            .cholesky()
            .ok_or_else(|| Error::Internal("Cholesky failed on a validated metric".into()))?;
        let x = chol.solve(&nalgebra::DVector::from_row_slice(rhs));
        Ok(x.as_slice().to_vec())
    }
}
