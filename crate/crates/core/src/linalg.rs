//! Small shared helpers around nalgebra for rank checks and span handling.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::exterior::Multivector;

/// Relative rank tolerance: a vector set counts as linearly independent iff
/// the smallest singular value of the stacked coordinate matrix exceeds this
/// factor times the largest.
pub const RANK_TOLERANCE: f64 = 1e-10;

/// Stacks grade-1 multivectors as the rows of a coordinate matrix.
pub(crate) fn stack_rows(dim: usize, vectors: &[Multivector]) -> Result<DMatrix<f64>> {
    let mut m = DMatrix::zeros(vectors.len(), dim);
    for (r, v) in vectors.iter().enumerate() {
        if v.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: v.dim(),
            });
        }
        for (c, x) in v.try_to_vector()?.into_iter().enumerate() {
            m[(r, c)] = x;
        }
    }
    Ok(m)
}

/// Smallest and largest singular values of a matrix (0, 0 for empty input).
pub(crate) fn singular_value_extremes(m: &DMatrix<f64>) -> (f64, f64) {
    if m.nrows() == 0 || m.ncols() == 0 {
        return (0.0, 0.0);
    }
    let svals = m.clone().svd(false, false).singular_values;
    (svals.min(), svals.max())
}

/// Checks linear independence of stacked rows under [`RANK_TOLERANCE`].
/// The empty set is independent.
pub(crate) fn check_independent(m: &DMatrix<f64>) -> Result<()> {
    if m.nrows() == 0 {
        return Ok(());
    }
    let (min, max) = singular_value_extremes(m);
    if min <= RANK_TOLERANCE * max {
        Err(Error::RankDeficient {
            sigma_min: min,
            sigma_max: max,
        })
    } else {
        Ok(())
    }
}
