use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::exterior::blade::BladeIndex;
use crate::exterior::metric::Metric;
use crate::exterior::multivector::Multivector;

fn check_metric_dim(a: &Multivector, g: &Metric) -> Result<()> {
    if a.dim() != g.dim() {
        return Err(Error::DimensionMismatch {
            expected: g.dim(),
            got: a.dim(),
        });
    }
    Ok(())
}

/// `<e_I, e_J>_p = det [ G_{i_r, j_s} ]`, the Gram determinant of the blade
/// factors under the metric. Grade 0 pairs to 1.
fn blade_inner(i: BladeIndex, j: BladeIndex, g: &Metric) -> f64 {
    let p = i.grade();
    debug_assert_eq!(p, j.grade());
    if p == 0 {
        return 1.0;
    }
    let rows: Vec<usize> = i.indices().collect();
    let cols: Vec<usize> = j.indices().collect();
    let sub = DMatrix::from_fn(p, p, |r, c| g.matrix()[(rows[r], cols[c])]);
    sub.determinant()
}

/// Inner product on the exterior power `Λ^p`: the bilinear extension of the
/// Gram-determinant pairing on decomposables. Both arguments must be
/// homogeneous of the same grade (zero elements pair with anything).
pub fn inner_product(a: &Multivector, b: &Multivector, g: &Metric) -> Result<f64> {
    check_metric_dim(a, g)?;
    check_metric_dim(b, g)?;
    if a.is_zero() || b.is_zero() {
        // Still reject mixed-grade operands.
        if a.grade().is_none() && !a.is_zero() || b.grade().is_none() && !b.is_zero() {
            return Err(Error::NotHomogeneous);
        }
        return Ok(0.0);
    }
    let pa = a.grade().ok_or(Error::NotHomogeneous)?;
    let pb = b.grade().ok_or(Error::NotHomogeneous)?;
    if pa != pb {
        return Err(Error::GradeMismatch(pa, pb));
    }
    let mut acc = 0.0;
    for (ia, ca) in a.terms() {
        for (ib, cb) in b.terms() {
            acc += ca * cb * blade_inner(ia, ib, g);
        }
    }
    Ok(acc)
}

/// Matrix of pairwise metric inner products of an ordered set of vectors.
pub fn gram_matrix(vectors: &[Multivector], g: &Metric) -> Result<DMatrix<f64>> {
    let coords: Vec<Vec<f64>> = vectors
        .iter()
        .map(|v| {
            check_metric_dim(v, g)?;
            v.try_to_vector()
        })
        .collect::<Result<_>>()?;
    let m = coords.len();
    Ok(DMatrix::from_fn(m, m, |i, j| g.dot(&coords[i], &coords[j])))
}

/// Norm induced by [`inner_product`]; on decomposables this is the square
/// root of the Gram determinant of the factors.
pub fn norm(a: &Multivector, g: &Metric) -> Result<f64> {
    // Guard against tiny negative round-off in the quadratic form.
    Ok(inner_product(a, a, g)?.max(0.0).sqrt())
}

/// The unit-norm top-grade element `mu = c * e_1 ^ ... ^ e_n` with `c > 0`,
/// fixing the orientation positively on the standard basis.
pub fn volume_form(g: &Metric) -> Multivector {
    let n = g.dim();
    let mut mu = Multivector::zero(n);
    mu.set(BladeIndex::top(n), 1.0 / g.det().sqrt());
    mu
}

/// Hodge star of a homogeneous grade-`p` element: the unique `(n-p)`-vector
/// satisfying `<*a, w>_{n-p} mu = a ^ w` for every `w` in `Λ^{n-p}`.
///
/// Computed by assembling the Gram matrix of the standard `Λ^{n-p}` blade
/// basis under the induced inner product and solving one SPD linear system,
/// which keeps the defining relation exact for arbitrary SPD metrics.
pub fn hodge_star(a: &Multivector, g: &Metric) -> Result<Multivector> {
    check_metric_dim(a, g)?;
    let n = g.dim();
    if a.is_zero() {
        return Ok(Multivector::zero(n));
    }
    let p = a.grade().ok_or(Error::NotHomogeneous)?;
    let q = n - p;
    let basis = BladeIndex::all_of_grade(n, q);
    let m = basis.len();
    let gram = DMatrix::from_fn(m, m, |i, j| blade_inner(basis[i], basis[j], g));

    // a ^ e_J = s_J * (e_1 ^ ... ^ e_n); the defining relation then reads
    // <*a, e_J> / sqrt(det G) = s_J.
    let sqrt_det = g.det().sqrt();
    let top = BladeIndex::top(n);
    let mut rhs = DVector::zeros(m);
    for (j, &blade) in basis.iter().enumerate() {
        let mut unit = Multivector::zero(n);
        unit.set(blade, 1.0);
        rhs[j] = a.wedge(&unit)?.get(top) * sqrt_det;
    }

    let solution = gram
        .cholesky()
        .ok_or_else(|| {
            Error::Internal("singular Gram system in Hodge star (metric should be SPD)".into())
        })?
        .solve(&rhs);

    let mut out = Multivector::zero(n);
    for (j, &blade) in basis.iter().enumerate() {
        out.set(blade, solution[j]);
    }
    Ok(out)
}
