//! Shared helpers for the integration suites: seeded random inputs and
//! span-comparison oracles independent of the library's solution path.

use nalgebra::DMatrix;
use rand::rngs::StdRng;
use rand::Rng;

use starflow::{BladeIndex, Metric, Multivector};

pub fn random_spd_metric(rng: &mut StdRng, n: usize) -> Metric {
    let a = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
    let g = &a * a.transpose() + DMatrix::identity(n, n) * (0.5 + rng.random_range(0.0..0.5));
    Metric::new(g).unwrap()
}

pub fn random_homogeneous(rng: &mut StdRng, n: usize, grade: usize) -> Multivector {
    let mut mv = Multivector::zero(n);
    for blade in BladeIndex::all_of_grade(n, grade) {
        mv.set(blade, rng.random_range(-1.0..1.0));
    }
    mv
}

/// Well-conditioned random vectors: resample until the condition number of
/// the stacked set stays below 1e3.
pub fn random_vectors(rng: &mut StdRng, n: usize, count: usize) -> Vec<Multivector> {
    loop {
        let candidates: Vec<Multivector> = (0..count)
            .map(|_| {
                Multivector::from_vector(
                    &(0..n)
                        .map(|_| rng.random_range(-1.0..1.0))
                        .collect::<Vec<f64>>(),
                )
            })
            .collect();
        if count == 0 {
            return candidates;
        }
        let (min, max) = singular_extremes(&stack(n, &candidates));
        if min > 1e-3 * max {
            return candidates;
        }
    }
}

pub fn stack(n: usize, vectors: &[Multivector]) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(vectors.len(), n);
    for (r, v) in vectors.iter().enumerate() {
        for (c, x) in v.try_to_vector().unwrap().into_iter().enumerate() {
            m[(r, c)] = x;
        }
    }
    m
}

pub fn singular_extremes(m: &DMatrix<f64>) -> (f64, f64) {
    if m.nrows() == 0 {
        return (0.0, 0.0);
    }
    let svals = m.clone().svd(false, false).singular_values;
    (svals.min(), svals.max())
}

/// sin of the largest principal angle between two spans of equal dimension:
/// the worst projection residual of one normalized basis against the
/// orthonormalized other.
pub fn span_angle_sin(a: &[Multivector], b: &[Multivector]) -> f64 {
    assert_eq!(a.len(), b.len(), "span dimensions differ");
    if a.is_empty() {
        return 0.0;
    }
    let n = a[0].dim();
    let q = stack(n, a).transpose().qr().q();
    let mut worst: f64 = 0.0;
    for v in b {
        let x = nalgebra::DVector::from_vec(v.try_to_vector().unwrap());
        let x = &x / x.norm();
        let projected = &q * (q.transpose() * &x);
        worst = worst.max((&x - projected).norm());
    }
    worst
}

/// Euclidean nullspace of the constraint matrix whose rows are `G v` for
/// each normal `v`, computed through the eigen-decomposition of `A^T A`
/// (the SVD right-singular-vector route), independent of the star formulas.
pub fn nullspace_oracle(metric: &Metric, normals: &[Multivector]) -> Vec<Multivector> {
    let n = metric.dim();
    let mut a = DMatrix::zeros(normals.len(), n);
    for (r, v) in normals.iter().enumerate() {
        let coords = v.try_to_vector().unwrap();
        for c in 0..n {
            let mut acc = 0.0;
            for (j, x) in coords.iter().enumerate() {
                acc += metric.matrix()[(c, j)] * x;
            }
            a[(r, c)] = acc;
        }
    }
    let eigen = (a.transpose() * &a).symmetric_eigen();
    // The nullity is known exactly: independent constraints cut one
    // dimension each. Take the eigenvectors of the smallest eigenvalues and
    // require a clean gap to the first nonzero one.
    let nullity = n - normals.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        eigen.eigenvalues[i]
            .partial_cmp(&eigen.eigenvalues[j])
            .unwrap()
    });
    if nullity > 0 && nullity < n {
        let last_zero = eigen.eigenvalues[order[nullity - 1]];
        let first_nonzero = eigen.eigenvalues[order[nullity]];
        assert!(
            last_zero < 1e-12 * first_nonzero.max(1.0),
            "no clean spectral gap at the expected nullity"
        );
    }
    order[..nullity]
        .iter()
        .map(|&i| Multivector::from_vector(eigen.eigenvectors.column(i).as_slice()))
        .collect()
}
