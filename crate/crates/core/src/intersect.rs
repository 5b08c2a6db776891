//! Intersection of `k` linear and `p` affine hyperplanes of an inner-product
//! space, solved coordinate-free through Hodge-star formulas: a homogeneous
//! basis built from a completed frame, plus a particular solution assembled
//! from starred wedge products of the normals. Covers every limit case
//! (`k = 0`, `p` in `{0, 1}`, `k + p` in `{n-1, n}`) through one entry point.

use std::fmt;

use crate::error::{Error, Result};
use crate::exterior::{hodge_star, inner_product, norm, Metric, Multivector};
use crate::linalg::{check_independent, singular_value_extremes, stack_rows};

pub use crate::linalg::RANK_TOLERANCE;

/// Wedge-norm floor used by the greedy frame completion: a candidate basis
/// vector is accepted iff the wedge of the accumulated set keeps a norm above
/// this factor times the product of the member norms.
const COMPLETION_TOLERANCE: f64 = 1e-10;

/// Residual ceiling for the internal self-check of the particular solution.
/// Violations indicate a defect in the star formulas, not bad input.
const SELF_CHECK_TOLERANCE: f64 = 1e-6;

/// A mixed system `<u, v_i> = 0` (i = 1..k), `<u, w_j> = lambda_j` (j = 1..p)
/// over `R^n` with an SPD metric supplying the inner product.
///
/// Construction validates that `k + p <= n` and that the combined normals are
/// linearly independent under [`RANK_TOLERANCE`].
#[derive(Clone, Debug)]
pub struct HyperplaneSystem {
    metric: Metric,
    homogeneous_normals: Vec<Multivector>,
    affine_normals: Vec<Multivector>,
    offsets: Vec<f64>,
}

impl HyperplaneSystem {
    pub fn new(
        metric: Metric,
        homogeneous_normals: Vec<Multivector>,
        affine_normals: Vec<Multivector>,
        offsets: Vec<f64>,
    ) -> Result<Self> {
        let n = metric.dim();
        if offsets.len() != affine_normals.len() {
            return Err(Error::Precondition(format!(
                "{} offsets supplied for {} affine normals",
                offsets.len(),
                affine_normals.len()
            )));
        }
        let k = homogeneous_normals.len();
        let p = affine_normals.len();
        if k + p > n {
            return Err(Error::Precondition(format!(
                "k + p = {} exceeds the ambient dimension {n}",
                k + p
            )));
        }
        let all: Vec<Multivector> = affine_normals
            .iter()
            .chain(homogeneous_normals.iter())
            .cloned()
            .collect();
        check_independent(&stack_rows(n, &all)?)?;
        Ok(HyperplaneSystem {
            metric,
            homogeneous_normals,
            affine_normals,
            offsets,
        })
    }

    pub fn dim(&self) -> usize {
        self.metric.dim()
    }

    /// Number of homogeneous constraints.
    pub fn k(&self) -> usize {
        self.homogeneous_normals.len()
    }

    /// Number of affine constraints.
    pub fn p(&self) -> usize {
        self.affine_normals.len()
    }

    pub fn metric(&self) -> &Metric {
        &self.metric
    }

    pub fn homogeneous_normals(&self) -> &[Multivector] {
        &self.homogeneous_normals
    }

    pub fn affine_normals(&self) -> &[Multivector] {
        &self.affine_normals
    }

    pub fn offsets(&self) -> &[f64] {
        &self.offsets
    }

    /// All normals in the wedge order used by the star formulas:
    /// affine first, then homogeneous.
    fn combined_normals(&self) -> Vec<Multivector> {
        self.affine_normals
            .iter()
            .chain(self.homogeneous_normals.iter())
            .cloned()
            .collect()
    }
}

/// The solution set of a [`HyperplaneSystem`]: a particular solution (absent
/// when the system is purely linear) plus a basis of the homogeneous
/// direction space.
#[derive(Clone, Debug)]
pub struct AffineSolution {
    pub particular: Option<Multivector>,
    pub basis: Vec<Multivector>,
}

/// Completes an independent set to a basis of `R^n` with standard basis
/// vectors, scanning `e_1, e_2, ...` greedily in index order and keeping a
/// candidate iff the wedge of the accumulated set stays above the
/// completion tolerance. Deterministic.
pub fn complete_to_basis(dim: usize, vectors: &[Multivector]) -> Result<Vec<Multivector>> {
    check_independent(&stack_rows(dim, vectors)?)?;
    let euclid = Metric::identity(dim);
    let mut norm_product: f64 = 1.0;
    for v in vectors {
        norm_product *= norm(v, &euclid)?;
    }
    let mut wedge_acc = Multivector::wedge_all(dim, vectors)?;
    let mut completion = Vec::new();
    for i in 0..dim {
        if vectors.len() + completion.len() == dim {
            break;
        }
        let candidate = Multivector::basis_vector(dim, i)?;
        let extended = wedge_acc.wedge(&candidate)?;
        if norm(&extended, &euclid)? > COMPLETION_TOLERANCE * norm_product {
            wedge_acc = extended;
            completion.push(candidate);
        }
    }
    if vectors.len() + completion.len() != dim {
        return Err(Error::Internal(
            "greedy completion failed on an independent set".into(),
        ));
    }
    Ok(completion)
}

/// Basis of the solution space of `<u, v_i> = 0` using an explicit frame
/// completion `omega`: the vectors `u_a = *(wedge of omega without omega_a ^
/// wedge of normals)` for each completion index `a`.
///
/// The span does not depend on the choice of completion, only the individual
/// basis vectors do.
pub fn homogeneous_basis_with(
    normals: &[Multivector],
    completion: &[Multivector],
    g: &Metric,
) -> Result<Vec<Multivector>> {
    let n = g.dim();
    if normals.len() + completion.len() != n {
        return Err(Error::Precondition(format!(
            "{} normals and {} completion vectors do not form a frame in dimension {n}",
            normals.len(),
            completion.len()
        )));
    }
    let union: Vec<Multivector> = completion.iter().chain(normals.iter()).cloned().collect();
    check_independent(&stack_rows(n, &union)?)?;

    let normal_wedge = Multivector::wedge_all(n, normals)?;
    let mut basis = Vec::with_capacity(completion.len());
    for skip in 0..completion.len() {
        let mut partial = Multivector::scalar(n, 1.0);
        for (i, omega) in completion.iter().enumerate() {
            if i != skip {
                partial = partial.wedge(omega)?;
            }
        }
        basis.push(hodge_star(&partial.wedge(&normal_wedge)?, g)?);
    }
    Ok(basis)
}

/// Basis of the `(n-k)`-dimensional solution space of `<u, v_i> = 0` for
/// independent normals `v_1..v_k`, using the deterministic greedy completion.
///
/// `k = n` yields the empty basis (only `u = 0` solves the system) and
/// `k = n-1` the single vector `*(v_1 ^ ... ^ v_{n-1})`.
pub fn homogeneous_basis(normals: &[Multivector], g: &Metric) -> Result<Vec<Multivector>> {
    let completion = complete_to_basis(g.dim(), normals)?;
    homogeneous_basis_with(normals, &completion, g)
}

/// The particular solution `u_0` of a mixed system with `p >= 1` affine
/// constraints:
///
/// ```text
/// u_0 = |W ^ V|^{-2} * sum_i (-1)^(n-i) lambda_i * Theta_i
/// Theta_i = *[ (wedge of w_j, j != i) ^ (wedge of v_l) ^ *(W ^ V) ]
/// ```
///
/// where `W ^ V` is the wedge of all affine then all homogeneous normals.
/// The result lies in the span of the normals and satisfies every equation;
/// both facts are re-checked internally before returning.
pub fn particular_solution(sys: &HyperplaneSystem) -> Result<Multivector> {
    let n = sys.dim();
    let p = sys.p();
    if p == 0 {
        return Err(Error::Precondition(
            "the system has no affine constraints; use homogeneous_basis".into(),
        ));
    }
    let g = sys.metric();
    let big_wedge = Multivector::wedge_all(n, &sys.combined_normals())?;
    let denom = inner_product(&big_wedge, &big_wedge, g)?;
    if denom <= 0.0 {
        return Err(Error::Internal(
            "normal wedge has nonpositive squared norm".into(),
        ));
    }
    let star_big = hodge_star(&big_wedge, g)?;

    let mut u0 = Multivector::zero(n);
    for i in 0..p {
        let mut factors: Vec<Multivector> = Vec::with_capacity(sys.k() + p);
        for (j, w) in sys.affine_normals().iter().enumerate() {
            if j != i {
                factors.push(w.clone());
            }
        }
        factors.extend_from_slice(sys.homogeneous_normals());
        factors.push(star_big.clone());
        let theta = hodge_star(&Multivector::wedge_all(n, &factors)?, g)?;
        // The sign (-1)^(n-i) counts the affine constraints 1-based.
        let sign = if (n - (i + 1)).is_multiple_of(2) {
            1.0
        } else {
            -1.0
        };
        u0 = &u0 + &(&theta * (sign * sys.offsets()[i] / denom));
    }

    self_check_particular(sys, &u0)?;
    Ok(u0)
}

fn self_check_particular(sys: &HyperplaneSystem, u0: &Multivector) -> Result<()> {
    let g = sys.metric();
    let u0_norm = norm(u0, g)?;
    for v in sys.homogeneous_normals() {
        let residual = inner_product(u0, v, g)?.abs();
        let scale = (u0_norm * norm(v, g)?).max(1.0);
        if residual > SELF_CHECK_TOLERANCE * scale {
            return Err(Error::Internal(format!(
                "particular solution violates a homogeneous constraint (residual {residual:.3e})"
            )));
        }
    }
    for (w, &lambda) in sys.affine_normals().iter().zip(sys.offsets()) {
        let residual = (inner_product(u0, w, g)? - lambda).abs();
        let scale = (u0_norm * norm(w, g)?).max(lambda.abs()).max(1.0);
        if residual > SELF_CHECK_TOLERANCE * scale {
            return Err(Error::Internal(format!(
                "particular solution violates an affine constraint (residual {residual:.3e})"
            )));
        }
    }
    Ok(())
}

/// Full solution of the intersection problem: particular solution (for
/// `p >= 1`) plus the homogeneous basis of all `k + p` normals. The basis is
/// empty when `k + p = n` (unique solution) and a single starred wedge when
/// `k + p = n - 1`.
pub fn solve_intersection(sys: &HyperplaneSystem) -> Result<AffineSolution> {
    let particular = if sys.p() > 0 {
        Some(particular_solution(sys)?)
    } else {
        None
    };
    let basis = homogeneous_basis(&sys.combined_normals(), sys.metric())?;
    Ok(AffineSolution { particular, basis })
}

/// Residual report for a claimed [`AffineSolution`].
#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub tol: f64,
    /// `|<u0, v_i>|` per homogeneous constraint (empty without a particular).
    pub homogeneous_residuals: Vec<f64>,
    /// `|<u0, w_j> - lambda_j|` per affine constraint.
    pub affine_residuals: Vec<f64>,
    /// Smallest and largest singular value of the stacked basis, `None` when
    /// the basis is empty (independence holds vacuously).
    pub basis_singular_values: Option<(f64, f64)>,
    /// `max |<u_a, normal>|` over basis vectors and all normals.
    pub basis_annihilation: f64,
    /// `max |<u0, u_a>|` over the homogeneous basis.
    pub particular_orthogonality: f64,
    pub passed: bool,
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "residual report (tolerance {:e}):", self.tol)?;
        for (i, r) in self.homogeneous_residuals.iter().enumerate() {
            writeln!(f, "  |<u0, v{}>|            = {r:.3e}", i + 1)?;
        }
        for (j, r) in self.affine_residuals.iter().enumerate() {
            writeln!(f, "  |<u0, w{}> - lambda{}|  = {r:.3e}", j + 1, j + 1)?;
        }
        match self.basis_singular_values {
            Some((min, max)) => writeln!(f, "  basis singular values  in [{min:.3e}, {max:.3e}]")?,
            None => writeln!(f, "  basis empty: unique solution")?,
        }
        writeln!(
            f,
            "  max |<u_a, normal>|    = {:.3e}",
            self.basis_annihilation
        )?;
        writeln!(
            f,
            "  max |<u0, u_a>|        = {:.3e}",
            self.particular_orthogonality
        )?;
        write!(
            f,
            "  verdict: {}",
            if self.passed { "PASS" } else { "FAIL" }
        )
    }
}

/// Checks an [`AffineSolution`] against its system: per-equation residuals of
/// the particular solution, independence of the basis, annihilation of every
/// normal by every basis vector, and orthogonality of the particular solution
/// to the basis. Affine residuals pass at `tol * max(1, |lambda_j|)`; the
/// other residuals at `tol` times their natural norm scale.
pub fn verify_solution(
    sys: &HyperplaneSystem,
    sol: &AffineSolution,
    tol: f64,
) -> Result<VerifyReport> {
    let g = sys.metric();
    let n = sys.dim();
    for b in &sol.basis {
        if b.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: b.dim(),
            });
        }
    }
    let normals = sys.combined_normals();
    let mut passed = true;

    let mut homogeneous_residuals = Vec::new();
    let mut affine_residuals = Vec::new();
    let mut particular_orthogonality: f64 = 0.0;
    if let Some(u0) = &sol.particular {
        if u0.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: u0.dim(),
            });
        }
        let u0_norm = norm(u0, g)?;
        for v in sys.homogeneous_normals() {
            let r = inner_product(u0, v, g)?.abs();
            passed &= r <= tol * (u0_norm * norm(v, g)?).max(1.0);
            homogeneous_residuals.push(r);
        }
        for (w, &lambda) in sys.affine_normals().iter().zip(sys.offsets()) {
            let r = (inner_product(u0, w, g)? - lambda).abs();
            passed &= r <= tol * lambda.abs().max(1.0);
            affine_residuals.push(r);
        }
        for u_a in &sol.basis {
            let r = inner_product(u0, u_a, g)?.abs();
            passed &= r <= tol * (u0_norm * norm(u_a, g)?).max(1.0);
            particular_orthogonality = particular_orthogonality.max(r);
        }
    }

    let basis_singular_values = if sol.basis.is_empty() {
        None
    } else {
        let (min, max) = singular_value_extremes(&stack_rows(n, &sol.basis)?);
        passed &= min > RANK_TOLERANCE * max;
        Some((min, max))
    };

    let mut basis_annihilation: f64 = 0.0;
    for u_a in &sol.basis {
        let ua_norm = norm(u_a, g)?;
        for normal in &normals {
            let r = inner_product(u_a, normal, g)?.abs();
            passed &= r <= tol * (ua_norm * norm(normal, g)?).max(1.0);
            basis_annihilation = basis_annihilation.max(r);
        }
    }

    Ok(VerifyReport {
        tol,
        homogeneous_residuals,
        affine_residuals,
        basis_singular_values,
        basis_annihilation,
        particular_orthogonality,
        passed,
    })
}
