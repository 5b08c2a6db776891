//! The pointwise intersection solver lifted to charts: a "manifold" here is an
//! open region of `R^n` carrying a (possibly position-dependent) SPD metric.
//! Scalar fields are polynomials with exact gradients; vector fields are
//! evaluation handles. Local generators of the affine distribution
//! `{X : g(X, X_i) = 0, g(X, Y_j) = h_j}` are built per point from the star
//! formulas, with a frame completion frozen across a caller-supplied sample
//! of the region.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exterior::{hodge_star, norm, Metric, Multivector};
use crate::intersect::{particular_solution, solve_intersection, HyperplaneSystem};
use crate::linalg::{singular_value_extremes, stack_rows};

/// Wedge-norm floor for certifying a frame completion across a sample,
/// matching the pointwise completion rule.
const COMPLETION_TOLERANCE: f64 = 1e-10;

/// Exact polynomial function of `n` variables: a sum of terms
/// `coeff * x_1^{e_1} * ... * x_n^{e_n}`. Evaluation and differentiation are
/// exact term-by-term operations.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalarField {
    dim: usize,
    terms: Vec<(f64, Vec<u32>)>,
}

impl ScalarField {
    pub fn new(dim: usize, terms: Vec<(f64, Vec<u32>)>) -> Result<Self> {
        for (_, exponents) in &terms {
            if exponents.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: exponents.len(),
                });
            }
        }
        Ok(ScalarField { dim, terms })
    }

    /// The constant polynomial.
    pub fn constant(dim: usize, value: f64) -> Self {
        let terms = if value == 0.0 {
            vec![]
        } else {
            vec![(value, vec![0; dim])]
        };
        ScalarField { dim, terms }
    }

    pub fn zero(dim: usize) -> Self {
        Self::constant(dim, 0.0)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &[(f64, Vec<u32>)] {
        &self.terms
    }

    fn check_point(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: x.len(),
            });
        }
        Ok(())
    }

    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        self.check_point(x)?;
        let mut acc = 0.0;
        for (coeff, exponents) in &self.terms {
            let mut term = *coeff;
            for (xi, &e) in x.iter().zip(exponents) {
                term *= xi.powi(e as i32);
            }
            acc += term;
        }
        Ok(acc)
    }

    /// Euclidean gradient, exact: component `i` is the term-by-term
    /// derivative with respect to `x_i`.
    pub fn gradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_point(x)?;
        let mut grad = vec![0.0; self.dim];
        for (coeff, exponents) in &self.terms {
            for i in 0..self.dim {
                let e = exponents[i];
                if e == 0 {
                    continue;
                }
                let mut term = coeff * f64::from(e) * x[i].powi(e as i32 - 1);
                for (j, (xj, &ej)) in x.iter().zip(exponents).enumerate() {
                    if j != i {
                        term *= xj.powi(ej as i32);
                    }
                }
                grad[i] += term;
            }
        }
        Ok(grad)
    }

    /// Handle evaluating the Riemannian gradient of this field under `g`.
    pub fn riemannian_gradient_field(&self, g: &MetricField) -> VectorFieldHandle {
        assert_eq!(self.dim, g.dim(), "dimension mismatch");
        let field = self.clone();
        let metric = g.clone();
        VectorFieldHandle::from_fn(self.dim, move |x| riemannian_gradient(&field, x, &metric))
    }
}

type MetricFn = Arc<dyn Fn(&[f64]) -> Result<Metric> + Send + Sync>;
type FieldFn = Arc<dyn Fn(&[f64]) -> Result<Vec<f64>> + Send + Sync>;

/// SPD metric attached to every point of a chart, either one constant matrix
/// or a callable `x -> Metric`.
#[derive(Clone)]
pub struct MetricField {
    dim: usize,
    kind: MetricFieldKind,
}

#[derive(Clone)]
enum MetricFieldKind {
    Constant(Metric),
    Callable(MetricFn),
}

impl MetricField {
    pub fn constant(metric: Metric) -> Self {
        MetricField {
            dim: metric.dim(),
            kind: MetricFieldKind::Constant(metric),
        }
    }

    pub fn from_fn<F>(dim: usize, f: F) -> Self
    where
        F: Fn(&[f64]) -> Result<Metric> + Send + Sync + 'static,
    {
        MetricField {
            dim,
            kind: MetricFieldKind::Callable(Arc::new(f)),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The metric at a point. Callable metrics are revalidated per query
    /// (their closure constructs a checked [`Metric`]).
    pub fn at(&self, x: &[f64]) -> Result<Metric> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: x.len(),
            });
        }
        let metric = match &self.kind {
            MetricFieldKind::Constant(m) => m.clone(),
            MetricFieldKind::Callable(f) => f(x)?,
        };
        if metric.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: metric.dim(),
            });
        }
        Ok(metric)
    }
}

impl fmt::Debug for MetricField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            MetricFieldKind::Constant(m) => write!(f, "MetricField::Constant({m:?})"),
            MetricFieldKind::Callable(_) => write!(f, "MetricField::Callable(dim {})", self.dim),
        }
    }
}

/// Evaluation handle for a vector field on a chart: `position -> vector`.
#[derive(Clone)]
pub struct VectorFieldHandle {
    dim: usize,
    eval: FieldFn,
}

impl VectorFieldHandle {
    pub fn from_fn<F>(dim: usize, f: F) -> Self
    where
        F: Fn(&[f64]) -> Result<Vec<f64>> + Send + Sync + 'static,
    {
        VectorFieldHandle {
            dim,
            eval: Arc::new(f),
        }
    }

    pub fn constant(values: Vec<f64>) -> Self {
        let dim = values.len();
        Self::from_fn(dim, move |_| Ok(values.clone()))
    }

    pub fn zero(dim: usize) -> Self {
        Self::from_fn(dim, move |_| Ok(vec![0.0; dim]))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn evaluate(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: x.len(),
            });
        }
        let out = (self.eval)(x)?;
        if out.len() != self.dim {
            return Err(Error::Internal(format!(
                "vector field returned {} components in dimension {}",
                out.len(),
                self.dim
            )));
        }
        Ok(out)
    }
}

impl fmt::Debug for VectorFieldHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VectorFieldHandle(dim {})", self.dim)
    }
}

/// Local generators of the affine distribution: the particular field `X_0`
/// (absent when there are no affine constraints) plus `n - (k+p)` direction
/// fields.
#[derive(Clone, Debug)]
pub struct GeneratorSet {
    pub particular: Option<VectorFieldHandle>,
    pub generators: Vec<VectorFieldHandle>,
}

/// Gradient with respect to the metric: solves `G(x) grad = d f(x)`, so that
/// `g(out, u) = df(u)` for every direction `u`.
pub fn riemannian_gradient(f: &ScalarField, x: &[f64], g: &MetricField) -> Result<Vec<f64>> {
    if f.dim() != g.dim() {
        return Err(Error::DimensionMismatch {
            expected: g.dim(),
            got: f.dim(),
        });
    }
    let metric = g.at(x)?;
    metric.solve(&f.gradient(x)?)
}

fn field_values_at(fields: &[VectorFieldHandle], x: &[f64]) -> Result<Vec<Multivector>> {
    fields
        .iter()
        .map(|f| Ok(Multivector::from_vector(&f.evaluate(x)?)))
        .collect()
}

/// Builds the pointwise hyperplane system `g(u, X_i(x)) = 0`,
/// `g(u, Y_j(x)) = h_j(x)`; rank failures are reported with the point.
fn system_at(
    x: &[f64],
    x_fields: &[VectorFieldHandle],
    y_fields: &[VectorFieldHandle],
    h_fields: &[ScalarField],
    g: &MetricField,
) -> Result<HyperplaneSystem> {
    let metric = g.at(x)?;
    let v = field_values_at(x_fields, x)?;
    let w = field_values_at(y_fields, x)?;
    let offsets = h_fields
        .iter()
        .map(|h| h.eval(x))
        .collect::<Result<Vec<f64>>>()?;
    HyperplaneSystem::new(metric, v, w, offsets).map_err(|e| match e {
        Error::RankDeficient { sigma_min, .. } => Error::RankDeficientAt {
            point: x.to_vec(),
            sigma_min,
        },
        other => other,
    })
}

/// Solves the constraint system at one point: the particular vector `X_0(x)`
/// (absent for `p = 0`) and a basis of solution directions there.
#[allow(clippy::type_complexity)]
pub fn pointwise_generators(
    x: &[f64],
    x_fields: &[VectorFieldHandle],
    y_fields: &[VectorFieldHandle],
    h_fields: &[ScalarField],
    g: &MetricField,
) -> Result<(Option<Vec<f64>>, Vec<Vec<f64>>)> {
    if h_fields.len() != y_fields.len() {
        return Err(Error::Precondition(format!(
            "{} rate fields supplied for {} affine constraint fields",
            h_fields.len(),
            y_fields.len()
        )));
    }
    let sys = system_at(x, x_fields, y_fields, h_fields, g)?;
    let sol = solve_intersection(&sys)?;
    let particular = sol.particular.map(|u| u.try_to_vector()).transpose()?;
    let directions = sol
        .basis
        .iter()
        .map(|b| b.try_to_vector())
        .collect::<Result<_>>()?;
    Ok((particular, directions))
}

/// Finds one set of constant standard-basis fields `Z_i` completing the
/// constraint fields to a frame at *every* sample point, scanning basis
/// indices greedily. When no single completion certifies across the whole
/// sample the region is too large and must be shrunk by the caller.
pub fn frame_completion_field(
    x_fields: &[VectorFieldHandle],
    y_fields: &[VectorFieldHandle],
    region_sample: &[Vec<f64>],
) -> Result<Vec<VectorFieldHandle>> {
    let first = region_sample.first().ok_or_else(|| {
        Error::Precondition("region sample must contain at least one point".into())
    })?;
    let n = first.len();
    let needed = n
        .checked_sub(x_fields.len() + y_fields.len())
        .ok_or_else(|| {
            Error::Precondition("more constraint fields than ambient dimensions".into())
        })?;

    // Constraint values, rank-checked per point, plus the running wedge of
    // the accepted frame at each point.
    let euclid = Metric::identity(n);
    let mut wedges = Vec::with_capacity(region_sample.len());
    let mut norm_products = Vec::with_capacity(region_sample.len());
    for point in region_sample {
        if point.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: point.len(),
            });
        }
        let mut values = field_values_at(y_fields, point)?;
        values.extend(field_values_at(x_fields, point)?);
        let (sigma_min, sigma_max) = singular_value_extremes(&stack_rows(n, &values)?);
        if !values.is_empty() && sigma_min <= crate::linalg::RANK_TOLERANCE * sigma_max {
            return Err(Error::RankDeficientAt {
                point: point.clone(),
                sigma_min,
            });
        }
        let mut product = 1.0;
        for v in &values {
            product *= norm(v, &euclid)?;
        }
        norm_products.push(product);
        wedges.push(Multivector::wedge_all(n, &values)?);
    }

    let mut completion = Vec::with_capacity(needed);
    let mut last_failure: Option<Vec<f64>> = None;
    for index in 0..n {
        if completion.len() == needed {
            break;
        }
        let candidate = Multivector::basis_vector(n, index)?;
        let mut extended = Vec::with_capacity(wedges.len());
        let mut ok = true;
        for (w, (point, product)) in wedges.iter().zip(region_sample.iter().zip(&norm_products)) {
            let grown = w.wedge(&candidate)?;
            if norm(&grown, &euclid)? <= COMPLETION_TOLERANCE * product {
                last_failure = Some(point.clone());
                ok = false;
                break;
            }
            extended.push(grown);
        }
        if ok {
            wedges = extended;
            completion.push(candidate.try_to_vector()?);
        }
    }

    if completion.len() != needed {
        return Err(Error::RegionTooLarge {
            point: last_failure.unwrap_or_else(|| first.clone()),
        });
    }
    Ok(completion
        .into_iter()
        .map(VectorFieldHandle::constant)
        .collect())
}

/// Local generator set of the affine distribution cut out by the constraint
/// fields: the particular field `x -> X_0(x)` plus the direction fields
/// `x -> *(Z_1 ^ .. skip a .. ^ Z_m ^ Y_1 ^ .. ^ Y_p ^ X_1 ^ .. ^ X_k)(x)`
/// with the completion `Z` frozen across `region_sample`.
///
/// `k + p = n - 1` needs no completion (the single generator is
/// `*(Y ^ X)`), and `k + p = n` yields no generators at all.
pub fn generator_set(
    x_fields: &[VectorFieldHandle],
    y_fields: &[VectorFieldHandle],
    h_fields: &[ScalarField],
    g: &MetricField,
    region_sample: &[Vec<f64>],
) -> Result<GeneratorSet> {
    if h_fields.len() != y_fields.len() {
        return Err(Error::Precondition(format!(
            "{} rate fields supplied for {} affine constraint fields",
            h_fields.len(),
            y_fields.len()
        )));
    }
    let n = g.dim();
    let k = x_fields.len();
    let p = y_fields.len();
    if k + p > n {
        return Err(Error::Precondition(format!(
            "k + p = {} exceeds the ambient dimension {n}",
            k + p
        )));
    }
    let direction_count = n - (k + p);

    let completion: Vec<Vec<f64>> = if direction_count >= 2 {
        frame_completion_field(x_fields, y_fields, region_sample)?
            .iter()
            .map(|z| z.evaluate(&region_sample[0]))
            .collect::<Result<_>>()?
    } else {
        Vec::new()
    };

    let particular = if p > 0 {
        let (xf, yf, hf, gf) = (
            x_fields.to_vec(),
            y_fields.to_vec(),
            h_fields.to_vec(),
            g.clone(),
        );
        Some(VectorFieldHandle::from_fn(n, move |x| {
            let sys = system_at(x, &xf, &yf, &hf, &gf)?;
            particular_solution(&sys)?.try_to_vector()
        }))
    } else {
        None
    };

    let mut generators = Vec::with_capacity(direction_count);
    for skip in 0..direction_count {
        let (xf, yf, gf) = (x_fields.to_vec(), y_fields.to_vec(), g.clone());
        let frozen = completion.clone();
        generators.push(VectorFieldHandle::from_fn(n, move |x| {
            let mut factors: Vec<Multivector> = Vec::new();
            for (i, z) in frozen.iter().enumerate() {
                if i != skip {
                    factors.push(Multivector::from_vector(z));
                }
            }
            factors.extend(field_values_at(&yf, x)?);
            factors.extend(field_values_at(&xf, x)?);
            let wedge = Multivector::wedge_all(x.len(), &factors)?;
            hodge_star(&wedge, &gf.at(x)?)?.try_to_vector()
        }));
    }

    Ok(GeneratorSet {
        particular,
        generators,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::inner_product;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn sphere_field(dim: usize) -> ScalarField {
        // sum of squares: x_1^2 + ... + x_n^2
        let terms = (0..dim)
            .map(|i| {
                let mut e = vec![0u32; dim];
                e[i] = 2;
                (1.0, e)
            })
            .collect();
        ScalarField::new(dim, terms).unwrap()
    }

    fn random_polynomial(rng: &mut StdRng, dim: usize, max_degree: u32) -> ScalarField {
        let terms = (0..6)
            .map(|_| {
                let mut exponents = vec![0u32; dim];
                let mut budget = max_degree;
                for e in exponents.iter_mut() {
                    let step = rng.random_range(0..=budget);
                    *e = step;
                    budget -= step;
                }
                (rng.random_range(-2.0..2.0), exponents)
            })
            .collect();
        ScalarField::new(dim, terms).unwrap()
    }

    fn finite_difference_gradient(f: &ScalarField, x: &[f64]) -> Vec<f64> {
        let mut grad = vec![0.0; x.len()];
        for i in 0..x.len() {
            let h = 1e-6 * x[i].abs().max(1.0);
            let mut hi = x.to_vec();
            let mut lo = x.to_vec();
            hi[i] += h;
            lo[i] -= h;
            grad[i] = (f.eval(&hi).unwrap() - f.eval(&lo).unwrap()) / (2.0 * h);
        }
        grad
    }

    #[test]
    fn eval_examples() {
        let f = sphere_field(2);
        assert_eq!(f.eval(&[3.0, 4.0]).unwrap(), 25.0);
        assert_eq!(ScalarField::zero(3).eval(&[1.0, 2.0, 3.0]).unwrap(), 0.0);
        let g = ScalarField::new(2, vec![(2.0, vec![1, 3])]).unwrap();
        assert_eq!(g.eval(&[1.0, 2.0]).unwrap(), 16.0);
    }

    #[test]
    fn gradient_examples() {
        let f = ScalarField::new(1, vec![(1.0, vec![2])]).unwrap();
        assert_eq!(f.gradient(&[3.0]).unwrap(), vec![6.0]);

        let f = ScalarField::new(2, vec![(1.0, vec![1, 1])]).unwrap();
        assert_eq!(f.gradient(&[2.5, -4.0]).unwrap(), vec![-4.0, 2.5]);
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let mut rng = StdRng::seed_from_u64(31);
        for _ in 0..30 {
            let dim = rng.random_range(1..=5);
            let f = random_polynomial(&mut rng, dim, 3);
            let x: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect();
            let exact = f.gradient(&x).unwrap();
            let approx = finite_difference_gradient(&f, &x);
            for (a, b) in exact.iter().zip(&approx) {
                assert!((a - b).abs() <= 1e-6 * a.abs().max(b.abs()).max(1.0));
            }
        }
    }

    #[test]
    fn riemannian_gradient_examples() {
        let f = ScalarField::new(2, vec![(1.0, vec![1, 0]), (1.0, vec![0, 1])]).unwrap();
        let euclid = MetricField::constant(Metric::identity(2));
        assert_eq!(
            riemannian_gradient(&f, &[0.3, 0.7], &euclid).unwrap(),
            f.gradient(&[0.3, 0.7]).unwrap()
        );

        let g = MetricField::constant(Metric::from_diagonal(&[1.0, 2.0]).unwrap());
        let grad = riemannian_gradient(&f, &[0.0, 0.0], &g).unwrap();
        assert!((grad[0] - 1.0).abs() < 1e-14);
        assert!((grad[1] - 0.5).abs() < 1e-14);
    }

    #[test]
    fn riemannian_gradient_defining_property() {
        let mut rng = StdRng::seed_from_u64(37);
        for _ in 0..20 {
            let dim = rng.random_range(1..=5);
            let f = random_polynomial(&mut rng, dim, 3);
            let a = nalgebra::DMatrix::from_fn(dim, dim, |_, _| rng.random_range(-1.0..1.0));
            let spd = &a * a.transpose() + nalgebra::DMatrix::identity(dim, dim);
            let metric = Metric::new(spd).unwrap();
            let g = MetricField::constant(metric.clone());
            let x: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect();
            let grad = riemannian_gradient(&f, &x, &g).unwrap();
            let partials = f.gradient(&x).unwrap();
            for i in 0..dim {
                let mut e_i = vec![0.0; dim];
                e_i[i] = 1.0;
                let pairing = metric.dot(&grad, &e_i);
                assert!((pairing - partials[i]).abs() < 1e-10 * partials[i].abs().max(1.0));
            }
        }
    }

    #[test]
    fn pointwise_generators_constant_case() {
        let g = MetricField::constant(Metric::identity(3));
        let x_fields = [VectorFieldHandle::constant(vec![0.0, 0.0, 1.0])];
        let y_fields = [VectorFieldHandle::constant(vec![1.0, 0.0, 0.0])];
        let h_fields = [ScalarField::constant(3, 5.0)];
        let (particular, directions) =
            pointwise_generators(&[0.2, -0.4, 0.9], &x_fields, &y_fields, &h_fields, &g).unwrap();
        let x0 = particular.unwrap();
        assert!((x0[0] - 5.0).abs() < 1e-12);
        assert!(x0[1].abs() < 1e-12 && x0[2].abs() < 1e-12);
        assert_eq!(directions.len(), 1);
        assert!(directions[0][0].abs() < 1e-12 && directions[0][2].abs() < 1e-12);
        assert!(directions[0][1].abs() > 0.9);
    }

    #[test]
    fn pointwise_generators_dispatch_cases() {
        let g = MetricField::constant(Metric::identity(3));
        // p = 0: directions only.
        let x_fields = [VectorFieldHandle::constant(vec![1.0, 0.0, 0.0])];
        let (particular, directions) =
            pointwise_generators(&[0.0; 3], &x_fields, &[], &[], &g).unwrap();
        assert!(particular.is_none());
        assert_eq!(directions.len(), 2);

        // h = 0: the particular part vanishes.
        let y_fields = [VectorFieldHandle::constant(vec![0.0, 1.0, 0.0])];
        let h_fields = [ScalarField::zero(3)];
        let (particular, _) =
            pointwise_generators(&[0.0; 3], &x_fields, &y_fields, &h_fields, &g).unwrap();
        assert!(particular.unwrap().iter().all(|c| c.abs() < 1e-12));
    }

    #[test]
    fn completion_field_constant_matches_pointwise_completion() {
        let constants = [vec![1.0, 1.0, 0.0], vec![0.0, 1.0, 0.0]];
        let x_fields: Vec<VectorFieldHandle> = constants
            .iter()
            .map(|c| VectorFieldHandle::constant(c.clone()))
            .collect();
        let sample = vec![vec![0.0, 0.0, 0.0], vec![0.5, -0.2, 0.1]];
        let completion = frame_completion_field(&x_fields, &[], &sample).unwrap();
        let values: Vec<Vec<f64>> = completion
            .iter()
            .map(|z| z.evaluate(&sample[0]).unwrap())
            .collect();
        let pointwise = crate::intersect::complete_to_basis(
            3,
            &constants
                .iter()
                .map(|c| Multivector::from_vector(c))
                .collect::<Vec<_>>(),
        )
        .unwrap();
        let pointwise: Vec<Vec<f64>> = pointwise
            .iter()
            .map(|v| v.try_to_vector().unwrap())
            .collect();
        assert_eq!(values, pointwise);
        assert_eq!(values, vec![vec![0.0, 0.0, 1.0]]);
    }

    #[test]
    fn completion_field_respects_whole_sample() {
        // X1(x) = (1, 0, x1): parallel to e1 at the origin, so e1 is rejected
        // there and the uniform completion is {e2, e3}.
        let x1 = VectorFieldHandle::from_fn(3, |x| Ok(vec![1.0, 0.0, x[0]]));
        let sample = vec![
            vec![0.0, 0.0, 0.0],
            vec![0.05, 0.0, 0.0],
            vec![-0.08, 0.02, 0.01],
        ];
        let completion = frame_completion_field(&[x1], &[], &sample).unwrap();
        let values: Vec<Vec<f64>> = completion
            .iter()
            .map(|z| z.evaluate(&sample[0]).unwrap())
            .collect();
        assert_eq!(values, vec![vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]]);
    }

    #[test]
    fn completion_field_reports_rank_drop() {
        let x1 = VectorFieldHandle::from_fn(3, |x| Ok(vec![x[0], 0.0, 0.0]));
        let sample = vec![vec![0.5, 0.0, 0.0], vec![0.0, 0.0, 0.0]];
        match frame_completion_field(&[x1], &[], &sample) {
            Err(Error::RankDeficientAt { point, .. }) => assert_eq!(point, vec![0.0, 0.0, 0.0]),
            other => panic!("expected rank deficiency, got {other:?}"),
        }
    }

    #[test]
    fn generator_set_codimension_one() {
        // n = 3, X1 = e1, Y1 = e2, h = 1: the single generator is
        // *(e2 ^ e1) = -e3 and the particular field is e2.
        let g = MetricField::constant(Metric::identity(3));
        let x_fields = [VectorFieldHandle::constant(vec![1.0, 0.0, 0.0])];
        let y_fields = [VectorFieldHandle::constant(vec![0.0, 1.0, 0.0])];
        let h_fields = [ScalarField::constant(3, 1.0)];
        let sample = vec![vec![0.1, 0.2, 0.3]];
        let set = generator_set(&x_fields, &y_fields, &h_fields, &g, &sample).unwrap();
        assert_eq!(set.generators.len(), 1);
        let gen = set.generators[0].evaluate(&sample[0]).unwrap();
        assert!((gen[2] + 1.0).abs() < 1e-12 && gen[0].abs() < 1e-12 && gen[1].abs() < 1e-12);
        let x0 = set.particular.unwrap().evaluate(&sample[0]).unwrap();
        assert!((x0[1] - 1.0).abs() < 1e-12 && x0[0].abs() < 1e-12 && x0[2].abs() < 1e-12);
    }

    #[test]
    fn generator_set_full_codimension() {
        let g = MetricField::constant(Metric::identity(2));
        let x_fields = [VectorFieldHandle::constant(vec![1.0, 0.0])];
        let y_fields = [VectorFieldHandle::constant(vec![0.0, 1.0])];
        let h_fields = [ScalarField::constant(2, 2.0)];
        let set = generator_set(&x_fields, &y_fields, &h_fields, &g, &[vec![0.0, 0.0]]).unwrap();
        assert!(set.generators.is_empty());
        let x0 = set.particular.unwrap().evaluate(&[0.0, 0.0]).unwrap();
        assert!((x0[1] - 2.0).abs() < 1e-12 && x0[0].abs() < 1e-12);
    }

    #[test]
    fn generators_annihilate_constraints_on_sample() {
        let mut rng = StdRng::seed_from_u64(41);
        let n = 5;
        let metric = {
            let a = nalgebra::DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
            Metric::new(&a * a.transpose() + nalgebra::DMatrix::identity(n, n)).unwrap()
        };
        let g = MetricField::constant(metric.clone());
        let i1 = random_polynomial(&mut rng, n, 2);
        let d1 = sphere_field(n);
        let x_fields = [i1.riemannian_gradient_field(&g)];
        let y_fields = [d1.riemannian_gradient_field(&g)];
        let h_fields = [ScalarField::constant(n, -1.0)];
        let sample: Vec<Vec<f64>> = (0..4)
            .map(|_| (0..n).map(|_| rng.random_range(0.4..1.0)).collect())
            .collect();
        let set = generator_set(&x_fields, &y_fields, &h_fields, &g, &sample).unwrap();
        assert_eq!(set.generators.len(), n - 2);
        let x0 = set.particular.unwrap();
        for point in &sample {
            let metric_here = g.at(point).unwrap();
            let xv = x_fields[0].evaluate(point).unwrap();
            let yv = y_fields[0].evaluate(point).unwrap();
            let x0v = x0.evaluate(point).unwrap();
            assert!(metric_here.dot(&x0v, &xv).abs() < 1e-9);
            assert!((metric_here.dot(&x0v, &yv) + 1.0).abs() < 1e-9);
            let mut values = Vec::new();
            for gen in &set.generators {
                let gv = gen.evaluate(point).unwrap();
                assert!(metric_here.dot(&gv, &xv).abs() < 1e-9);
                assert!(metric_here.dot(&gv, &yv).abs() < 1e-9);
                values.push(Multivector::from_vector(&gv));
            }
            let (sigma_min, sigma_max) = singular_value_extremes(&stack_rows(n, &values).unwrap());
            assert!(sigma_min > 1e-8 * sigma_max);
        }
    }

    #[test]
    fn generator_span_is_completion_invariant() {
        let n = 4;
        let g = MetricField::constant(Metric::identity(n));
        let x1 = VectorFieldHandle::from_fn(n, |x| Ok(vec![1.0, x[0], 0.0, 0.2]));
        let sample = vec![vec![0.0; 4], vec![0.3, 0.1, -0.2, 0.4]];
        let set = generator_set(std::slice::from_ref(&x1), &[], &[], &g, &sample).unwrap();

        for point in &sample {
            let metric = g.at(point).unwrap();
            let normal = Multivector::from_vector(&x1.evaluate(point).unwrap());
            // Alternate completion: a manually chosen valid frame extension.
            let alternate = [
                Multivector::from_vector(&[0.0, 1.0, 0.3, 0.0]),
                Multivector::from_vector(&[0.0, 0.0, 1.0, -0.1]),
                Multivector::from_vector(&[0.1, 0.0, 0.0, 1.0]),
            ];
            let alt_basis = crate::intersect::homogeneous_basis_with(
                std::slice::from_ref(&normal),
                &alternate,
                &metric,
            )
            .unwrap();
            let greedy: Vec<Multivector> = set
                .generators
                .iter()
                .map(|gen| Multivector::from_vector(&gen.evaluate(point).unwrap()))
                .collect();
            // Same span: every alternate vector is g-orthogonal to the normal
            // and both sets have full rank n - 1 = 3.
            for v in alt_basis.iter().chain(greedy.iter()) {
                assert!(inner_product(v, &normal, &metric).unwrap().abs() < 1e-10);
            }
            let (min_a, max_a) = singular_value_extremes(&stack_rows(n, &greedy).unwrap());
            assert!(min_a > 1e-8 * max_a);
        }
    }
}
