//! Synthesis and audit of dynamical systems with prescribed invariants: given
//! scalar fields `I_1..I_k` to conserve and `D_1..D_p` to dissipate at rates
//! `h_1..h_p`, the synthesized vector field is the affine-distribution
//! solution `X_0 + sum_a c_a * generator_a (+ base)` built on the Riemannian
//! gradients of the prescribed quantities. A fixed-step RK4 harness
//! integrates the field and an audit measures conservation drift and the
//! dissipation budget `D_j(t) - D_j(0) - integral of h_j` along the orbit.

use std::fmt;

use crate::error::{Error, Result};
use crate::exterior::Multivector;
use crate::linalg::{singular_value_extremes, stack_rows, RANK_TOLERANCE};
use crate::riemann::{generator_set, MetricField, ScalarField, VectorFieldHandle};

/// A complete problem statement: what to conserve and dissipate, on which
/// metric chart, plus the integration window. Constructed through
/// [`Scenario::new`], which validates shapes and checks that the constraint
/// gradients are independent at the initial point.
#[derive(Clone, Debug)]
pub struct Scenario {
    metric: MetricField,
    conserved: Vec<ScalarField>,
    dissipated: Vec<ScalarField>,
    rates: Vec<ScalarField>,
    base_field: Option<VectorFieldHandle>,
    direction_coeffs: Option<Vec<ScalarField>>,
    x0: Vec<f64>,
    dt: f64,
    steps: usize,
}

impl Scenario {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        metric: MetricField,
        conserved: Vec<ScalarField>,
        dissipated: Vec<ScalarField>,
        rates: Vec<ScalarField>,
        x0: Vec<f64>,
        dt: f64,
        steps: usize,
    ) -> Result<Self> {
        let n = metric.dim();
        if x0.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: x0.len(),
            });
        }
        for field in conserved.iter().chain(&dissipated).chain(&rates) {
            if field.dim() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: field.dim(),
                });
            }
        }
        if rates.len() != dissipated.len() {
            return Err(Error::Precondition(format!(
                "{} rates supplied for {} dissipated quantities",
                rates.len(),
                dissipated.len()
            )));
        }
        let constrained = conserved.len() + dissipated.len();
        if constrained == 0 || constrained > n {
            return Err(Error::Precondition(format!(
                "k + p = {constrained} must lie in 1..={n}"
            )));
        }
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::Precondition(format!("step size {dt} must be > 0")));
        }
        if steps == 0 {
            return Err(Error::Precondition("step count must be >= 1".into()));
        }
        let scenario = Scenario {
            metric,
            conserved,
            dissipated,
            rates,
            base_field: None,
            direction_coeffs: None,
            x0,
            dt,
            steps,
        };
        scenario.check_gradient_independence(&scenario.x0.clone())?;
        Ok(scenario)
    }

    /// Adds the base field of the perturbation construction; the audited
    /// system becomes `x' = base(x) + X_0(x) + ...`.
    pub fn with_base_field(mut self, base: VectorFieldHandle) -> Result<Self> {
        if base.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: base.dim(),
            });
        }
        self.base_field = Some(base);
        Ok(self)
    }

    /// Adds coefficient fields multiplying the homogeneous generators; there
    /// must be exactly `n - (k+p)` of them. Without this the synthesized
    /// field is exactly the particular part `X_0`.
    pub fn with_direction_coeffs(mut self, coeffs: Vec<ScalarField>) -> Result<Self> {
        let expected = self.dim() - (self.k() + self.p());
        if coeffs.len() != expected {
            return Err(Error::Precondition(format!(
                "{} direction coefficients supplied, {expected} generators exist",
                coeffs.len()
            )));
        }
        for c in &coeffs {
            if c.dim() != self.dim() {
                return Err(Error::DimensionMismatch {
                    expected: self.dim(),
                    got: c.dim(),
                });
            }
        }
        self.direction_coeffs = Some(coeffs);
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.metric.dim()
    }

    /// Number of conserved quantities.
    pub fn k(&self) -> usize {
        self.conserved.len()
    }

    /// Number of dissipated quantities.
    pub fn p(&self) -> usize {
        self.dissipated.len()
    }

    pub fn metric(&self) -> &MetricField {
        &self.metric
    }

    pub fn conserved(&self) -> &[ScalarField] {
        &self.conserved
    }

    pub fn dissipated(&self) -> &[ScalarField] {
        &self.dissipated
    }

    pub fn rates(&self) -> &[ScalarField] {
        &self.rates
    }

    pub fn base_field(&self) -> Option<&VectorFieldHandle> {
        self.base_field.as_ref()
    }

    pub fn direction_coeffs(&self) -> Option<&[ScalarField]> {
        self.direction_coeffs.as_deref()
    }

    pub fn x0(&self) -> &[f64] {
        &self.x0
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    /// Riemannian gradient handles of the conserved quantities.
    pub fn conserved_gradients(&self) -> Vec<VectorFieldHandle> {
        self.conserved
            .iter()
            .map(|f| f.riemannian_gradient_field(&self.metric))
            .collect()
    }

    /// Riemannian gradient handles of the dissipated quantities.
    pub fn dissipated_gradients(&self) -> Vec<VectorFieldHandle> {
        self.dissipated
            .iter()
            .map(|f| f.riemannian_gradient_field(&self.metric))
            .collect()
    }

    fn check_gradient_independence(&self, x: &[f64]) -> Result<()> {
        let mut values = Vec::new();
        for handle in self
            .conserved_gradients()
            .iter()
            .chain(self.dissipated_gradients().iter())
        {
            values.push(Multivector::from_vector(&handle.evaluate(x)?));
        }
        let (sigma_min, sigma_max) = singular_value_extremes(&stack_rows(self.dim(), &values)?);
        if sigma_min <= RANK_TOLERANCE * sigma_max {
            return Err(Error::RankDeficientAt {
                point: x.to_vec(),
                sigma_min,
            });
        }
        Ok(())
    }

    /// Synthesizes the scenario field and integrates it over the configured
    /// window, recording the scalar samples along the orbit.
    pub fn integrate(&self) -> Result<Trajectory> {
        let field = synthesize(self)?;
        let mut trajectory = integrate(&field, &self.x0, self.dt, self.steps)?;
        trajectory.sample_scalars(self)?;
        Ok(trajectory)
    }
}

/// The synthesized field `x -> X_0(x) + sum_a c_a(x) generator_a(x) +
/// base(x)`. With no base field and no direction coefficients this is
/// exactly the particular field `X_0` (the zero field when `p = 0`).
///
/// The generator frame completion is frozen at the scenario's initial point;
/// constraint-gradient independence is re-checked at every evaluation point
/// and failures name the point.
pub fn synthesize(scenario: &Scenario) -> Result<VectorFieldHandle> {
    let n = scenario.dim();
    let x_fields = scenario.conserved_gradients();
    let y_fields = scenario.dissipated_gradients();
    let set = generator_set(
        &x_fields,
        &y_fields,
        scenario.rates(),
        scenario.metric(),
        &[scenario.x0().to_vec()],
    )?;

    let particular = set.particular;
    let coeffs = scenario.direction_coeffs().map(<[ScalarField]>::to_vec);
    let generators = if coeffs.is_some() {
        set.generators
    } else {
        vec![]
    };
    let base = scenario.base_field().cloned();
    let probe = scenario.clone();

    Ok(VectorFieldHandle::from_fn(n, move |x| {
        // Functional independence is certified only at visited points.
        probe.check_gradient_independence(x)?;
        let mut out = vec![0.0; n];
        if let Some(x0_field) = &particular {
            for (o, v) in out.iter_mut().zip(x0_field.evaluate(x)?) {
                *o += v;
            }
        }
        if let Some(coeffs) = &coeffs {
            for (c, generator) in coeffs.iter().zip(generators.iter()) {
                let weight = c.eval(x)?;
                for (o, v) in out.iter_mut().zip(generator.evaluate(x)?) {
                    *o += weight * v;
                }
            }
        }
        if let Some(base) = &base {
            for (o, v) in out.iter_mut().zip(base.evaluate(x)?) {
                *o += v;
            }
        }
        Ok(out)
    }))
}

/// The perturbed field `x -> base(x) + X_0(x)`. When the base field conserves
/// every `I_i` and `D_j`, the sum conserves the `I_i` and dissipates the
/// `D_j` at the prescribed rates; that claim is audited along trajectories,
/// never assumed.
pub fn perturb(base: &VectorFieldHandle, scenario: &Scenario) -> Result<VectorFieldHandle> {
    if base.dim() != scenario.dim() {
        return Err(Error::DimensionMismatch {
            expected: scenario.dim(),
            got: base.dim(),
        });
    }
    let mut bare = scenario.clone();
    bare.base_field = Some(base.clone());
    bare.direction_coeffs = None;
    synthesize(&bare)
}

/// An integrated orbit plus scalar samples recorded along it. The sample
/// blocks are filled by [`Scenario::integrate`] / [`Trajectory::sample_scalars`]
/// and hold one series per conserved, dissipated, and rate field.
#[derive(Clone, Debug, Default)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    pub conserved_samples: Vec<Vec<f64>>,
    pub dissipated_samples: Vec<Vec<f64>>,
    pub rate_samples: Vec<Vec<f64>>,
}

impl Trajectory {
    pub fn new(times: Vec<f64>, states: Vec<Vec<f64>>) -> Self {
        Trajectory {
            times,
            states,
            ..Default::default()
        }
    }

    /// Number of recorded states (`steps + 1` for a complete run).
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// Evaluates the scenario scalars at every recorded state.
    pub fn sample_scalars(&mut self, scenario: &Scenario) -> Result<()> {
        let series = |fields: &[ScalarField]| -> Result<Vec<Vec<f64>>> {
            fields
                .iter()
                .map(|f| self.states.iter().map(|x| f.eval(x)).collect())
                .collect()
        };
        self.conserved_samples = series(scenario.conserved())?;
        self.dissipated_samples = series(scenario.dissipated())?;
        self.rate_samples = series(scenario.rates())?;
        Ok(())
    }
}

/// Classical fixed-step RK4. States are recorded at every step including
/// `t = 0`; a non-finite state aborts with the offending step index.
pub fn integrate(
    field: &VectorFieldHandle,
    x0: &[f64],
    dt: f64,
    steps: usize,
) -> Result<Trajectory> {
    let (trajectory, diverged) = integrate_partial(field, x0, dt, steps)?;
    match diverged {
        Some(step) => Err(Error::Diverged { step }),
        None => Ok(trajectory),
    }
}

/// Like [`integrate`] but reports divergence alongside the partial orbit
/// instead of discarding it (the CLI writes the partial trajectory out).
pub fn integrate_partial(
    field: &VectorFieldHandle,
    x0: &[f64],
    dt: f64,
    steps: usize,
) -> Result<(Trajectory, Option<usize>)> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::Precondition(format!("step size {dt} must be > 0")));
    }
    if steps == 0 {
        return Err(Error::Precondition("step count must be >= 1".into()));
    }
    let n = field.dim();
    if x0.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: x0.len(),
        });
    }

    let shifted = |x: &[f64], k: &[f64], scale: f64| -> Vec<f64> {
        x.iter().zip(k).map(|(xi, ki)| xi + scale * ki).collect()
    };

    let mut times = Vec::with_capacity(steps + 1);
    let mut states = Vec::with_capacity(steps + 1);
    times.push(0.0);
    states.push(x0.to_vec());

    for step in 0..steps {
        let x = states.last().expect("at least the initial state");
        let k1 = field.evaluate(x)?;
        let k2 = field.evaluate(&shifted(x, &k1, dt / 2.0))?;
        let k3 = field.evaluate(&shifted(x, &k2, dt / 2.0))?;
        let k4 = field.evaluate(&shifted(x, &k3, dt))?;
        let next: Vec<f64> = (0..n)
            .map(|i| x[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
            .collect();
        if !next.iter().all(|c| c.is_finite()) {
            return Ok((Trajectory::new(times, states), Some(step)));
        }
        times.push((step + 1) as f64 * dt);
        states.push(next);
    }
    Ok((Trajectory::new(times, states), None))
}

/// Conservation and dissipation audit of a trajectory.
#[derive(Clone, Debug)]
pub struct DriftReport {
    /// Per conserved field: `max_t |I_i(x(t)) - I_i(x(0))|`.
    pub conserved_drift: Vec<f64>,
    /// Per dissipated field: `max_t |D_j(x(t)) - D_j(x(0)) - F_j(t)|` where
    /// `F_j` is the running Simpson integral of the sampled rate.
    pub dissipation_residual: Vec<f64>,
}

impl DriftReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.conserved_drift
            .iter()
            .chain(&self.dissipation_residual)
            .all(|&r| r <= tol)
    }
}

impl fmt::Display for DriftReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, d) in self.conserved_drift.iter().enumerate() {
            writeln!(f, "I_{} drift           = {d:.6e}", i + 1)?;
        }
        for (j, r) in self.dissipation_residual.iter().enumerate() {
            writeln!(f, "D_{} budget residual = {r:.6e}", j + 1)?;
        }
        Ok(())
    }
}

/// Running integral of uniformly sampled values: composite Simpson panels,
/// with one trapezoid panel for a trailing odd interval.
fn cumulative_integral(values: &[f64], dt: f64) -> Vec<f64> {
    let mut out = vec![0.0; values.len()];
    for m in 1..values.len() {
        if m % 2 == 0 {
            out[m] = out[m - 2] + dt / 3.0 * (values[m - 2] + 4.0 * values[m - 1] + values[m]);
        } else {
            out[m] = out[m - 1] + dt / 2.0 * (values[m - 1] + values[m]);
        }
    }
    out
}

/// Audits conservation drift and dissipation budgets along a trajectory. The
/// scalars are recomputed from the recorded states, so a trajectory loaded
/// from disk is audited against what its states actually do.
pub fn audit(trajectory: &Trajectory, scenario: &Scenario) -> Result<DriftReport> {
    if trajectory.is_empty() {
        return Err(Error::Precondition("trajectory has no states".into()));
    }
    let dt = scenario.dt();

    let mut conserved_drift = Vec::with_capacity(scenario.k());
    for field in scenario.conserved() {
        let reference = field.eval(&trajectory.states[0])?;
        let mut drift: f64 = 0.0;
        for state in &trajectory.states {
            drift = drift.max((field.eval(state)? - reference).abs());
        }
        conserved_drift.push(drift);
    }

    let mut dissipation_residual = Vec::with_capacity(scenario.p());
    for (field, rate) in scenario.dissipated().iter().zip(scenario.rates()) {
        let reference = field.eval(&trajectory.states[0])?;
        let rate_samples: Vec<f64> = trajectory
            .states
            .iter()
            .map(|x| rate.eval(x))
            .collect::<Result<_>>()?;
        let budget = cumulative_integral(&rate_samples, dt);
        let mut residual: f64 = 0.0;
        for (state, integral) in trajectory.states.iter().zip(&budget) {
            residual = residual.max((field.eval(state)? - reference - integral).abs());
        }
        dissipation_residual.push(residual);
    }

    Ok(DriftReport {
        conserved_drift,
        dissipation_residual,
    })
}
