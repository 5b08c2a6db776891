//! Python extension module exposing the main starflow types and operations:
//! multivectors with wedge/star/inner products, SPD metrics, polynomial
//! scalar fields, the hyperplane-intersection solver, and an end-to-end
//! scenario runner. Build with `cargo build -p starflow-py`; the smoke test
//! in `python/smoke_test.py` loads the resulting shared library directly.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use starflow as core;

fn to_py_err(e: core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Symmetric positive-definite metric on R^n.
#[pyclass(skip_from_py_object)]
#[derive(Clone)]
struct Metric {
    inner: core::Metric,
}

#[pymethods]
impl Metric {
    /// Builds a metric from matrix rows; must be square, symmetric, SPD.
    #[new]
    fn new(rows: Vec<Vec<f64>>) -> PyResult<Self> {
        Ok(Metric {
            inner: core::Metric::from_rows(&rows).map_err(to_py_err)?,
        })
    }

    #[staticmethod]
    fn identity(dim: usize) -> PyResult<Self> {
        if !(1..=16).contains(&dim) {
            return Err(PyValueError::new_err(format!(
                "dimension {dim} outside the supported range 1..=16"
            )));
        }
        Ok(Metric {
            inner: core::Metric::identity(dim),
        })
    }

    #[staticmethod]
    fn diagonal(entries: Vec<f64>) -> PyResult<Self> {
        Ok(Metric {
            inner: core::Metric::from_diagonal(&entries).map_err(to_py_err)?,
        })
    }

    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn det(&self) -> f64 {
        self.inner.det()
    }

    fn matrix(&self) -> Vec<Vec<f64>> {
        let m = self.inner.matrix();
        (0..m.nrows())
            .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
            .collect()
    }

    fn __repr__(&self) -> String {
        format!("Metric(dim={})", self.inner.dim())
    }
}

/// Element of the exterior algebra of R^n.
#[pyclass(skip_from_py_object)]
#[derive(Clone)]
struct Multivector {
    inner: core::Multivector,
}

#[pymethods]
impl Multivector {
    /// Grade-1 element from coordinates.
    #[staticmethod]
    fn vector(components: Vec<f64>) -> PyResult<Self> {
        if components.is_empty() || components.len() > 16 {
            return Err(PyValueError::new_err("component count must lie in 1..=16"));
        }
        Ok(Multivector {
            inner: core::Multivector::from_vector(&components),
        })
    }

    #[staticmethod]
    fn scalar(dim: usize, value: f64) -> PyResult<Self> {
        if !(1..=16).contains(&dim) {
            return Err(PyValueError::new_err("dimension must lie in 1..=16"));
        }
        Ok(Multivector {
            inner: core::Multivector::scalar(dim, value),
        })
    }

    /// Unit basis blade with the given strictly increasing 0-based indices.
    #[staticmethod]
    fn basis_blade(dim: usize, indices: Vec<usize>) -> PyResult<Self> {
        Ok(Multivector {
            inner: core::Multivector::basis_blade(dim, &indices).map_err(to_py_err)?,
        })
    }

    fn dim(&self) -> usize {
        self.inner.dim()
    }

    /// Common grade of the stored blades, or None when zero or mixed.
    fn grade(&self) -> Option<usize> {
        self.inner.grade()
    }

    /// `(indices, coefficient)` pairs in canonical blade order.
    fn terms(&self) -> Vec<(Vec<usize>, f64)> {
        self.inner
            .terms()
            .map(|(blade, c)| (blade.indices().collect(), c))
            .collect()
    }

    /// Coordinates of a grade-1 (or zero) element.
    fn to_vector(&self) -> PyResult<Vec<f64>> {
        self.inner.try_to_vector().map_err(to_py_err)
    }

    fn wedge(&self, other: &Multivector) -> PyResult<Self> {
        Ok(Multivector {
            inner: self.inner.wedge(&other.inner).map_err(to_py_err)?,
        })
    }

    fn inner_product(&self, other: &Multivector, metric: &Metric) -> PyResult<f64> {
        core::inner_product(&self.inner, &other.inner, &metric.inner).map_err(to_py_err)
    }

    fn norm(&self, metric: &Metric) -> PyResult<f64> {
        core::norm(&self.inner, &metric.inner).map_err(to_py_err)
    }

    fn hodge_star(&self, metric: &Metric) -> PyResult<Self> {
        Ok(Multivector {
            inner: core::hodge_star(&self.inner, &metric.inner).map_err(to_py_err)?,
        })
    }

    fn __add__(&self, other: &Multivector) -> PyResult<Self> {
        if self.inner.dim() != other.inner.dim() {
            return Err(PyValueError::new_err("dimension mismatch"));
        }
        Ok(Multivector {
            inner: &self.inner + &other.inner,
        })
    }

    fn __mul__(&self, scalar: f64) -> Self {
        Multivector {
            inner: &self.inner * scalar,
        }
    }

    fn __repr__(&self) -> String {
        format!("Multivector({})", self.inner)
    }
}

/// Polynomial in n variables given as (coefficient, exponent-vector) terms.
#[pyclass(skip_from_py_object)]
#[derive(Clone)]
struct ScalarField {
    inner: core::ScalarField,
}

#[pymethods]
impl ScalarField {
    #[new]
    fn new(dim: usize, terms: Vec<(f64, Vec<u32>)>) -> PyResult<Self> {
        Ok(ScalarField {
            inner: core::ScalarField::new(dim, terms).map_err(to_py_err)?,
        })
    }

    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn eval(&self, x: Vec<f64>) -> PyResult<f64> {
        self.inner.eval(&x).map_err(to_py_err)
    }

    fn gradient(&self, x: Vec<f64>) -> PyResult<Vec<f64>> {
        self.inner.gradient(&x).map_err(to_py_err)
    }

    fn riemannian_gradient(&self, x: Vec<f64>, metric: &Metric) -> PyResult<Vec<f64>> {
        let field = core::MetricField::constant(metric.inner.clone());
        core::riemannian_gradient(&self.inner, &x, &field).map_err(to_py_err)
    }
}

/// Unit-norm positively oriented volume form of the metric.
#[pyfunction]
fn volume_form(metric: &Metric) -> Multivector {
    Multivector {
        inner: core::volume_form(&metric.inner),
    }
}

/// Solves `<u, v_i> = 0`, `<u, w_j> = offsets_j` under the metric. Returns
/// the particular solution (None for a purely linear system) and a basis of
/// the homogeneous solution space.
#[pyfunction]
#[allow(clippy::type_complexity)]
fn solve_intersection(
    metric: &Metric,
    v: Vec<Vec<f64>>,
    w: Vec<Vec<f64>>,
    offsets: Vec<f64>,
) -> PyResult<(Option<Vec<f64>>, Vec<Vec<f64>>)> {
    let to_mv = |rows: Vec<Vec<f64>>| -> Vec<core::Multivector> {
        rows.iter()
            .map(|r| core::Multivector::from_vector(r))
            .collect()
    };
    let sys = core::HyperplaneSystem::new(metric.inner.clone(), to_mv(v), to_mv(w), offsets)
        .map_err(to_py_err)?;
    let sol = core::solve_intersection(&sys).map_err(to_py_err)?;
    let particular = sol
        .particular
        .map(|u| u.try_to_vector())
        .transpose()
        .map_err(to_py_err)?;
    let basis = sol
        .basis
        .iter()
        .map(|b| b.try_to_vector())
        .collect::<core::Result<Vec<_>>>()
        .map_err(to_py_err)?;
    Ok((particular, basis))
}

/// Runs a scenario given as TOML text: synthesizes the field, integrates the
/// orbit, and audits it. Returns `(final_state, conserved_drift,
/// dissipation_residual)`.
#[pyfunction]
fn run_scenario(config: &str) -> PyResult<(Vec<f64>, Vec<f64>, Vec<f64>)> {
    let loaded = core::cli::config::scenario_from_toml(config, "config")
        .map_err(|e| PyValueError::new_err(e.to_string()))?;
    let trajectory = loaded.scenario.integrate().map_err(to_py_err)?;
    let report = core::audit(&trajectory, &loaded.scenario).map_err(to_py_err)?;
    let final_state = trajectory.states.last().cloned().unwrap_or_default();
    Ok((
        final_state,
        report.conserved_drift,
        report.dissipation_residual,
    ))
}

/// TOML text of a named built-in scenario.
#[pyfunction]
fn builtin_scenario(name: &str) -> PyResult<String> {
    core::cli::builtins::scenario_toml(name)
        .map(str::to_owned)
        .ok_or_else(|| {
            PyValueError::new_err(format!(
                "unknown builtin scenario {name:?} (known: {})",
                core::cli::builtins::SCENARIO_NAMES.join(", ")
            ))
        })
}

#[pymodule]
fn starflow_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Metric>()?;
    m.add_class::<Multivector>()?;
    m.add_class::<ScalarField>()?;
    m.add_function(wrap_pyfunction!(volume_form, m)?)?;
    m.add_function(wrap_pyfunction!(solve_intersection, m)?)?;
    m.add_function(wrap_pyfunction!(run_scenario, m)?)?;
    m.add_function(wrap_pyfunction!(builtin_scenario, m)?)?;
    Ok(())
}
