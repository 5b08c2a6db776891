//! TOML document schemas and their conversion into core types. Polynomials
//! are explicit term lists (coefficient plus exponent vector); no expression
//! parsing. All diagnostics name the offending field.

use std::path::Path;

use serde::Deserialize;

use crate::cli::{builtins, CliError};
use crate::dynamics::Scenario;
use crate::exterior::{Metric, Multivector};
use crate::intersect::HyperplaneSystem;
use crate::riemann::{MetricField, ScalarField};

/// Default audit tolerance for `check` when the scenario declares none.
pub const DEFAULT_CHECK_TOLERANCE: f64 = 1e-6;

/// One polynomial term: `coeff * x_1^{e_1} * ... * x_n^{e_n}`.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermDoc {
    pub coeff: f64,
    pub exponents: Vec<u32>,
}

/// A named polynomial given as a term list.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldDoc {
    #[serde(default)]
    pub name: Option<String>,
    pub terms: Vec<TermDoc>,
}

/// Metric declaration: the string `"identity"`, a diagonal, or a full
/// symmetric positive-definite matrix given by rows.
#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum MetricDoc {
    Name(String),
    Diagonal(Vec<f64>),
    Full(Vec<Vec<f64>>),
}

/// A dynamics scenario document.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioDoc {
    pub dim: usize,
    pub metric: MetricDoc,
    #[serde(default)]
    pub conserved: Vec<FieldDoc>,
    #[serde(default)]
    pub dissipated: Vec<FieldDoc>,
    #[serde(default)]
    pub rates: Vec<FieldDoc>,
    pub x0: Vec<f64>,
    pub dt: f64,
    pub steps: usize,
    #[serde(default)]
    pub direction_coeffs: Option<Vec<FieldDoc>>,
    #[serde(default)]
    pub base_field: Option<String>,
    #[serde(default)]
    pub tol: Option<f64>,
}

/// A hyperplane-intersection system document for `solve`.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolveDoc {
    pub dim: usize,
    pub metric: MetricDoc,
    #[serde(default)]
    pub v: Vec<Vec<f64>>,
    #[serde(default)]
    pub w: Vec<Vec<f64>>,
    #[serde(default)]
    pub lambda: Vec<f64>,
}

/// Sample points for `generators`.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointsDoc {
    pub points: Vec<Vec<f64>>,
}

/// A scenario ready to run, along with its declared check tolerance.
#[derive(Clone, Debug)]
pub struct LoadedScenario {
    pub scenario: Scenario,
    pub check_tol: f64,
}

fn parse_toml<T: serde::de::DeserializeOwned>(text: &str, origin: &str) -> Result<T, CliError> {
    toml::from_str(text).map_err(|e| CliError::Config(format!("{origin}: {e}")))
}

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))
}

fn build_metric(doc: &MetricDoc, dim: usize) -> Result<Metric, CliError> {
    let metric = match doc {
        MetricDoc::Name(name) if name == "identity" => Metric::identity(dim),
        MetricDoc::Name(name) => {
            return Err(CliError::Config(format!(
                "metric: unknown name {name:?} (expected \"identity\", a diagonal, or a matrix)"
            )))
        }
        MetricDoc::Diagonal(d) => {
            if d.len() != dim {
                return Err(CliError::Config(format!(
                    "metric: diagonal has {} entries, dim = {dim}",
                    d.len()
                )));
            }
            Metric::from_diagonal(d).map_err(|e| CliError::Config(format!("metric: {e}")))?
        }
        MetricDoc::Full(rows) => {
            if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
                return Err(CliError::Config(format!(
                    "metric: matrix is not {dim}x{dim}"
                )));
            }
            Metric::from_rows(rows).map_err(|e| CliError::Config(format!("metric: {e}")))?
        }
    };
    Ok(metric)
}

fn build_field(
    doc: &FieldDoc,
    dim: usize,
    section: &str,
    index: usize,
) -> Result<ScalarField, CliError> {
    let mut terms = Vec::with_capacity(doc.terms.len());
    for (t, term) in doc.terms.iter().enumerate() {
        if term.exponents.len() != dim {
            return Err(CliError::Config(format!(
                "{section}[{index}].terms[{t}]: exponent vector has {} entries, dim = {dim}",
                term.exponents.len()
            )));
        }
        terms.push((term.coeff, term.exponents.clone()));
    }
    ScalarField::new(dim, terms).map_err(|e| CliError::Config(format!("{section}[{index}]: {e}")))
}

fn build_fields(
    docs: &[FieldDoc],
    dim: usize,
    section: &str,
) -> Result<Vec<ScalarField>, CliError> {
    docs.iter()
        .enumerate()
        .map(|(i, doc)| build_field(doc, dim, section, i))
        .collect()
}

impl ScenarioDoc {
    pub fn into_scenario(self) -> Result<LoadedScenario, CliError> {
        let dim = self.dim;
        if !(1..=16).contains(&dim) {
            return Err(CliError::Config(format!(
                "dim: {dim} outside the supported range 1..=16"
            )));
        }
        if self.x0.len() != dim {
            return Err(CliError::Config(format!(
                "x0: has {} entries, dim = {dim}",
                self.x0.len()
            )));
        }
        let metric = MetricField::constant(build_metric(&self.metric, dim)?);
        let conserved = build_fields(&self.conserved, dim, "conserved")?;
        let dissipated = build_fields(&self.dissipated, dim, "dissipated")?;
        let rates = build_fields(&self.rates, dim, "rates")?;
        if rates.len() != dissipated.len() {
            return Err(CliError::Config(format!(
                "rates: {} entries for {} dissipated fields",
                rates.len(),
                dissipated.len()
            )));
        }

        let mut scenario = Scenario::new(
            metric, conserved, dissipated, rates, self.x0, self.dt, self.steps,
        )?;
        if let Some(coeff_docs) = &self.direction_coeffs {
            let coeffs = build_fields(coeff_docs, dim, "direction_coeffs")?;
            scenario = scenario.with_direction_coeffs(coeffs)?;
        }
        if let Some(name) = &self.base_field {
            let base = builtins::base_field(name).ok_or_else(|| {
                CliError::Config(format!(
                    "base_field: unknown name {name:?} (known: {})",
                    builtins::BASE_FIELD_NAMES.join(", ")
                ))
            })?;
            if base.dim() != dim {
                return Err(CliError::Config(format!(
                    "base_field: {name:?} has dimension {}, scenario has {dim}",
                    base.dim()
                )));
            }
            scenario = scenario.with_base_field(base)?;
        }
        Ok(LoadedScenario {
            scenario,
            check_tol: self.tol.unwrap_or(DEFAULT_CHECK_TOLERANCE),
        })
    }
}

impl SolveDoc {
    pub fn into_system(self) -> Result<HyperplaneSystem, CliError> {
        let dim = self.dim;
        if !(1..=16).contains(&dim) {
            return Err(CliError::Config(format!(
                "dim: {dim} outside the supported range 1..=16"
            )));
        }
        let metric = build_metric(&self.metric, dim)?;
        let to_vectors = |rows: &[Vec<f64>], section: &str| -> Result<Vec<Multivector>, CliError> {
            rows.iter()
                .enumerate()
                .map(|(i, row)| {
                    if row.len() != dim {
                        return Err(CliError::Config(format!(
                            "{section}[{i}]: has {} entries, dim = {dim}",
                            row.len()
                        )));
                    }
                    Ok(Multivector::from_vector(row))
                })
                .collect()
        };
        let v = to_vectors(&self.v, "v")?;
        let w = to_vectors(&self.w, "w")?;
        if self.lambda.len() != w.len() {
            return Err(CliError::Config(format!(
                "lambda: {} entries for {} affine normals",
                self.lambda.len(),
                w.len()
            )));
        }
        Ok(HyperplaneSystem::new(metric, v, w, self.lambda)?)
    }
}

/// Parses a scenario from TOML text; `origin` labels diagnostics.
pub fn scenario_from_toml(text: &str, origin: &str) -> Result<LoadedScenario, CliError> {
    let doc: ScenarioDoc = parse_toml(text, origin)?;
    doc.into_scenario()
}

/// Loads a scenario by built-in name or from a TOML file path.
pub fn load_scenario(spec: &str) -> Result<LoadedScenario, CliError> {
    let (text, origin) = match builtins::scenario_toml(spec) {
        Some(text) => (text.to_string(), format!("builtin scenario {spec:?}")),
        None => (read_file(Path::new(spec))?, spec.to_string()),
    };
    scenario_from_toml(&text, &origin)
}

pub fn load_solve_doc(path: &Path) -> Result<SolveDoc, CliError> {
    parse_toml(&read_file(path)?, &path.display().to_string())
}

pub fn load_points(path: &Path, dim: usize) -> Result<Vec<Vec<f64>>, CliError> {
    let doc: PointsDoc = parse_toml(&read_file(path)?, &path.display().to_string())?;
    for (i, point) in doc.points.iter().enumerate() {
        if point.len() != dim {
            return Err(CliError::Config(format!(
                "points[{i}]: has {} entries, dim = {dim}",
                point.len()
            )));
        }
    }
    Ok(doc.points)
}
