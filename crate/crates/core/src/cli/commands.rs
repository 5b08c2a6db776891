//! Implementations of the four subcommands. Each returns the process exit
//! code; diagnostics go to stderr, results to stdout.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::cli::config::{load_points, load_scenario, load_solve_doc, LoadedScenario};
use crate::cli::{CliError, EXIT_AUDIT_FAIL, EXIT_DIVERGED, EXIT_PASS, EXIT_RANK_ERROR};
use crate::dynamics::{audit, integrate_partial, synthesize, Scenario, Trajectory};
use crate::error::Error;
use crate::intersect::{solve_intersection, verify_solution};
use crate::riemann::pointwise_generators;

fn fmt_vec(values: &[f64]) -> String {
    let mut out = String::from("[");
    for (i, v) in values.iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        let _ = write!(out, "{v}");
    }
    out.push(']');
    out
}

fn report_error(err: &CliError) -> i32 {
    eprintln!("error: {err}");
    err.exit_code()
}

/// `solve --input <system.toml> [--tol <t>]`: prints the particular solution,
/// the homogeneous basis, and the residual report. Exit 0 iff all residuals
/// pass the tolerance (default 1e-9).
pub fn cmd_solve(input: &Path, tol: f64) -> i32 {
    match run_solve(input, tol) {
        Ok(code) => code,
        Err(e) => report_error(&e),
    }
}

fn run_solve(input: &Path, tol: f64) -> Result<i32, CliError> {
    let sys = load_solve_doc(input)?.into_system()?;
    let sol = solve_intersection(&sys)?;
    match &sol.particular {
        Some(u0) => println!("u0 = {}", fmt_vec(&u0.try_to_vector()?)),
        None => println!("u0 = (none: homogeneous system)"),
    }
    if sol.basis.is_empty() {
        println!("basis: (empty) unique solution");
    } else {
        println!("basis:");
        for (a, u) in sol.basis.iter().enumerate() {
            println!("  u_{} = {}", a + 1, fmt_vec(&u.try_to_vector()?));
        }
    }
    let report = verify_solution(&sys, &sol, tol)?;
    println!("{report}");
    Ok(if report.passed {
        EXIT_PASS
    } else {
        EXIT_AUDIT_FAIL
    })
}

/// `generators --scenario <name|path> --points <points.toml>`: tabulates
/// `X_0` and the generator values per sample point with residual columns.
/// Rows where the constraint gradients drop rank are flagged; any flagged
/// row makes the command exit 3.
pub fn cmd_generators(scenario: &str, points: &Path) -> i32 {
    match run_generators(scenario, points) {
        Ok(code) => code,
        Err(e) => report_error(&e),
    }
}

fn run_generators(scenario_spec: &str, points_path: &Path) -> Result<i32, CliError> {
    let LoadedScenario { scenario, .. } = load_scenario(scenario_spec)?;
    let points = load_points(points_path, scenario.dim())?;
    let x_fields = scenario.conserved_gradients();
    let y_fields = scenario.dissipated_gradients();

    let mut flagged = 0usize;
    for (index, point) in points.iter().enumerate() {
        match pointwise_generators(
            point,
            &x_fields,
            &y_fields,
            scenario.rates(),
            scenario.metric(),
        ) {
            Ok((particular, directions)) => {
                println!("point {}: x = {}", index + 1, fmt_vec(point));
                let metric = scenario.metric().at(point)?;
                if let Some(x0) = &particular {
                    println!("  X0 = {}", fmt_vec(x0));
                    for (i, handle) in x_fields.iter().enumerate() {
                        let grad = handle.evaluate(point)?;
                        println!(
                            "  |g(X0, grad I_{})|       = {:.3e}",
                            i + 1,
                            metric.dot(x0, &grad).abs()
                        );
                    }
                    for (j, handle) in y_fields.iter().enumerate() {
                        let grad = handle.evaluate(point)?;
                        let h = scenario.rates()[j].eval(point)?;
                        println!(
                            "  |g(X0, grad D_{}) - h_{}| = {:.3e}",
                            j + 1,
                            j + 1,
                            (metric.dot(x0, &grad) - h).abs()
                        );
                    }
                }
                for (a, direction) in directions.iter().enumerate() {
                    println!("  generator {} = {}", a + 1, fmt_vec(direction));
                }
            }
            Err(Error::RankDeficientAt { point, sigma_min }) => {
                flagged += 1;
                println!(
                    "point {}: x = {} FLAGGED: rank deficiency (smallest singular value {sigma_min:.3e})",
                    index + 1,
                    fmt_vec(&point)
                );
            }
            Err(other) => return Err(other.into()),
        }
    }
    Ok(if flagged > 0 {
        EXIT_RANK_ERROR
    } else {
        EXIT_PASS
    })
}

/// Column header for a scenario's trajectory CSV.
fn csv_header(scenario: &Scenario) -> String {
    let mut header = String::from("t");
    for i in 1..=scenario.dim() {
        let _ = write!(header, ",x_{i}");
    }
    for i in 1..=scenario.k() {
        let _ = write!(header, ",I_{i}");
    }
    for j in 1..=scenario.p() {
        let _ = write!(header, ",D_{j}");
    }
    for j in 1..=scenario.p() {
        let _ = write!(header, ",h_{j}");
    }
    header
}

fn render_csv(scenario: &Scenario, trajectory: &Trajectory) -> String {
    let mut out = csv_header(scenario);
    out.push('\n');
    for row in 0..trajectory.len() {
        let _ = write!(out, "{}", trajectory.times[row]);
        for value in &trajectory.states[row] {
            let _ = write!(out, ",{value}");
        }
        for series in trajectory
            .conserved_samples
            .iter()
            .chain(&trajectory.dissipated_samples)
            .chain(&trajectory.rate_samples)
        {
            let _ = write!(out, ",{}", series[row]);
        }
        out.push('\n');
    }
    out
}

/// Writes via a temp file in the same directory followed by a rename.
fn write_atomically(path: &Path, contents: &str) -> Result<(), CliError> {
    let tmp = path.with_file_name(format!(
        "{}.tmp",
        path.file_name()
            .ok_or_else(|| CliError::Config(format!("{}: not a file path", path.display())))?
            .to_string_lossy()
    ));
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

/// `integrate --scenario <name|path> --output <trajectory.csv>`: synthesizes
/// the scenario field, integrates it, and writes the trajectory CSV
/// (`t, x_1..x_n, I_1.., D_1.., h_1..`, one row per step including `t = 0`).
/// On divergence the partial trajectory is still written and the exit code
/// is 4.
pub fn cmd_integrate(scenario: &str, output: &Path) -> i32 {
    match run_integrate(scenario, output) {
        Ok(code) => code,
        Err(e) => report_error(&e),
    }
}

fn run_integrate(scenario_spec: &str, output: &Path) -> Result<i32, CliError> {
    let LoadedScenario { scenario, .. } = load_scenario(scenario_spec)?;
    let field = synthesize(&scenario)?;
    let (mut trajectory, diverged) =
        integrate_partial(&field, scenario.x0(), scenario.dt(), scenario.steps())?;
    trajectory.sample_scalars(&scenario)?;
    write_atomically(output, &render_csv(&scenario, &trajectory))?;
    match diverged {
        Some(step) => {
            eprintln!("error: integration diverged at step {step}; partial trajectory written");
            Ok(EXIT_DIVERGED)
        }
        None => {
            println!("wrote {} rows to {}", trajectory.len(), output.display());
            Ok(EXIT_PASS)
        }
    }
}

/// `check --input <trajectory.csv> --scenario <name|path> [--tol <t>]`:
/// audits the trajectory against the scenario (scalars recomputed from the
/// recorded states) and exits 0 iff every drift and budget residual is below
/// the tolerance (flag, else the scenario's `tol`, else 1e-6).
pub fn cmd_check(input: &Path, scenario: &str, tol: Option<f64>) -> i32 {
    match run_check(input, scenario, tol) {
        Ok(code) => code,
        Err(e) => report_error(&e),
    }
}

fn run_check(input: &Path, scenario_spec: &str, tol: Option<f64>) -> Result<i32, CliError> {
    let LoadedScenario {
        scenario,
        check_tol,
    } = load_scenario(scenario_spec)?;
    let tol = tol.unwrap_or(check_tol);

    let contents = fs::read_to_string(input)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", input.display())))?;
    let trajectory = parse_csv(&contents, &scenario, input)?;

    let report = audit(&trajectory, &scenario)?;
    print!("{report}");
    if report.passes(tol) {
        println!("audit: PASS (tolerance {tol:e})");
        Ok(EXIT_PASS)
    } else {
        println!("audit: FAIL (tolerance {tol:e})");
        Ok(EXIT_AUDIT_FAIL)
    }
}

fn parse_csv(contents: &str, scenario: &Scenario, origin: &Path) -> Result<Trajectory, CliError> {
    let expected_header = csv_header(scenario);
    let expected_columns = 1 + scenario.dim() + scenario.k() + 2 * scenario.p();
    let mut lines = contents.lines();
    let header = lines
        .next()
        .ok_or_else(|| CliError::Config(format!("{}: empty file", origin.display())))?;
    if header != expected_header {
        return Err(CliError::Config(format!(
            "{}: header does not match the scenario (expected {expected_header:?}, got {header:?})",
            origin.display()
        )));
    }

    let mut times = Vec::new();
    let mut states = Vec::new();
    for (i, line) in lines.enumerate() {
        let row = i + 2; // 1-based, after the header
        if line.is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split(',').collect();
        if cells.len() != expected_columns {
            return Err(CliError::Config(format!(
                "{}: row {row} has {} columns, expected {expected_columns}",
                origin.display(),
                cells.len()
            )));
        }
        let mut values = Vec::with_capacity(cells.len());
        for (c, cell) in cells.iter().enumerate() {
            values.push(cell.parse::<f64>().map_err(|e| {
                CliError::Config(format!(
                    "{}: row {row}, column {}: {e}",
                    origin.display(),
                    c + 1
                ))
            })?);
        }
        times.push(values[0]);
        states.push(values[1..=scenario.dim()].to_vec());
    }
    if states.len() != scenario.steps() + 1 {
        return Err(CliError::Config(format!(
            "{}: {} data rows, scenario declares steps + 1 = {}",
            origin.display(),
            states.len(),
            scenario.steps() + 1
        )));
    }
    Ok(Trajectory::new(times, states))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::Metric;
    use crate::riemann::{MetricField, ScalarField};

    fn tiny_scenario() -> Scenario {
        let metric = MetricField::constant(Metric::identity(2));
        let d = ScalarField::new(2, vec![(0.5, vec![2, 0]), (0.5, vec![0, 2])]).unwrap();
        let h = ScalarField::new(2, vec![(-1.0, vec![2, 0]), (-1.0, vec![0, 2])]).unwrap();
        Scenario::new(metric, vec![], vec![d], vec![h], vec![1.0, 0.0], 0.5, 2).unwrap()
    }

    #[test]
    fn csv_round_trip_preserves_states() {
        let scenario = tiny_scenario();
        let mut trajectory = scenario.integrate().unwrap();
        trajectory.sample_scalars(&scenario).unwrap();
        let text = render_csv(&scenario, &trajectory);
        let parsed = parse_csv(&text, &scenario, Path::new("mem")).unwrap();
        assert_eq!(parsed.states, trajectory.states);
        assert_eq!(parsed.times, trajectory.times);
    }

    #[test]
    fn csv_rendering_is_deterministic() {
        let scenario = tiny_scenario();
        let run = || {
            let mut t = scenario.integrate().unwrap();
            t.sample_scalars(&scenario).unwrap();
            render_csv(&scenario, &t)
        };
        assert_eq!(run(), run());
    }

    #[test]
    fn csv_header_shape() {
        let scenario = tiny_scenario();
        assert_eq!(csv_header(&scenario), "t,x_1,x_2,D_1,h_1");
    }

    #[test]
    fn parse_csv_rejects_bad_shapes() {
        let scenario = tiny_scenario();
        let bad_header = "t,x_1,x_2,D_1\n0,1,0,0.5\n";
        assert!(matches!(
            parse_csv(bad_header, &scenario, Path::new("mem")),
            Err(CliError::Config(_))
        ));

        let short_row = "t,x_1,x_2,D_1,h_1\n0,1,0,0.5\n";
        let err = parse_csv(short_row, &scenario, Path::new("mem")).unwrap_err();
        assert!(err.to_string().contains("row 2"), "{err}");

        let bad_float = "t,x_1,x_2,D_1,h_1\n0,1,zzz,0.5,-1\n0.5,1,0,0.5,-1\n0.5,1,0,0.5,-1\n";
        let err = parse_csv(bad_float, &scenario, Path::new("mem")).unwrap_err();
        assert!(err.to_string().contains("column 3"), "{err}");
    }
}
