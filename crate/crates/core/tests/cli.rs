//! End-to-end tests of the `starflow` binary: output shapes and the exit-code
//! contract (0 pass, 1 audit fail, 2 input error, 3 rank error, 4 divergence).

use std::fs;
use std::path::Path;
use std::process::Output;

fn run(args: &[&str]) -> Output {
    std::process::Command::new(env!("CARGO_BIN_EXE_starflow"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(path: &Path, contents: &str) {
    fs::write(path, contents).unwrap();
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn stderr(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}

#[test]
fn solve_reports_particular_and_basis() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("system.toml");
    write(
        &input,
        r#"
dim = 4
metric = "identity"
v = [[1.0, 0.0, 0.0, 0.0]]
w = [[0.0, 1.0, 0.0, 0.0], [0.0, 0.0, 1.0, 0.0]]
lambda = [1.0, 2.0]
"#,
    );
    let output = run(&["solve", "--input", input.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(0), "{}", stderr(&output));
    let text = stdout(&output);
    assert!(text.contains("u0 = [0, 1, 2, 0]"), "{text}");
    assert!(text.contains("u_1 = [0, 0, 0, 1]"), "{text}");
    assert!(text.contains("verdict: PASS"), "{text}");
}

#[test]
fn solve_full_rank_notes_unique_solution() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("system.toml");
    write(
        &input,
        r#"
dim = 2
metric = "identity"
w = [[1.0, 0.0], [0.0, 1.0]]
lambda = [3.0, -1.0]
"#,
    );
    let output = run(&["solve", "--input", input.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(0));
    let text = stdout(&output);
    assert!(text.contains("u0 = [3, -1]"), "{text}");
    assert!(text.contains("unique solution"), "{text}");
}

#[test]
fn solve_dependent_normals_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("system.toml");
    write(
        &input,
        r#"
dim = 3
metric = "identity"
v = [[1.0, 0.0, 0.0], [2.0, 0.0, 0.0]]
"#,
    );
    let output = run(&["solve", "--input", input.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(3));
    assert!(
        stderr(&output).contains("singular value"),
        "{}",
        stderr(&output)
    );
}

#[test]
fn solve_parse_error_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("system.toml");
    write(&input, "dim = \"three\"\n");
    let output = run(&["solve", "--input", input.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn generators_damped_radial_and_flagged_origin() {
    let dir = tempfile::tempdir().unwrap();
    let points = dir.path().join("points.toml");
    write(&points, "points = [[1.0, 0.0], [0.0, 0.0]]\n");
    let output = run(&[
        "generators",
        "--scenario",
        "damped-radial",
        "--points",
        points.to_str().unwrap(),
    ]);
    // The origin row is flagged (the gradient of D vanishes there).
    assert_eq!(output.status.code(), Some(3), "{}", stderr(&output));
    let text = stdout(&output);
    assert!(text.contains("X0 = [-1, 0]"), "{text}");
    assert!(text.contains("FLAGGED"), "{text}");
}

#[test]
fn generators_euler_top_has_no_particular_column() {
    let dir = tempfile::tempdir().unwrap();
    let points = dir.path().join("points.toml");
    write(&points, "points = [[1.0, 0.6, -0.8]]\n");
    let output = run(&[
        "generators",
        "--scenario",
        "euler-top",
        "--points",
        points.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(0), "{}", stderr(&output));
    let text = stdout(&output);
    assert!(!text.contains("X0"), "{text}");
    assert!(text.contains("generator 1 = "), "{text}");

    // The printed generator is the cross product of the two gradients.
    let line = text
        .lines()
        .find(|l| l.contains("generator 1"))
        .unwrap()
        .trim();
    let values: Vec<f64> = line
        .trim_start_matches("generator 1 = [")
        .trim_end_matches(']')
        .split(", ")
        .map(|v| v.parse().unwrap())
        .collect();
    let expected = [0.08, -0.5333333333333333, -0.3];
    for (a, b) in values.iter().zip(&expected) {
        assert!((a - b).abs() < 1e-12, "{values:?}");
    }
}

#[test]
fn check_detects_corrupted_state_row() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("trajectory.csv");
    let output = run(&[
        "integrate",
        "--scenario",
        "damped-radial",
        "--output",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(0), "{}", stderr(&output));

    // Corrupt one state value halfway through.
    let contents = fs::read_to_string(&csv).unwrap();
    let mut lines: Vec<String> = contents.lines().map(String::from).collect();
    let mut cells: Vec<String> = lines[500].split(',').map(String::from).collect();
    cells[1] = "0.75".into();
    lines[500] = cells.join(",");
    fs::write(&csv, lines.join("\n") + "\n").unwrap();

    let output = run(&[
        "check",
        "--scenario",
        "damped-radial",
        "--input",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(1), "{}", stdout(&output));
    assert!(stdout(&output).contains("FAIL"), "{}", stdout(&output));
}

#[test]
fn check_mismatched_scenario_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("trajectory.csv");
    let output = run(&[
        "integrate",
        "--scenario",
        "damped-radial",
        "--output",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(0));

    let output = run(&[
        "check",
        "--scenario",
        "euler-top",
        "--input",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(2), "{}", stdout(&output));
    assert!(stderr(&output).contains("header"), "{}", stderr(&output));
}

#[test]
fn integrate_divergence_writes_partial_and_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = dir.path().join("blowup.toml");
    // x' = |x|^2 x: finite-time blow-up from |x0| = 1 at t = 0.5.
    write(
        &scenario,
        r#"
dim = 2
metric = "identity"
x0 = [1.0, 0.0]
dt = 0.01
steps = 100

[[dissipated]]
terms = [{ coeff = 0.5, exponents = [2, 0] }, { coeff = 0.5, exponents = [0, 2] }]

[[rates]]
terms = [
    { coeff = 1.0, exponents = [4, 0] },
    { coeff = 2.0, exponents = [2, 2] },
    { coeff = 1.0, exponents = [0, 4] },
]
"#,
    );
    let csv = dir.path().join("trajectory.csv");
    let output = run(&[
        "integrate",
        "--scenario",
        scenario.to_str().unwrap(),
        "--output",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(4), "{}", stderr(&output));
    assert!(
        stderr(&output).contains("diverged at step"),
        "{}",
        stderr(&output)
    );

    let contents = fs::read_to_string(&csv).unwrap();
    let rows = contents.lines().count();
    assert!(rows > 10 && rows < 102, "partial file has {rows} rows");
}

#[test]
fn zero_rate_variant_keeps_d_column_constant() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = dir.path().join("zero-rate.toml");
    write(
        &scenario,
        r#"
dim = 2
metric = "identity"
x0 = [1.0, 0.0]
dt = 0.001
steps = 200

[[dissipated]]
terms = [{ coeff = 0.5, exponents = [2, 0] }, { coeff = 0.5, exponents = [0, 2] }]

[[rates]]
terms = []
"#,
    );
    let csv = dir.path().join("trajectory.csv");
    let output = run(&[
        "integrate",
        "--scenario",
        scenario.to_str().unwrap(),
        "--output",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(0), "{}", stderr(&output));

    let contents = fs::read_to_string(&csv).unwrap();
    let d_values: Vec<f64> = contents
        .lines()
        .skip(1)
        .map(|line| line.split(',').nth(3).unwrap().parse().unwrap())
        .collect();
    assert!(d_values.iter().all(|d| (d - d_values[0]).abs() < 1e-8));
}

#[test]
fn unknown_scenario_name_exit_2() {
    let output = run(&[
        "integrate",
        "--scenario",
        "no-such-scenario",
        "--output",
        "/tmp/x.csv",
    ]);
    assert_eq!(output.status.code(), Some(2));
}
