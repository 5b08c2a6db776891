use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use starflow::cli::commands;

#[derive(Parser)]
#[command(
    name = "starflow",
    version,
    about = "Synthesize and audit vector fields with prescribed conserved and dissipated quantities"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a mixed linear/affine hyperplane-intersection system
    Solve {
        /// TOML document with dim, metric, v, w, lambda
        #[arg(long)]
        input: PathBuf,
        /// Residual tolerance for the pass/fail verdict
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Tabulate X0 and generator values of a scenario at sample points
    Generators {
        /// Built-in scenario name or path to a scenario TOML
        #[arg(long)]
        scenario: String,
        /// TOML document with a points = [[..], ..] list
        #[arg(long)]
        points: PathBuf,
    },
    /// Integrate a scenario and write the trajectory CSV
    Integrate {
        /// Built-in scenario name or path to a scenario TOML
        #[arg(long)]
        scenario: String,
        /// Output CSV path (written atomically)
        #[arg(long)]
        output: PathBuf,
    },
    /// Audit a trajectory CSV against its scenario
    Check {
        /// Trajectory CSV produced by `integrate`
        #[arg(long)]
        input: PathBuf,
        /// Built-in scenario name or path to a scenario TOML
        #[arg(long)]
        scenario: String,
        /// Drift tolerance (defaults to the scenario's, else 1e-6)
        #[arg(long)]
        tol: Option<f64>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Solve { input, tol } => commands::cmd_solve(&input, tol),
        Command::Generators { scenario, points } => commands::cmd_generators(&scenario, &points),
        Command::Integrate { scenario, output } => commands::cmd_integrate(&scenario, &output),
        Command::Check {
            input,
            scenario,
            tol,
        } => commands::cmd_check(&input, &scenario, tol),
    };
    ExitCode::from(code as u8)
}
