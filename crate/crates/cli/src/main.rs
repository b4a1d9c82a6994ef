use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use qmaps_cli::{emit, run, Command, Format, Request};

/// Verify quantum families of maps, quantum semigroups and magic unitaries.
#[derive(Debug, Parser)]
#[command(name = "qmaps", version)]
struct Args {
    #[arg(value_enum)]
    command: Command,

    /// Input documents (JSON).
    inputs: Vec<PathBuf>,

    /// Absolute tolerance for defects.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,

    /// Seed for randomized suites.
    #[arg(long, default_value_t = 0)]
    seed: u64,

    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Suite name for run-suite.
    #[arg(long)]
    suite: Option<String>,

    /// Angle for the generated 4×4 magic unitary (check-magic).
    #[arg(long, allow_negative_numbers = true)]
    theta: Option<f64>,

    /// Number of points (enumerate-classical).
    #[arg(long)]
    n: Option<usize>,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let req = Request {
        command: args.command,
        inputs: args.inputs,
        tol: args.tol,
        seed: args.seed,
        theta: args.theta,
        n: args.n,
        suite: args.suite,
    };
    match run(&req) {
        Ok(report) => {
            print!("{}", emit(&report, args.format));
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("qmaps {}: {e}", req.command.name());
            ExitCode::from(2)
        }
    }
}
