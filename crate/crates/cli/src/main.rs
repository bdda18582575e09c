use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rigidity_core::harness::{load_scenario, run_scenario, Scenario, ScenarioKind};

#[derive(Parser)]
#[command(name = "rigidity", version, about = "Hessian-operator rigidity checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Symmetric functions and the Maclaurin chain of one matrix.
    Symm(Common),
    /// Lower-bound root for a sign-split operator, with an oracle cross-check.
    Sigma0(Common),
    /// End-to-end checks of the separable quadratic-growth example.
    VerifyExample(Common),
    /// Operator residual of a field over sample points.
    ResidualScan(Common),
    /// Touching-paraboloid probe for a sequence of eps.
    RigidityProbe(Common),
    /// Sampled growth-order verdict.
    Growth(Common),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct Common {
    /// Scenario file (JSON).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overrides every seed in the scenario.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides the tolerance of the main check.
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

impl Command {
    fn split(&self) -> (ScenarioKind, &Common) {
        match self {
            Command::Symm(c) => (ScenarioKind::Symm, c),
            Command::Sigma0(c) => (ScenarioKind::Sigma0, c),
            Command::VerifyExample(c) => (ScenarioKind::VerifyExample, c),
            Command::ResidualScan(c) => (ScenarioKind::ResidualScan, c),
            Command::RigidityProbe(c) => (ScenarioKind::RigidityProbe, c),
            Command::Growth(c) => (ScenarioKind::Growth, c),
        }
    }
}

/// Anything that stops a run before a report exists (exit code 2).
struct Failure(String);

fn run(cli: &Cli) -> Result<i32, Failure> {
    let (kind, opts) = cli.command.split();
    let mut scenario = match &opts.config {
        Some(path) => load_scenario(path).map_err(|e| Failure(e.to_string()))?,
        None => Scenario::new(kind),
    };
    match scenario.kind {
        None => scenario.kind = Some(kind),
        Some(k) if k != kind => {
            return Err(Failure(format!("config kind `{k}` does not match subcommand `{kind}`")));
        }
        Some(_) => {}
    }
    if let Some(seed) = opts.seed {
        scenario.set_seed(seed);
    }
    if let Some(tol) = opts.tol {
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(Failure(format!("--tol must be positive, got {tol}")));
        }
        scenario.set_primary_tolerance(tol);
    }

    let outcome = run_scenario(&scenario).map_err(|e| Failure(e.to_string()))?;
    let body = match opts.format {
        Format::Json => outcome.report.to_json(),
        Format::Csv => match &outcome.grid {
            Some(grid) => grid.to_csv(),
            None => return Err(Failure(format!("`{kind}` produces no CSV dump"))),
        },
    };
    outcome.write_outputs().map_err(|e| Failure(e.to_string()))?;
    match &opts.out {
        Some(path) => fs::write(path, body).map_err(|e| Failure(format!("{}: {e}", path.display())))?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(body.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| Failure(e.to_string()))?;
        }
    }
    Ok(outcome.report.exit_code())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(Failure(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
