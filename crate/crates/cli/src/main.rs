use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use minlab_cli::{list_scenarios, parse_mode, run, write_outputs, Scenario, ScenarioConfig, DEFAULT_SAMPLES};

/// Numerical verification of minimal hypersurfaces in spheres.
#[derive(Debug, Parser)]
#[command(name = "minlab", version, arg_required_else_help = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the scenario catalog.
    List,
    /// Run one scenario and write its JSON report.
    Run(RunArgs),
}

#[derive(Debug, clap::Args)]
struct RunArgs {
    /// Scenario name, see `minlab list`.
    scenario: String,
    /// Matrix size parameter.
    #[arg(long)]
    n: Option<usize>,
    /// First sphere dimension.
    #[arg(long)]
    p: Option<usize>,
    /// Second sphere dimension.
    #[arg(long)]
    q: Option<usize>,
    #[arg(long, env = "MINLAB_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    samples: usize,
    /// Residual tolerance (default depends on scenario and mode).
    #[arg(long)]
    tol: Option<f64>,
    /// Derivative engine: ad or fd.
    #[arg(long, default_value = "ad")]
    mode: String,
    /// JSON report path (default minlab-<scenario>.json).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Optional per-sample CSV export.
    #[arg(long)]
    csv: Option<PathBuf>,
}

const USAGE_ERROR: u8 = 2;

fn config_from(args: RunArgs) -> Result<ScenarioConfig, minlab_cli::ConfigError> {
    let scenario: Scenario = args.scenario.parse()?;
    Ok(ScenarioConfig {
        scenario,
        seed: args.seed,
        samples: args.samples,
        tol: args.tol,
        derivative_mode: parse_mode(&args.mode)?,
        n: args.n,
        p: args.p,
        q: args.q,
        output_path: args.out,
        csv_path: args.csv,
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { USAGE_ERROR } else { 0 });
        }
    };
    let args = match cli.command {
        Command::List => {
            print!("{}", list_scenarios());
            return ExitCode::SUCCESS;
        }
        Command::Run(args) => args,
    };
    let config = match config_from(args) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(USAGE_ERROR);
        }
    };
    let report = match run(&config) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(USAGE_ERROR);
        }
    };
    for line in report.summary_lines() {
        println!("{line}");
    }
    match write_outputs(&report, &config) {
        Ok(path) => println!("report written to {}", path.display()),
        Err(e) => eprintln!("error: could not write report: {e}"),
    }
    ExitCode::from(report.exit_code() as u8)
}
