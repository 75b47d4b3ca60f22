use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use jamsec_cli::builtin::BUILTINS;
use jamsec_cli::scenario::parse_methods;
use jamsec_cli::{emit, exit, run_scenario, CliError, Format, RunOptions, Scenario, Source};

/// Secrecy performance of a jammer-assisted link: analytical and simulated sweeps.
#[derive(Parser)]
#[command(name = "jamsec", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a scenario at a single axis value.
    Eval {
        /// Scenario file or built-in name.
        scenario: String,
        /// Axis value to evaluate; defaults to the first grid point.
        #[arg(long, allow_hyphen_values = true)]
        at: Option<f64>,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Evaluate a scenario over its whole sweep grid.
    Sweep {
        /// Scenario file or built-in name.
        scenario: String,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Check a scenario and list every problem without running it.
    Validate {
        /// Scenario file or built-in name.
        scenario: String,
    },
    /// List the built-in scenarios.
    ListScenarios,
}

#[derive(Args)]
struct RunArgs {
    /// Override the scenario seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the Monte Carlo trial count.
    #[arg(long)]
    trials: Option<u64>,
    /// Comma-separated subset of closed-form, quadrature, monte-carlo.
    #[arg(long)]
    methods: Option<String>,
    /// Output format: csv or json.
    #[arg(long, default_value = "csv")]
    format: Format,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn report(err: &CliError) {
    match err {
        CliError::Validation(diags) | CliError::Numerical(diags) => {
            for d in diags {
                eprintln!("error: {d}");
            }
        }
        CliError::Io(msg) => eprintln!("error: {msg}"),
    }
}

fn execute(scenario: &str, at: Option<f64>, args: &RunArgs, single: bool) -> Result<(), CliError> {
    let methods = match &args.methods {
        Some(list) => Some(parse_methods(list).map_err(|d| CliError::Validation(vec![d]))?),
        None => None,
    };
    let at = match (single, at) {
        (true, None) => Some(Source::load(scenario)?.parse()?.sweep.grid[0]),
        (_, at) => at,
    };
    let options = RunOptions { seed: args.seed, trials: args.trials, methods, at };
    let output = run_scenario(scenario, &options)?;
    emit(&output.table, args.format, args.out.as_deref())?;
    if output.failures.is_empty() {
        Ok(())
    } else {
        Err(CliError::Numerical(output.failures))
    }
}

fn validate(scenario: &str) -> Result<(), CliError> {
    let source = Source::load(scenario)?;
    match Scenario::parse(&source.text) {
        Ok(_) => {
            println!("ok");
            Ok(())
        }
        Err(diags) => {
            for d in &diags {
                println!("{d}");
            }
            Err(CliError::Validation(Vec::new()))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Eval { scenario, at, run } => execute(scenario, *at, run, true),
        Command::Sweep { scenario, run } => execute(scenario, None, run, false),
        Command::Validate { scenario } => validate(scenario),
        Command::ListScenarios => {
            for b in &BUILTINS {
                let description = Scenario::parse(b.text).map(|s| s.description).unwrap_or_default();
                println!("{}\t{}", b.name, description);
            }
            Ok(())
        }
    };
    match result {
        Ok(()) => ExitCode::from(exit::OK),
        Err(e) => {
            report(&e);
            ExitCode::from(e.exit_code())
        }
    }
}
