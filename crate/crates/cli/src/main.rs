use std::io::Write;
use std::process::ExitCode;

use bosonic_core::allocation::AllocationProblem;
use bosonic_core::code_conversion::CodeParams;
use clap::{Parser, Subcommand};

mod commands;
mod error;
mod output;
mod spec;
mod verify;

use commands::{ConversionKind, OutputFormat};
use error::{CliError, CliResult};
use spec::{load, ChannelSpec};

/// Energy-constrained capacities of bosonic Gaussian channels.
#[derive(Debug, Parser)]
#[command(name = "bosonic", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Constrained and unconstrained capacity of a channel.
    Capacity {
        /// Channel spec: a JSON file, or inline JSON.
        #[arg(long)]
        spec: String,
        /// Mean photon number (energy budget for parallel channels).
        #[arg(long)]
        ns: f64,
    },
    /// Capacity over a range of mean photon numbers.
    Sweep {
        #[arg(long)]
        spec: String,
        /// A:B:N, N points from A to B.
        #[arg(long = "ns-range")]
        ns_range: String,
        /// Logarithmic spacing.
        #[arg(long)]
        log: bool,
        #[arg(long, value_enum, default_value = "csv")]
        format: OutputFormat,
    },
    /// Optimal energy allocation across parallel channels.
    Allocate {
        /// Allocation problem: `{"channels": [...], "budget": P}`.
        #[arg(long)]
        spec: String,
        /// Also run the exhaustive grid search with this many steps.
        #[arg(long = "grid-points")]
        grid_points: Option<usize>,
    },
    /// Code parameter conversion.
    Convert {
        /// Code parameters `{"n", "m", "energy", "epsilon", "task"}`.
        #[arg(long)]
        spec: Option<String>,
        #[arg(long, value_enum)]
        conversion: ConversionKind,
        #[arg(long)]
        delta: Option<f64>,
    },
    /// Run a verification suite.
    Verify {
        #[arg(long)]
        suite: String,
        /// Override the suite tolerance.
        #[arg(long)]
        tol: Option<f64>,
    },
}

fn run(cli: Cli) -> CliResult<String> {
    match cli.command {
        Command::Capacity { spec, ns } => commands::capacity(&load::<ChannelSpec>(&spec)?, ns),
        Command::Sweep {
            spec,
            ns_range,
            log,
            format,
        } => {
            let range = commands::parse_range(&ns_range)?;
            commands::sweep(&load::<ChannelSpec>(&spec)?, range, log, format)
        }
        Command::Allocate { spec, grid_points } => {
            commands::allocate(&load::<AllocationProblem>(&spec)?, grid_points)
        }
        Command::Convert {
            spec,
            conversion,
            delta,
        } => {
            let params = spec.as_deref().map(load::<CodeParams>).transpose()?;
            commands::convert(params.as_ref(), conversion, delta)
        }
        Command::Verify { suite, tol } => {
            let report = verify::run(&suite, tol)?;
            let text = output::to_json(&report);
            if report.passed {
                Ok(text)
            } else {
                emit(&text);
                Err(CliError::Verification)
            }
        }
    }
}

/// Writes to stdout; a closed pipe (e.g. `| head`) is not an error.
fn emit(text: &str) {
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(text.as_bytes());
    if !text.ends_with('\n') {
        let _ = out.write_all(b"\n");
    }
    let _ = out.flush();
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(text) => {
            emit(&text);
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
