mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use commands::{group, hadamard, model, suite, weyl};
use output::{CliError, Outcome, EXIT_CHECK_FAILED, EXIT_INPUT, EXIT_PASS};

/// Quantum permutation group experiments: magic unitaries, flat matrix
/// models and permutation-group analysis.
#[derive(Debug, Parser)]
#[command(name = "qpg", version)]
struct Cli {
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    report: Option<PathBuf>,
    /// Also write the command's data series as CSV.
    #[arg(long, global = true)]
    csv: Option<PathBuf>,
    /// Attach wall-clock timings (makes the report non-reproducible).
    #[arg(long, global = true)]
    timings: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Permutation group analysis.
    Group {
        #[command(subcommand)]
        cmd: group::GroupCmd,
    },
    /// Complex Hadamard matrices.
    Hadamard {
        #[command(subcommand)]
        cmd: hadamard::HadamardCmd,
    },
    /// Flat matrix models.
    Model {
        #[command(subcommand)]
        cmd: model::ModelCmd,
    },
    /// Weyl matrix models.
    Weyl {
        #[command(subcommand)]
        cmd: weyl::WeylCmd,
    },
    /// Acceptance battery.
    Suite {
        #[command(subcommand)]
        cmd: suite::SuiteCmd,
    },
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var("QPG_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| output::usage(format!("QPG_THREADS must be a positive integer, got `{v}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| output::usage(e.to_string()))
}

fn dispatch(cmd: Command) -> Result<Outcome, CliError> {
    match cmd {
        Command::Group { cmd } => group::run(cmd),
        Command::Hadamard { cmd } => hadamard::run(cmd),
        Command::Model { cmd } => model::run(cmd),
        Command::Weyl { cmd } => weyl::run(cmd),
        Command::Suite { cmd } => suite::run(cmd),
    }
}

fn execute(cli: Cli) -> Result<i32, CliError> {
    configure_threads()?;
    let start = Instant::now();
    let mut out = dispatch(cli.command)?;
    if cli.timings {
        out.report.timing("total_seconds", start.elapsed().as_secs_f64());
    }
    if cli.csv.is_some() && out.table.is_none() {
        return Err(output::usage("this command has no data series for --csv"));
    }
    let json = out.report.to_json();
    match &cli.report {
        Some(path) => output::write_text(path, &json)?,
        None => print!("{json}"),
    }
    if let (Some(path), Some(t)) = (&cli.csv, &out.table) {
        t.write_csv(path)?;
    }
    for c in out.report.failed_checks() {
        eprintln!(
            "{}",
            serde_json::json!({"error": "check-failed", "check": c.name, "value": c.value, "tolerance": c.tolerance})
        );
    }
    Ok(if out.report.passed() {
        EXIT_PASS
    } else {
        EXIT_CHECK_FAILED
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let err = CliError::Usage(e.to_string().trim_end().to_string());
            eprintln!("{}", err.record());
            return ExitCode::from(EXIT_INPUT as u8);
        }
    };
    match execute(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("{}", e.record());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
