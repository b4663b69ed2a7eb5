use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use aas_cli::runner::{self, CommandOutput};
use aas_core::report::ReportFormat;

/// Artificial Age Score diagnostics: reproduce the bundled reference
/// scenarios or run clause bundles over your own channel traces.
#[derive(Parser)]
#[command(name = "aas", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Re-run bundled scenarios and verify their golden values (exit 1 on mismatch)
    Repro {
        /// system1..system6, or all
        system: String,
        #[command(flatten)]
        output: OutputOptions,
        /// Override the smoothing constant (the goldens assume 1e-3)
        #[arg(long)]
        eps: Option<f64>,
    },
    /// Run every clause bundle a scenario file supplies inputs for
    Analyze {
        /// Path to a scenario JSON file
        scenario: PathBuf,
        #[command(flatten)]
        output: OutputOptions,
        /// Override the scenario's smoothing constant
        #[arg(long)]
        eps: Option<f64>,
        /// Treat references to missing channels as errors instead of skips
        #[arg(long)]
        strict: bool,
    },
    /// Check that a scenario file parses and validates (exit 0 when valid)
    Validate {
        /// Path to a scenario JSON file
        scenario: PathBuf,
        /// Also reject references to missing channels
        #[arg(long)]
        strict: bool,
    },
}

#[derive(Args)]
struct OutputOptions {
    /// Report format
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the report to a file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

impl From<Format> for ReportFormat {
    fn from(format: Format) -> Self {
        match format {
            Format::Text => ReportFormat::Text,
            Format::Json => ReportFormat::Json,
        }
    }
}

fn emit(output: CommandOutput, out_path: Option<&PathBuf>) -> ExitCode {
    if !output.stderr.is_empty() {
        let _ = std::io::stderr().write_all(output.stderr.as_bytes());
    }
    match out_path {
        Some(path) if !output.stdout.is_empty() => {
            if let Err(e) = std::fs::write(path, &output.stdout) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        _ => {
            let _ = std::io::stdout().write_all(output.stdout.as_bytes());
        }
    }
    ExitCode::from(output.exit_code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Repro {
            system,
            output,
            eps,
        } => {
            let result = runner::repro(&system, output.format.into(), eps);
            emit(result, output.out.as_ref())
        }
        Command::Analyze {
            scenario,
            output,
            eps,
            strict,
        } => {
            let result = runner::analyze(&scenario, output.format.into(), eps, strict);
            emit(result, output.out.as_ref())
        }
        Command::Validate { scenario, strict } => {
            let result = runner::validate(&scenario, strict);
            emit(result, None)
        }
    }
}
