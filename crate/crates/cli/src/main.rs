use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use gwdeco_cli::error::{CliError, EXIT_CONFIG};
use gwdeco_cli::validate::{self, Level};
use gwdeco_cli::{runner, threads_from_env, ScenarioConfig};

/// Spin decoherence of massive particles crossing a plane gravitational wave.
///
/// Set GWDECO_THREADS to fix the worker thread count.
#[derive(Parser)]
#[command(name = "gwdeco", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Proper-time series for one configuration.
    Scenario {
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Entanglement swapping ladder driven by ū at tau_f.
    SwapLadder {
        config: PathBuf,
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the invariant suite.
    Validate {
        #[arg(long, default_value = "quick")]
        level: Level,
    },
    /// Repeat a scenario over values of one configuration field.
    Sweep {
        config: PathBuf,
        /// Dotted field path, e.g. waveform.amplitude
        #[arg(long)]
        param: String,
        /// Comma-separated JSON values
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::io(path, e)),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::io(std::path::Path::new("<stdout>"), e)),
    }
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    if let Some(n) = threads_from_env()? {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Config(e.to_string()))?;
    }
    match cli.command {
        Command::Scenario { config, out } => {
            let s = ScenarioConfig::load(&config)?.validate()?;
            emit(&runner::run_scenario(&s)?.to_csv(), Some(&out))?;
        }
        Command::SwapLadder { config, depth, out } => {
            let s = ScenarioConfig::load(&config)?.validate()?;
            emit(&runner::run_swap_ladder(&s, depth)?.to_csv(), out.as_ref())?;
        }
        Command::Validate { level } => {
            let report = validate::validate(level);
            print!("{}", report.render());
            if !report.passed() {
                return Ok(ExitCode::from(EXIT_CONFIG as u8));
            }
        }
        Command::Sweep {
            config,
            param,
            values,
            out,
        } => {
            let cfg = ScenarioConfig::load(&config)?;
            cfg.validate()?;
            emit(&runner::sweep(&cfg, &param, &values)?, out.as_ref())?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("gwdeco: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
