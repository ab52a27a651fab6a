//! Front end for the `gwdeco` binary: scenario configuration, CSV runs and
//! the validation suite.

pub mod config;
pub mod error;
pub mod runner;
pub mod validate;

pub use config::{Scenario, ScenarioConfig};
pub use error::CliError;

/// Environment variable holding the worker thread count.
pub const THREADS_ENV: &str = "GWDECO_THREADS";

/// Thread count requested through [`THREADS_ENV`], if any.
pub fn threads_from_env() -> Result<Option<usize>, CliError> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(CliError::Config(format!("{THREADS_ENV}: expected a positive integer, got `{v}`"))),
        },
    }
}
