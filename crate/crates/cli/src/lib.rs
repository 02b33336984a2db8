//! Command-line front end for `salpeter-core`.
//!
//! [`parse_config`] turns `argv` (plus an optional config file) into a
//! validated [`RunConfig`]; [`run`] executes it and returns the rendered
//! report; [`execute`] ties both together with exit codes
//! (0 success, 1 numeric failure, 2 usage error).

pub mod commands;
pub mod config;
pub mod report;

use thiserror::Error;

pub use commands::run;
pub use config::{parse_config, Command, Format, RunConfig};

#[derive(Debug, Error)]
pub enum CliError {
    /// Help or version text requested; not a failure.
    #[error("{0}")]
    Help(String),

    /// Bad flags, config keys or violated preconditions.
    #[error("{0}")]
    Usage(String),

    /// The computation itself failed (no lower bound, quadrature did not converge, ...).
    #[error("{0}")]
    Numeric(salpeter_core::Error),

    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Help(_) => 0,
            CliError::Usage(_) => 2,
            CliError::Numeric(_) | CliError::Io(_) => 1,
        }
    }
}

impl From<salpeter_core::Error> for CliError {
    /// Precondition failures are usage errors; everything else is numeric.
    fn from(e: salpeter_core::Error) -> Self {
        use salpeter_core::Error as E;
        match e {
            E::Domain(_) | E::InvalidRange(_) | E::Unsupported(_) => CliError::Usage(e.to_string()),
            _ => CliError::Numeric(e),
        }
    }
}

/// Result of one invocation: exit code plus what went to stdout and stderr.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parses `argv`, runs the command and writes the report to `--output` if set.
/// Never panics on bad input; failures are reported through the exit code.
pub fn execute<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let result = parse_config(argv).and_then(|config| {
        let text = run(&config)?;
        match &config.output {
            Some(path) => {
                std::fs::write(path, &text)?;
                Ok(String::new())
            }
            None => Ok(text),
        }
    });
    match result {
        Ok(stdout) => Outcome { code: 0, stdout, stderr: String::new() },
        Err(CliError::Help(text)) => Outcome { code: 0, stdout: text, stderr: String::new() },
        Err(e) => Outcome { code: e.exit_code(), stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}
