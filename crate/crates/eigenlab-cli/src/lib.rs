//! Command-line front end: config parsing, subcommand dispatch,
//! deterministic seeding, and bit-stable structured output.
//!
//! Exit codes: 0 success, 2 configuration error, 3 numerical
//! non-convergence, 4 acceptance-threshold failure.

pub mod commands;
pub mod json;
pub mod output;

use clap::Parser;

use crate::json::Json;

/// Process-level error with its exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
    pub violations: Vec<String>,
}

impl CliError {
    pub fn config(message: impl Into<String>) -> Self {
        CliError { code: 2, message: message.into(), violations: Vec::new() }
    }

    pub fn config_with(message: impl Into<String>, violations: Vec<String>) -> Self {
        CliError { code: 2, message: message.into(), violations }
    }

    pub fn numerical(message: impl Into<String>) -> Self {
        CliError { code: 3, message: message.into(), violations: Vec::new() }
    }

    pub fn threshold(message: impl Into<String>) -> Self {
        CliError { code: 4, message: message.into(), violations: Vec::new() }
    }

    /// Structured rendering for stderr.
    pub fn render(&self) -> String {
        let mut obj = vec![
            ("error", Json::Str(self.message.clone())),
            ("exit_code", Json::Int(self.code as i64)),
        ];
        if !self.violations.is_empty() {
            obj.push((
                "violations",
                Json::Arr(self.violations.iter().map(|v| Json::Str(v.clone())).collect()),
            ));
        }
        Json::obj(obj).render()
    }
}

impl From<eigenlab::montecarlo::MonteCarloError> for CliError {
    fn from(err: eigenlab::montecarlo::MonteCarloError) -> Self {
        use eigenlab::montecarlo::MonteCarloError;
        match err {
            MonteCarloError::InvalidConfig { violations } => {
                CliError::config_with("invalid experiment config", violations)
            }
            MonteCarloError::Spectra(e) => CliError::numerical(e.to_string()),
            MonteCarloError::Variance(e) => From::from(e),
        }
    }
}

impl From<eigenlab::variance::VarianceError> for CliError {
    fn from(err: eigenlab::variance::VarianceError) -> Self {
        use eigenlab::variance::VarianceError;
        match err {
            VarianceError::NonConvergence { .. } => CliError::numerical(err.to_string()),
            other => CliError::config(other.to_string()),
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "eigenlab",
    about = "Numerical laboratory for eigenvalue fluctuation statistics of random matrices",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: commands::Command,
}

/// Parse `argv` and dispatch; the caller maps the error to an exit code.
pub fn run<I, S>(argv: I) -> Result<(), CliError>
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e)
            if matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            ) =>
        {
            print!("{e}");
            return Ok(());
        }
        Err(e) => return Err(CliError::config(e.to_string())),
    };
    commands::dispatch(cli.command)
}
