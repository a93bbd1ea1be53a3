//! Library half of the command line front end: scenario parsing, CSV
//! reports, the command implementations, and the acceptance-criteria suite.

pub mod commands;
pub mod report;
pub mod scenario;
pub mod validation;

use std::process::ExitCode;

/// Process exit codes: 0 success, 1 usage/parse error, 2 solver fault,
/// 3 comparison (or validation) failure.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Solver(String),
    #[error("{0}")]
    Comparison(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Usage(_) => ExitCode::from(1),
            CliError::Solver(_) => ExitCode::from(2),
            CliError::Comparison(_) => ExitCode::from(3),
        }
    }
}

impl From<cfc_tlm_core::Error> for CliError {
    fn from(err: cfc_tlm_core::Error) -> Self {
        match err {
            cfc_tlm_core::Error::Solver(m) | cfc_tlm_core::Error::NonFinite(m) => {
                CliError::Solver(m)
            }
            cfc_tlm_core::Error::Config(m) | cfc_tlm_core::Error::Domain(m) => CliError::Usage(m),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::Usage(err.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;
