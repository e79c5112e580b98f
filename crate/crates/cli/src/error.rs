use std::fmt::Display;

use thiserror::Error;

/// Failures that stop a command before it can produce a report.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CliError {
    /// Malformed scenario, flag or request. Exit code 2.
    #[error("{0}")]
    Input(String),
    /// The surface is degenerate for the request: a vanishing invariant or
    /// a singular frame. Exit code 3.
    #[error("{0}")]
    Degenerate(String),
}

impl CliError {
    pub(crate) fn field(path: &str, message: impl Display) -> Self {
        CliError::Input(format!("{path}: {message}"))
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Degenerate(_) => 3,
        }
    }
}

impl From<jetinv::Error> for CliError {
    fn from(e: jetinv::Error) -> Self {
        match e {
            jetinv::Error::SingularFrame(_) | jetinv::Error::VanishingInvariant(_) => CliError::Degenerate(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}
