//! Batch front end for `curvimom`: run configuration, spec-string parsing,
//! the report commands and the `check` invariant suites.
//!
//! Commands return an [`Outcome`] (captured stdout plus exit code) so they can
//! be driven from tests without spawning a process.

use std::fmt;

pub mod check;
pub mod commands;
pub mod config;
pub mod parse;

pub mod exit {
    pub const SUCCESS: u8 = 0;
    pub const SUITE_FAILURE: u8 = 1;
    pub const USAGE: u8 = 2;
    pub const NOT_REAL: u8 = 3;
    pub const SINGULAR: u8 = 4;
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub code: u8,
}

/// A run that produced no report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            code: exit::USAGE,
            message: message.into(),
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for Failure {}

impl From<curvimom::Error> for Failure {
    fn from(err: curvimom::Error) -> Self {
        let code = match err {
            curvimom::Error::Singularity { .. } => exit::SINGULAR,
            _ => exit::USAGE,
        };
        Self {
            code,
            message: err.to_string(),
        }
    }
}
