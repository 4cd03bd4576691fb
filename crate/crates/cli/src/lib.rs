//! Config parsing, experiment execution, and CSV emission behind the
//! `wipt-sim` binary. Kept as a library so the pieces stay testable.

// Guards use `!(x > 0.0)` on purpose: NaN must fail validation too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod run;

use thiserror::Error;

/// CLI failure classes, mapped one-to-one onto exit codes.
#[derive(Debug, Error)]
pub enum CliError {
    /// Bad preset name, unparsable or invalid configuration (exit 2).
    #[error("{0}")]
    Config(String),
    /// Output could not be written or input read (exit 3).
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Io(_) => 3,
        }
    }

    pub(crate) fn from_core(err: wipt_core::Error) -> Self {
        CliError::Config(err.to_string())
    }
}
