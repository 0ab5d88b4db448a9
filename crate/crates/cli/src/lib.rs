//! Library side of the `credit` binary: config parsing, pipeline
//! orchestration, bundle persistence and the run manifest. The binary in
//! `main.rs` is a thin argument-parsing shell over this.

pub mod bundle;
pub mod commands;
pub mod config;
pub mod manifest;
pub mod pipeline;

use std::fmt;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Data(String),
    Internal(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) | CliError::Data(msg) | CliError::Internal(msg) => {
                write!(f, "{msg}")
            }
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
            CliError::Internal(_) => 3,
        }
    }
}

impl From<credit_core::Error> for CliError {
    fn from(err: credit_core::Error) -> Self {
        CliError::Data(err.to_string())
    }
}
