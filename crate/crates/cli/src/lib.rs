//! Config-driven runner for the `griffiths-core` checks.
//!
//! Exit codes: 0 when every report passes, 1 when a check reports a
//! violation, 2 for configuration and IO errors.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod checks;
pub mod config;
pub mod output;
pub mod run;

pub use checks::CheckId;
pub use config::{Experiment, ExperimentConfig};
pub use run::{cone, sweep, verify, Outputs, SweepParam};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error(transparent)]
    Model(#[from] griffiths_core::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn from_model(e: griffiths_core::Error) -> Self {
        CliError::Model(e)
    }
}
