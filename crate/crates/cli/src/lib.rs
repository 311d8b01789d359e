//! Batch front-end for divisibility scans: JSON configs in, JSON reports and
//! CSV time series out.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod report;

pub use commands::{execute, run, run_from_path, Command, Overrides, Written};
pub use config::RunConfig;
pub use error::{CliError, CliResult};
pub use report::{Report, TimeRecord, WitnessInterval};
