//! Batch front-end: config parsing, run orchestration, snapshot and CSV
//! persistence. The `snls` binary dispatches to `runner`.

pub mod config;
pub mod error;
pub mod runner;
pub mod snapshot;

pub use config::{parse_config, RunConfig};
pub use error::{CliError, Result};
