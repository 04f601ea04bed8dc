//! Command-line front end: run files, overrides, execution and output.

pub mod config;
pub mod error;
pub mod output;
pub mod run;

pub use config::{parse_config, Command, OutputFormat, Overrides, RunConfig};
pub use error::CliError;
pub use output::write_outputs;
pub use run::{execute, RunOutput, RunResult};
