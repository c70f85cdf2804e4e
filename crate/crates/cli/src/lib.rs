//! Command-line front end: chart ingestion, rasterization, planning and
//! comparison runs with file artifacts.

pub mod args;
pub mod commands;
pub mod output;

pub use args::Cli;
pub use commands::{run, CliError};
