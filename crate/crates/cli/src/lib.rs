//! File formats, output writers and subcommands behind the `fescr` binary.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod scenario_file;
pub mod scenarios;

pub use commands::{cmd_bench, cmd_run, exit_code, BenchOptions, BenchReport, RunOptions, RunReport};
pub use config::ConfigFile;
pub use error::CliError;
pub use scenario_file::ScenarioFile;
