//! Library side of the `nagao` command: family configuration, record
//! persistence and the subcommands.

pub mod commands;
pub mod config;
pub mod error;
pub mod store;

pub use error::{CliError, CliResult};
