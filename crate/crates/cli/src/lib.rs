//! Command-line front end for `fragfhe`: file formats, the benchmark
//! runner and subcommand dispatch.

pub mod bench;
pub mod cli;
pub mod format;

pub use cli::{run, CliError};
