//! Command-line driver for the `roundlab-core` experiments.
//!
//! Each subcommand runs one experiment family and emits a versioned record
//! stream (see [`report`]); `suite` runs every acceptance check.

pub mod cli;
pub mod experiments;
pub mod report;
pub mod suite;

pub use cli::{execute, Cli, Command, Execution, DISPATCH};
pub use report::{parse_records, render_records, render_table, Record, SCHEMA};
