//! Command-line driver for `greenprop-core`.
//!
//! The binary is a thin wrapper around [`run`]; the output reader
//! [`output::read_output`] is public so scripts and tests can re-parse any file
//! the tool writes.

pub mod cli;
pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod suites;

use cli::{Cli, Command};
use error::CliResult;

pub fn run(args: &Cli) -> CliResult<()> {
    match &args.command {
        Command::Greens(a) => commands::greens(a),
        Command::Propagator(a) => commands::propagator(a),
        Command::Sweep(a) => commands::sweep(a),
        Command::Validate(a) => suites::validate(a),
        Command::SpecfunProbe(a) => commands::probe(a),
    }
}
