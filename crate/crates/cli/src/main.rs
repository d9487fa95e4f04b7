use clap::Parser;
use std::process::ExitCode;

use greenprop_cli::cli::Cli;
use greenprop_cli::error::exit;

fn main() -> ExitCode {
    match greenprop_cli::run(&Cli::parse()) {
        Ok(()) => ExitCode::from(exit::OK),
        Err(e) => {
            eprintln!("greenprop: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
