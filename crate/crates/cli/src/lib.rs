//! Command-line front end of `readset-dist`.
//!
//! Each subcommand is a plain function returning the text it wrote, so the
//! commands can be driven from tests without spawning the binary.

pub mod args;
pub mod commands;

use anyhow::Result;

pub use args::{Cli, Command};

/// Runs one parsed command line.
pub fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Simulate(a) => {
            let written = commands::simulate(a)?;
            log::info!("wrote {} read files", written.len());
        }
        Command::Dist(a) => {
            commands::dist(a)?;
        }
        Command::Cluster(a) => {
            commands::cluster(a)?;
        }
        Command::Eval(a) => {
            commands::eval(a)?;
        }
        Command::Pipeline(a) => {
            let report = commands::pipeline(a)?;
            commands::write_output(None, &report)?;
        }
        Command::Family(a) => {
            commands::family(a)?;
        }
    }
    Ok(())
}
