//! `ctap` command-line driver.

mod config;
mod evolve;
mod triple;
mod yields;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(
    name = "ctap",
    version,
    about = "Yield and propagation studies for implanted donor triples"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sample a donor population and report the CTAP-time yield.
    Yield(yields::YieldArgs),
    /// Integrate the three-site Schrödinger equation for one schedule.
    Evolve(evolve::EvolveArgs),
    /// Metrics for one explicit donor triple.
    Triple(triple::TripleArgs),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                e.exit();
            }
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or("invalid arguments");
            eprintln!("error: {}", first.trim_start_matches("error: "));
            return ExitCode::from(2);
        }
    };
    let result = match cli.command {
        Command::Yield(args) => yields::run(args),
        Command::Evolve(args) => evolve::run(args),
        Command::Triple(args) => triple::run(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", format!("{e:#}").replace('\n', " "));
            ExitCode::FAILURE
        }
    }
}
