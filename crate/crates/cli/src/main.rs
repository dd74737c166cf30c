//! `records`: command-line front end for records-core.
//!
//! Exit codes: 0 success, 1 a check failed or a computation gave up,
//! 2 bad arguments.

mod args;
mod commands;
mod eval;
mod parse;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // help and version go to stdout with 0; real errors exit 2
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let result = match &cli.command {
        Command::Eval(a) => eval::run(a),
        Command::Simulate(a) => commands::simulate(a),
        Command::Kl(a) => commands::kl(a),
        Command::Verify(a) => commands::verify(a),
        Command::Converge(a) => commands::converge(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code())
        }
    }
}
