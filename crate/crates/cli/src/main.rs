//! `noncomm`: command-line front end for the noncommuting-operator
//! hydrogenlike solver.
//!
//! Exit codes: 0 success, 1 usage or solver error, 2 no bound state,
//! 3 oracle disagreement.

mod args;
mod commands;
mod table;

use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::Cli;
use commands::Failure;

const EXIT_USAGE: u8 = 1;
const EXIT_NO_BOUND_STATE: u8 = 2;
const EXIT_DISAGREEMENT: u8 = 3;

fn fail(code: u8, message: &str) -> ExitCode {
    eprintln!("error: {message}");
    ExitCode::from(code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_USAGE),
            };
        }
    };
    let config = match cli.config() {
        Ok(c) => c,
        Err(msg) => return fail(EXIT_USAGE, &msg),
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(config.threads).build() {
        Ok(p) => p,
        Err(e) => return fail(EXIT_USAGE, &e.to_string()),
    };

    let outcome = match pool.install(|| commands::run(&cli.command, &config.solver)) {
        Ok(o) => o,
        Err(Failure::Usage(msg)) => return fail(EXIT_USAGE, &msg),
        Err(Failure::Numerical(msg)) => return fail(EXIT_USAGE, &msg),
        Err(Failure::NoBoundState { n, l, alpha_z }) => {
            let report = serde_json::json!({
                "error": "no bound state",
                "n": n,
                "l": l,
                "alphaZ": alpha_z,
            });
            eprintln!("{report}");
            return ExitCode::from(EXIT_NO_BOUND_STATE);
        }
    };

    let text = outcome.table.render(config.format.unwrap_or(outcome.default_format));
    let written = match &config.output {
        Some(path) => std::fs::write(path, text.as_bytes()),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        return fail(EXIT_USAGE, &format!("cannot write output: {e}"));
    }
    if outcome.missing_rows > 0 {
        eprintln!(
            "warning: {} of {} rows have no bound state",
            outcome.missing_rows,
            outcome.table.rows.len()
        );
    }
    if outcome.disagreement {
        return ExitCode::from(EXIT_DISAGREEMENT);
    }
    ExitCode::SUCCESS
}
