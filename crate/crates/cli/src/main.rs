//! Command-line front end. Every answering command prints a JSON verdict on
//! standard output; the exit code is 0 for YES, 10 for NO, 1 for usage or
//! format errors and 2 when a size guard trips.

mod commands;

use std::process::ExitCode;

use clap::Parser;

use commands::Cli;

const EXIT_USAGE: u8 = 1;
const EXIT_GUARD: u8 = 2;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match commands::run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            let guard = e
                .downcast_ref::<naturegames::Error>()
                .is_some_and(naturegames::Error::is_guard);
            ExitCode::from(if guard { EXIT_GUARD } else { EXIT_USAGE })
        }
    }
}
