//! Command-line front end: one subcommand per experiment, outputs named
//! `{experiment}-{n}-{beta}-{seed}.{csv,json}` under `--out-dir`.
//!
//! Exit status: 0 pass, 1 usage or configuration error, 2 experiment
//! failed (report still written), 3 I/O error.

pub mod args;
pub mod commands;
pub mod gspec;
pub mod output;

use std::ffi::OsString;

use clap::error::ErrorKind;
use clap::Parser;

pub use args::Cli;
pub use commands::{execute, CliError, RunConfig};
pub use gspec::g_spec_parse;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_FAIL: i32 = 2;
pub const EXIT_IO: i32 = 3;

pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    print!("{e}");
                    EXIT_PASS
                }
                _ => {
                    let text = e.to_string();
                    eprintln!("{}", text.lines().next().unwrap_or("error: invalid arguments"));
                    EXIT_USAGE
                }
            };
        }
    };
    let cfg = match RunConfig::from_cli(&cli) {
        Ok(cfg) => cfg,
        Err(e) => return report_error(e),
    };
    match execute(&cfg) {
        Ok(outcome) => {
            if !cli.common.quiet {
                let files: Vec<String> = outcome.files.iter().map(|p| p.display().to_string()).collect();
                println!(
                    "{}: {} [{}]",
                    cfg.name,
                    if outcome.pass { "pass" } else { "FAIL" },
                    files.join(", ")
                );
            }
            if outcome.pass {
                EXIT_PASS
            } else {
                EXIT_FAIL
            }
        }
        Err(e) => report_error(e),
    }
}

fn report_error(e: CliError) -> i32 {
    match e {
        CliError::Config(msg) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
        CliError::Io(msg) => {
            eprintln!("error: {msg}");
            EXIT_IO
        }
    }
}
