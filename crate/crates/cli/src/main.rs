//! `ajscc` command-line entry point.
//!
//! Errors go to standard error as one line `ERROR:<code>:<message>`. Exit
//! status is 0 on success, 2 for usage errors and 1 for everything else.

mod args;
mod commands;
mod config;
mod report;

use std::ffi::OsString;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{CommandFactory, FromArgMatches};
use thiserror::Error;

use args::Cli;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] ajscc_core::Error),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    fn code(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Core(e) => e.code(),
            CliError::Io(_) => "io",
        }
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

fn usage(e: &clap::Error) -> CliError {
    let rendered = e
        .kind()
        .as_str()
        .map_or_else(|| e.to_string(), str::to_string);
    let first = e
        .to_string()
        .lines()
        .find(|l| !l.trim().is_empty())
        .map(|l| l.trim_start_matches("error: ").to_string())
        .unwrap_or(rendered);
    CliError::Usage(first)
}

fn run(argv: Vec<OsString>) -> Result<(), CliError> {
    let cmd = Cli::command();
    let argv = config::merge(argv, &cmd)?;
    let matches = match cmd.try_get_matches_from(argv) {
        Ok(m) => m,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            e.print().map_err(|e| CliError::Io(e.to_string()))?;
            return Ok(());
        }
        Err(e) => return Err(usage(&e)),
    };
    let cli = Cli::from_arg_matches(&matches).map_err(|e| usage(&e))?;
    let report = commands::run(&cli.command, cli.common.seed)?;
    let bytes = report.render(cli.common.format)?;
    report::emit(&bytes, cli.common.out.as_deref())
}

fn main() -> ExitCode {
    match run(std::env::args_os().collect()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let msg = e.to_string().replace('\n', " ");
            eprintln!("ERROR:{}:{msg}", e.code());
            ExitCode::from(e.exit_code())
        }
    }
}
