//! The `ns2` command-line tool: option parsing, the result cache and report
//! emission. [`run`] is the whole program minus process exit.

pub mod args;
pub mod cache;
pub mod commands;
pub mod emit;

use std::ffi::OsString;

use clap::Parser;

use crate::args::Cli;
use crate::cache::{digest, Cache};
use crate::commands::{CliError, Report, Request};

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_UNVERIFIED: u8 = 3;

/// What a run produced: the exit status and the text for stdout.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub status: u8,
    pub stdout: String,
}

/// Parses arguments, consults the cache, evaluates and renders.
/// Diagnostics go to stderr.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let status = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                eprint!("{text}");
                return Outcome { status, stdout: String::new() };
            }
            return Outcome { status, stdout: text };
        }
    };
    match execute(&cli) {
        Ok(out) => out,
        Err(e) => {
            eprintln!("ns2: error: {e}");
            Outcome { status: EXIT_USAGE, stdout: String::new() }
        }
    }
}

fn execute(cli: &Cli) -> Result<Outcome, CliError> {
    let request = Request::from_cli(cli)?;
    let key = request.key();
    let cache = Cache::open(cli.opts.cache_dir.clone());
    let report = match cache.load(&key) {
        Some(hit) => {
            eprintln!("ns2: cache hit {}", digest(&key));
            Report { payload: hit.payload, verified: hit.verified }
        }
        None => {
            let report = request.run()?;
            if let Err(e) = cache.store(&key, &report.payload, report.verified) {
                eprintln!("ns2: warning: {e}");
            }
            report
        }
    };
    let stdout = emit::render(&report.payload, cli.opts.format, request.table())?;
    let status = if report.verified { EXIT_OK } else { EXIT_UNVERIFIED };
    Ok(Outcome { status, stdout })
}
