mod args;
mod bench;
mod commands;
mod output;
mod verify;

use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::Parser;
use liouville_core::{Error, Limits};

use args::Cli;

const EXIT_DOMAIN: u8 = 1;
const EXIT_RESOURCE: u8 = 2;
const EXIT_VALIDATION: u8 = 3;

const DEFAULT_SEED: u64 = 0x5eed;

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Domain(_) | Error::Undecidable(_) => EXIT_DOMAIN,
        Error::ResourceLimit { .. } => EXIT_RESOURCE,
        Error::Validation(_) => EXIT_VALIDATION,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_VALIDATION),
            };
        }
    };
    if let Some(w) = cli.workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(w as usize).build_global() {
            eprintln!("error: cannot start worker pool: {e}");
            return ExitCode::from(EXIT_RESOURCE);
        }
    }
    let limits = match cli.sieve_budget {
        Some(b) => Limits::with_sieve_budget(b),
        None => Limits::default(),
    };
    let request = serde_json::to_value(&cli.command).expect("request serializes");
    let seed = cli.seed.unwrap_or(DEFAULT_SEED);
    let start = Instant::now();
    match commands::run(&cli.command, &limits, seed) {
        Ok(outcome) => {
            let text = output::render(cli.output, &request, &outcome, start.elapsed());
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::FAILURE;
            }
            if outcome.failed {
                ExitCode::from(EXIT_DOMAIN)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
