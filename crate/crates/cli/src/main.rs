//! `cycnorm`: build cyclotomic schemes over finite rings, compute their
//! automorphism groups, classify normality and run the property suites.
//!
//! Exit status: 0 when everything is consistent, 1 on a mismatch or a
//! failed check, 2 on bad input.

mod args;
mod commands;
mod output;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use args::Cli;

/// Errors caused by the input rather than by the computation.
fn is_input_error(err: &anyhow::Error) -> bool {
    use cycnorm_core::Error;
    match err.downcast_ref::<Error>() {
        Some(Error::Internal(_)) | Some(Error::NotAScheme(_)) => false,
        Some(_) => true,
        None => err.downcast_ref::<args::InputError>().is_some(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = Vec::new();
    let result = commands::run(&cli, &mut out);
    let written = match &cli.output {
        Some(path) => std::fs::write(path, &out),
        None => std::io::stdout().lock().write_all(&out),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(if is_input_error(&e) { 2 } else { 1 })
        }
    }
}
