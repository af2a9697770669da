//! `erdos`: command-line front end for the alternating prime series and
//! Chebyshev-remainder library. Usage errors exit 2, computation errors
//! exit 1 with a one-line diagnostic on stderr.

mod args;
mod emit;
mod run;

use clap::Parser;
use std::process;

fn main() {
    let cli = args::Cli::parse();
    match run::dispatch(cli) {
        Ok(()) => {}
        Err(run::Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            process::exit(2);
        }
        Err(run::Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            process::exit(1);
        }
    }
}
