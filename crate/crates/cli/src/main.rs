//! Command-line front end: composes systems, observables, sequences, weights
//! and harnesses from flags or a JSON config, and emits CSV/JSON results.
//!
//! Exit codes are a stable scripting interface:
//!   0  success / verdict pass
//!   1  verify tolerance fail
//!   2  spec or config parse failure
//!   3  budget refusal
//!   4  hypothesis fail (witness printed)

mod config;
mod run;

use clap::Parser;

fn main() {
    let cli = config::Cli::parse();
    let code = match run::dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    std::process::exit(code);
}
