//! `trendtest`: constancy-of-mean testing, change-point segmentation,
//! simulation tables, and long-run scale estimation over CSV series.
//!
//! Exit codes: 0 success, 2 input error (also used by the argument parser),
//! 3 degenerate data, 4 illegal configuration.

mod args;
mod commands;
mod input;
mod output;

use clap::Parser;
use trendtest_core::Error;

fn main() {
    let cli = match args::Cli::try_parse() {
        Ok(cli) => cli,
        // Prints help/version to stdout with exit 0, usage errors to stderr
        // with exit 2.
        Err(e) => e.exit(),
    };
    match commands::run(cli) {
        Ok(rendered) => {
            if let Some(path) = rendered.output {
                if let Err(e) = std::fs::write(&path, rendered.doc) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    std::process::exit(2);
                }
            } else {
                print!("{}", rendered.doc);
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(match e {
                Error::Input(_) => 2,
                Error::Degenerate(_) => 3,
                Error::Config(_) => 4,
            });
        }
    }
}
