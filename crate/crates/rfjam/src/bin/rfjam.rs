//! Thin entry point for the `rfjam` CLI.

use clap::Parser;
use rfjam::cli::{run, Cli};

fn main() {
    std::process::exit(run(Cli::parse()));
}
