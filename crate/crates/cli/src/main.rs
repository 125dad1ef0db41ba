use std::process::ExitCode;

use clap::Parser;
use ml2v_cli::commands::EXIT_NUMERIC;
use ml2v_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_NUMERIC as u8)
        }
    }
}
