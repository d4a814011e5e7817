use std::process::ExitCode;

use clap::Parser;
use evidiff_service::cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli, &mut std::io::stdout().lock()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("evidiff: {e}");
            ExitCode::FAILURE
        }
    }
}
