use std::process::ExitCode;

use clap::Parser;
use experiment_cli::{run_cli, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run_cli(&cli, &mut std::io::stdout()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
