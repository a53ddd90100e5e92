use std::process::ExitCode;

use clap::Parser;
use coha_cli::{run_and_write, Cli, RunConfig};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = RunConfig::from_cli(&cli).and_then(|config| run_and_write(&config));
    match outcome {
        Ok(o) if o.passed => ExitCode::SUCCESS,
        Ok(_) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
