use std::process::ExitCode;

use bbsplit::cli::{run, Cli};
use clap::Parser;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("bbsplit: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
