use std::process::ExitCode;

use clap::Parser;
use clover_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match run(&cli).and_then(|o| o.emit().map(|()| o)) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code());
        }
    };
    match outcome.failure {
        None => ExitCode::SUCCESS,
        Some(why) => {
            eprintln!("tolerance not met: {why}");
            ExitCode::from(1)
        }
    }
}
