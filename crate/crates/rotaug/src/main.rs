use std::process::ExitCode;

use clap::Parser;
use rotaug::cli::{dispatch, Cli};

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if e.exit_code() == 2 {
                eprintln!("run `rotaug --help` for usage");
            }
            ExitCode::from(e.exit_code())
        }
    }
}
