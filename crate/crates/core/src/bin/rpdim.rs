use std::process::ExitCode;

use clap::Parser;
use rpdim::cli::{run, Cli};

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let command_line: Vec<String> = std::env::args().collect();
    let cli = Cli::parse();
    run(&cli, &command_line, &mut std::io::stdout().lock())
}
