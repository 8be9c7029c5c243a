use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use folner_cli::{execute, Cli, EXIT_INPUT};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = execute(&cli);
    for line in &outcome.notices {
        eprintln!("{line}");
    }
    let written = match &cli.output {
        Some(path) => std::fs::write(path, &outcome.body),
        None => std::io::stdout().write_all(outcome.body.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write output: {e}");
        return ExitCode::from(EXIT_INPUT as u8);
    }
    ExitCode::from(outcome.code as u8)
}
