use std::process::ExitCode;

use clap::Parser;
use usd_cli::{emit, run, Cli, CliError};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|r| {
        emit(&r, cli.out.as_deref())?;
        if r.passed {
            Ok(())
        } else {
            Err(CliError::Verification("see report".into()))
        }
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("usd: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
