use std::process::ExitCode;

use auxferm_cli::{run, Cli};
use clap::Parser;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report = match run(&cli.command) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code());
        }
    };
    if let Some(dir) = cli.command.out_dir() {
        if let Err(e) = report.write_files(dir) {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code());
        }
    }
    print!("{}", report.stdout);
    if report.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
