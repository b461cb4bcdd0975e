use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use derange_cli::{execute, Cli, CliError};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report = match execute(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    for f in &report.failures {
        eprintln!("failure: {f}");
    }
    let written = match &cli.out {
        Some(path) => std::fs::write(path, &report.body).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        }),
        None => std::io::stdout()
            .lock()
            .write_all(report.body.as_bytes())
            .map_err(|source| CliError::Io {
                path: "stdout".into(),
                source,
            }),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(report.exit_code() as u8)
}
