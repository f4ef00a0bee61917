use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

mod args;
mod certify;
mod fatpoints;
mod lemmas;
mod output;
mod table;

use args::{Cli, Command};
use lemmas::LemmaParams;

/// Errors that end a run with exit code 2.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(secant_core::Error),
    Io(String),
}

impl From<secant_core::Error> for CliError {
    fn from(e: secant_core::Error) -> Self {
        CliError::Core(e)
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(s) | CliError::Io(s) => f.write_str(s),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

fn run(cli: &Cli) -> Result<output::Report, CliError> {
    let common = &cli.common;
    match &cli.command {
        Command::Secdim { n, s } => table::secdim(common, *n, *s),
        Command::Table { n_min, n_max, s_max, methods, cap } => {
            table::table(common, *n_min, *n_max, *s_max, methods, *cap)
        }
        Command::Fatpoints { file, degree } => fatpoints::fatpoints(common, file, *degree),
        Command::Certify { n, s, cap, allow_bound_only } => certify::certify(common, *n, *s, *cap, *allow_bound_only),
        Command::Lemmas { which, m, x, y, i, n, n_min, n_max, v2, count } => lemmas::lemmas(
            common,
            &LemmaParams {
                which: *which,
                m: *m,
                x: *x,
                y: *y,
                i: *i,
                n: *n,
                n_min: *n_min,
                n_max: *n_max,
                v2: *v2,
                count: *count,
            },
        ),
    }
}

fn write_data(cli: &Cli, data: &str) -> std::io::Result<()> {
    match &cli.common.output {
        Some(path) => std::fs::write(path, data),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(data.as_bytes())?;
            out.flush()
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .target(env_logger::Target::Stderr)
        .init();
    let cli = Cli::parse();
    let report = match run(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if let Err(e) = write_data(&cli, &report.data) {
        eprintln!("error: cannot write output: {e}");
        return ExitCode::from(2);
    }
    if let Some(s) = &report.summary {
        eprintln!("{s}");
    }
    if report.matches {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
