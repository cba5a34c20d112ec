//! Command-line driver for the `entloc` scans, fits and checks.
//!
//! Exit codes: 0 on success, 1 for usage, configuration or input errors,
//! 2 when a numerical routine fails.

use std::ffi::OsString;

use clap::Parser;

pub mod args;
mod commands;
pub mod config;
pub mod emit;

use args::Cli;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("configuration: {0}")]
    Config(String),
    #[error("input: {0}")]
    Input(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Numerical(#[from] entloc::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Numerical(_) => 2,
            _ => 1,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Config(_) => "config_parse",
            CliError::Input(_) => "input",
            CliError::Io(_) => "io",
            CliError::Numerical(_) => "numerical_failure",
        }
    }
}

fn thread_count(cli: &Cli) -> Result<Option<usize>, CliError> {
    if let Some(n) = cli.threads {
        return Ok(Some(n as usize));
    }
    match std::env::var("ENTLOC_THREADS") {
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(Some(n)),
            _ => Err(CliError::Usage(format!(
                "ENTLOC_THREADS must be a positive integer, got '{s}'"
            ))),
        },
        Err(_) => Ok(None),
    }
}

fn execute(argv: Vec<OsString>) -> Result<(), CliError> {
    let argv = config::expand(argv)?;
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            // help and version requests
            print!("{e}");
            return Ok(());
        }
        Err(e) => return Err(CliError::Usage(e.to_string())),
    };
    match thread_count(&cli)? {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| CliError::Usage(e.to_string()))?;
            pool.install(|| commands::dispatch(&cli.command))
        }
        None => commands::dispatch(&cli.command),
    }
}

/// Runs one invocation; `argv[0]` is the program name.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    match execute(argv.into_iter().map(Into::into).collect()) {
        Ok(()) => 0,
        Err(e) => {
            let report = serde_json::json!({ "error": e.kind(), "message": e.to_string() });
            eprintln!("{report}");
            e.exit_code()
        }
    }
}
