mod cli;
mod commands;
mod config;
mod grid;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use qgrav::constants::Constants;

use cli::Cli;
use commands::Context;

/// Directory for output files when `--output` is omitted or relative.
const OUTPUT_DIR_ENV: &str = "QGRAV_OUTPUT_DIR";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Model(#[from] qgrav::Error),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    fn name(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "UsageError",
            CliError::Model(e) => e.name(),
            CliError::Io(_) => "IoError",
        }
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

fn constants(cli: &Cli) -> Result<Constants, CliError> {
    let mut k = Constants::SI;
    for (name, value, slot) in [
        ("G", cli.g, &mut k.g),
        ("hbar", cli.hbar, &mut k.hbar),
        ("c", cli.c, &mut k.c),
    ] {
        if let Some(v) = value {
            if !(v.is_finite() && v > 0.0) {
                return Err(CliError::Usage(format!(
                    "--{name} must be finite and positive, got {v}"
                )));
            }
            *slot = v;
        }
    }
    Ok(k)
}

fn destination(cli: &Cli) -> Option<PathBuf> {
    let dir = std::env::var_os(OUTPUT_DIR_ENV).map(PathBuf::from);
    match (&cli.output, dir) {
        (Some(p), _) if p.as_os_str() == "-" => None,
        (Some(p), Some(dir)) if p.is_relative() => Some(dir.join(p)),
        (Some(p), _) => Some(p.clone()),
        (None, Some(dir)) => {
            Some(dir.join(format!("{}.{}", cli.command.name(), cli.format.extension())))
        }
        (None, None) => None,
    }
}

fn execute(argv: Vec<String>) -> Result<(), CliError> {
    let argv = config::merge(argv).map_err(CliError::Usage)?;
    let cli = Cli::try_parse_from(argv).map_err(|e| CliError::Usage(e.to_string()))?;
    let ctx = Context {
        seed: cli.seed,
        constants: constants(&cli)?,
    };
    let report = commands::run(&cli.command, &ctx)?;
    let bytes = report.render(cli.format).map_err(CliError::Io)?;
    match destination(&cli) {
        Some(path) => std::fs::write(&path, bytes)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => std::io::stdout()
            .write_all(&bytes)
            .map_err(|e| CliError::Io(e.to_string())),
    }
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    // Help and version requests print normally and succeed.
    if let Err(e) = Cli::try_parse_from(&argv) {
        use clap::error::ErrorKind;
        if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
    }
    match execute(argv) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let record = serde_json::json!({
                "error": e.name(),
                "message": e.to_string().trim_end(),
                "exit_code": e.exit_code(),
            });
            eprintln!("{record}");
            ExitCode::from(e.exit_code())
        }
    }
}
