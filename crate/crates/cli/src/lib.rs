//! Command-line front end for `lame-core`.
//!
//! Exit codes: 0 success, 1 a validation threshold failed (the report is
//! still written), 2 usage error, 3 numerical or I/O failure.

use std::ffi::OsString;
use std::io::Write;
use std::path::Path;

use clap::Parser;
use lame_core::Modulus;

pub mod args;
pub mod commands;
pub mod output;
pub mod validate;

use args::{Cli, Command};
use output::Document;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Numerical(_) | CliError::Io(_) => EXIT_NUMERICAL,
        }
    }
}

impl From<lame_core::Error> for CliError {
    fn from(e: lame_core::Error) -> Self {
        use lame_core::Error as E;
        match e {
            E::ModulusOutOfRange { .. } | E::ArgumentOutOfRange { .. } => CliError::Usage(e.to_string()),
            other => CliError::Numerical(other.to_string()),
        }
    }
}

/// What a command produced.
#[derive(Debug)]
pub struct Outcome {
    pub doc: Document,
    pub passed: bool,
    pub warnings: Vec<String>,
}

impl Outcome {
    fn ok(doc: Document) -> Self {
        Self { doc, passed: true, warnings: Vec::new() }
    }
}

/// `m` as given on the command line, checked to lie in `[0, 1]`.
pub fn modulus(m: f64) -> Result<Modulus, CliError> {
    Ok(Modulus::from_m(m)?)
}

fn execute(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<bool, CliError> {
    let (outcome, common) = match &cli.command {
        Command::Edges(a) => (commands::edges(a)?, &a.common),
        Command::Dispersion(a) => {
            if a.plot && (a.common.out.is_none() || a.common.format != args::Format::Csv) {
                return Err(CliError::Usage("--plot needs --out and --format csv".into()));
            }
            (commands::dispersion(a)?, &a.common)
        }
        Command::Wavefunction(a) => (commands::wavefunction(a)?, &a.common),
        Command::Validate(a) => (validate::validate(a)?, &a.common),
        Command::Decompose(a) => (commands::decompose(a)?, &a.common),
    };
    for w in &outcome.warnings {
        writeln!(stderr, "{w}")?;
    }
    let text = outcome.doc.render(common.format)?;
    match &common.out {
        Some(path) => std::fs::write(path, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    if let (Command::Dispersion(a), Some(path)) = (&cli.command, &common.out) {
        if a.plot {
            let script = Path::new(path).with_extension("gp");
            std::fs::write(&script, commands::plot_script(&path.to_string_lossy()))?;
        }
    }
    Ok(outcome.passed)
}

/// Parse `args` (program name first) and run; returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let shown = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = stdout.write_all(shown.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = stderr.write_all(shown.as_bytes());
                    EXIT_USAGE
                }
            };
        }
    };
    match execute(&cli, stdout, stderr) {
        Ok(true) => EXIT_OK,
        Ok(false) => {
            let _ = writeln!(stderr, "validation failed: at least one residual exceeds its tolerance");
            EXIT_VALIDATION
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
