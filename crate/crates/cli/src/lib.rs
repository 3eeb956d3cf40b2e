//! Command line front end: builds, verification, fixtures and slices.

pub mod commands;
pub mod fixtures;
pub mod input;

use std::io::Write;
use std::path::PathBuf;

use clap::Parser;
use serde_json::{json, Value};
use thiserror::Error;

pub use commands::Cli;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_MATH: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot access {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("cannot parse {path}: {message}")]
    Parse { path: PathBuf, message: String },
    #[error("{0}")]
    Usage(String),
    #[error("unknown fixture kind {0:?}")]
    UnknownKind(String),
    #[error("certificate rejected: {}", .0.names().join(", "))]
    Rejected(lineable::builder::VerificationReport),
    #[error(transparent)]
    Engine(#[from] lineable::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Engine(e) if e.class() == lineable::ErrorClass::Mathematical => EXIT_MATH,
            CliError::Rejected(_) => EXIT_VERIFY,
            _ => EXIT_INPUT,
        }
    }

    fn name(&self) -> &'static str {
        match self {
            CliError::Io { .. } => "Io",
            CliError::Parse { .. } => "Parse",
            CliError::Usage(_) => "Usage",
            CliError::UnknownKind(_) => "UnknownKind",
            CliError::Rejected(_) => "VerificationFailed",
            CliError::Engine(e) => e.name(),
        }
    }

    /// Machine-readable description written to the error stream.
    pub fn diagnosis(&self) -> Value {
        let mut d = json!({
            "error": self.name(),
            "exit_code": self.exit_code(),
            "message": self.to_string(),
        });
        match self {
            CliError::Engine(e) => engine_fields(e, &mut d),
            CliError::Rejected(report) => {
                d["failures"] = serde_json::to_value(&report.failures).expect("report serializes");
            }
            _ => {}
        }
        d
    }
}

fn engine_fields(e: &lineable::Error, d: &mut Value) {
    use lineable::Error as E;
    let mut cur = e;
    loop {
        match cur {
            E::AtStep { step, context, source } => {
                if d.get("step").is_none() {
                    d["step"] = json!(step);
                }
                if let Some(c) = context {
                    d["context"] = json!(c);
                }
                cur = source;
            }
            E::InPolynomial { index, source } => {
                if d.get("polynomial").is_none() {
                    d["polynomial"] = json!(index);
                }
                cur = source;
            }
            _ => break,
        }
    }
    match cur {
        E::NoRealZero { diagnosis, detail } => {
            d["diagnosis"] = json!(diagnosis);
            d["detail"] = json!(detail);
        }
        E::SeedNotInZeroSet { monomial, coefficient } => {
            d["diagnosis"] = json!({ "monomial": monomial, "coefficient": coefficient });
        }
        E::PointNotAZero { value } => d["value"] = json!(value),
        _ => {}
    }
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    match commands::execute(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "{}", e.diagnosis());
            e.exit_code()
        }
    }
}
