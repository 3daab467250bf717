use std::fmt;
use std::path::Path;
use std::time::Duration;

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::Format;

pub const SCHEMA_VERSION: u32 = 1;

/// Result of one subcommand, before wrapping in a report.
pub struct Outcome {
    pub command: &'static str,
    /// Canonical echo of the inputs: parameters and parsed file contents.
    pub input: Value,
    pub result: Value,
    pub text: String,
}

#[derive(Debug)]
pub enum CliError {
    Parse { path: String, line: usize, column: usize, message: String },
    Io { path: String, message: String },
    Usage(String),
    Core(weilres::Error),
}

impl CliError {
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Parse { .. } => "input.parse",
            CliError::Io { .. } => "input.io",
            CliError::Usage(_) => "input.usage",
            CliError::Core(e) => e.code(),
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_cap() => 3,
            _ => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Parse { path, line, column, message } => write!(f, "{path}:{line}:{column}: {message}"),
            CliError::Io { path, message } => write!(f, "{path}: {message}"),
            CliError::Usage(m) => f.write_str(m),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

macro_rules! from_core {
    ($($t:ty),*) => {
        $(impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Core(e.into())
            }
        })*
    };
}

from_core!(
    weilres::Error,
    weilres::group::GroupError,
    weilres::orbit::OrbitError,
    weilres::binomial::RingError,
    weilres::polymap::PolyError,
    weilres::motive::MotiveError,
    weilres::csa::CsaError
);

pub fn read_json(path: &Path) -> Result<Value, CliError> {
    let shown = path.display().to_string();
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io { path: shown.clone(), message: e.to_string() })?;
    serde_json::from_str(&text).map_err(|e| CliError::Parse {
        path: shown,
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

fn input_hash(command: &str, input: &Value) -> String {
    let canonical = json!({"command": command, "input": input}).to_string();
    hex::encode(Sha256::digest(canonical.as_bytes()))
}

pub fn emit_report(out: &Outcome, format: Format, elapsed: Option<Duration>) {
    match format {
        Format::Json => {
            let mut report = json!({
                "schema_version": SCHEMA_VERSION,
                "tool": "weilres",
                "version": env!("CARGO_PKG_VERSION"),
                "command": out.command,
                "input": {"echo": out.input, "sha256": input_hash(out.command, &out.input)},
                "result": out.result,
            });
            if let Some(t) = elapsed {
                report["timing_ms"] = json!(t.as_secs_f64() * 1000.0);
            }
            println!("{}", serde_json::to_string_pretty(&report).expect("serializable"));
        }
        Format::Text => {
            print!("{}", out.text);
            if !out.text.ends_with('\n') {
                println!();
            }
            if let Some(t) = elapsed {
                println!("time: {:.3} ms", t.as_secs_f64() * 1000.0);
            }
        }
    }
}

pub fn emit_error(err: &CliError, format: Format) {
    match format {
        Format::Json => {
            let v = json!({"schema_version": SCHEMA_VERSION, "error": {"code": err.code(), "message": err.to_string()}});
            eprintln!("{}", serde_json::to_string_pretty(&v).expect("serializable"));
        }
        Format::Text => eprintln!("error [{}]: {err}", err.code()),
    }
}
