use std::fs;
use std::io::Write;
use std::path::Path;

use hardy_embed::Error;
use serde::Serialize;

pub const EXIT_CHECK_FAILED: u8 = 1;
pub const EXIT_PARSE: u8 = 2;
pub const EXIT_NO_CONSTRUCTION: u8 = 3;
pub const EXIT_NUMERIC: u8 = 4;

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn parse(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_PARSE,
            message: message.into(),
        }
    }

    pub fn numeric(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_NUMERIC,
            message: message.into(),
        }
    }
}

/// Input-shaped errors exit 2, everything else 4.
impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InvalidSymbol(_)
            | Error::DegenerateSymbol(_)
            | Error::DegenerateMap
            | Error::NotInner(_)
            | Error::DomainError(_)
            | Error::FractionalTime(_)
            | Error::MissingTime(_) => EXIT_PARSE,
            _ => EXIT_NUMERIC,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

pub fn json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report serialises");
    s.push('\n');
    s
}

pub fn read_input(path: Option<&Path>) -> Result<String, Failure> {
    let path = path.ok_or_else(|| Failure::parse("--input is required"))?;
    fs::read_to_string(path).map_err(|e| Failure::parse(format!("{}: {e}", path.display())))
}

/// Writes to `out`, or to standard output when absent.
pub fn emit(out: Option<&Path>, content: &str) -> Result<(), Failure> {
    match out {
        Some(p) => write_file(p, content),
        None => std::io::stdout()
            .write_all(content.as_bytes())
            .map_err(|e| Failure::numeric(format!("stdout: {e}"))),
    }
}

pub fn write_file(path: &Path, content: &str) -> Result<(), Failure> {
    fs::write(path, content).map_err(|e| Failure::numeric(format!("{}: {e}", path.display())))
}

pub fn csv_complex(z: hardy_embed::C64) -> String {
    format!("{:e},{:e}", z.re, z.im)
}
