//! Rendering of command results as CSV or JSON.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use serde::Serialize;

use crate::args::Format;
use crate::CliError;

/// Shortest decimal that parses back to the same `f64`; exponent form for
/// very small or very large magnitudes.
pub fn num(x: f64) -> String {
    let a = x.abs();
    if a == 0.0 || !a.is_finite() || (1e-4..1e15).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

pub fn opt_num(x: Option<f64>) -> String {
    x.map_or_else(|| "-".to_string(), num)
}

/// CSV view of a result.
pub enum Body {
    /// A single bare value, no header.
    Scalar(String),
    Table {
        header: Vec<&'static str>,
        rows: Vec<Vec<String>>,
    },
}

pub struct Report {
    pub csv: Body,
    pub json: serde_json::Value,
}

impl Report {
    pub fn new(csv: Body, json: &impl Serialize) -> Result<Self, CliError> {
        let json = serde_json::to_value(json).map_err(|e| CliError::Io(e.to_string()))?;
        Ok(Report { csv, json })
    }

    pub fn table(
        header: Vec<&'static str>,
        rows: Vec<Vec<String>>,
        json: &impl Serialize,
    ) -> Result<Self, CliError> {
        Self::new(Body::Table { header, rows }, json)
    }

    pub fn render(&self, format: Format) -> Result<Vec<u8>, CliError> {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json)
                    .map_err(|e| CliError::Io(e.to_string()))?;
                s.push('\n');
                Ok(s.into_bytes())
            }
            Format::Csv => match &self.csv {
                Body::Scalar(v) => Ok(format!("{v}\n").into_bytes()),
                Body::Table { header, rows } => {
                    let mut w = csv::Writer::from_writer(Vec::new());
                    w.write_record(header).map_err(csv_err)?;
                    for row in rows {
                        w.write_record(row).map_err(csv_err)?;
                    }
                    w.into_inner().map_err(|e| CliError::Io(e.to_string()))
                }
            },
        }
    }
}

fn csv_err(e: csv::Error) -> CliError {
    CliError::Io(e.to_string())
}

pub fn emit(bytes: &[u8], out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => {
            fs::write(path, bytes).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
        }
        None => {
            let mut stdout = io::stdout().lock();
            stdout
                .write_all(bytes)
                .and_then(|()| stdout.flush())
                .map_err(|e| CliError::Io(e.to_string()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_round_trip() {
        for x in [
            0.78125,
            3.4855588504854006e-7,
            1.0 / 3.0,
            -35.0,
            21.657,
            1e20,
            0.0,
            0.1 + 0.2,
        ] {
            let s = num(x);
            assert_eq!(s.parse::<f64>().unwrap().to_bits(), x.to_bits(), "{s}");
        }
        assert_eq!(num(0.78125), "0.78125");
        assert_eq!(num(3.5e-7), "3.5e-7");
        assert_eq!(num(f64::INFINITY), "inf");
    }
}
