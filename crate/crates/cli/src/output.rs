//! Number formatting and flat-row output in CSV or JSON.

use std::io;
use std::str::FromStr;

use clap::ValueEnum;
use serde::Serialize;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Precision {
    Significant(usize),
    Full,
}

impl Default for Precision {
    fn default() -> Self {
        Precision::Significant(6)
    }
}

impl FromStr for Precision {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("full") {
            return Ok(Precision::Full);
        }
        match s.parse::<usize>() {
            Ok(n) if (1..=17).contains(&n) => Ok(Precision::Significant(n)),
            _ => Err(format!("expected 1..=17 or \"full\", got {s:?}")),
        }
    }
}

impl Precision {
    /// Round to the configured number of significant digits. The result is
    /// printed in shortest round-trip form, always with "." as the decimal
    /// point.
    pub fn round(self, v: f64) -> f64 {
        match self {
            Precision::Full => v,
            Precision::Significant(_) if !v.is_finite() || v == 0.0 => v,
            Precision::Significant(n) => format!("{:.*e}", n - 1, v).parse().unwrap_or(v),
        }
    }

    pub fn opt(self, v: Option<f64>) -> Option<f64> {
        v.map(|x| self.round(x))
    }

    pub fn text(self, v: f64) -> String {
        self.round(v).to_string()
    }
}

pub fn write_rows<W: io::Write, T: Serialize>(
    w: W,
    format: Format,
    delimiter: u8,
    rows: &[T],
) -> Result<(), CliError> {
    match format {
        Format::Csv => {
            let mut wtr = csv::WriterBuilder::new().delimiter(delimiter).from_writer(w);
            for r in rows {
                wtr.serialize(r)?;
            }
            wtr.flush()?;
        }
        Format::Json => {
            let mut w = w;
            serde_json::to_writer_pretty(&mut w, rows)?;
            writeln!(w)?;
        }
    }
    Ok(())
}
