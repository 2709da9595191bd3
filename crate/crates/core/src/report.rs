//! Plain-text table rendering shared by the CLI outputs.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Cell text for undefined values.
pub const UNDEF: &str = "undef";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Tsv,
    Json,
    Markdown,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "tsv" => Ok(Format::Tsv),
            "json" => Ok(Format::Json),
            "markdown" | "md" => Ok(Format::Markdown),
            other => Err(Error::InvalidArgument(format!("unknown output format {other:?}"))),
        }
    }
}

/// Fixed-point rendering with `precision` decimals.
pub fn fmt_value(v: f64, precision: usize) -> String {
    format!("{v:.precision$}")
}

pub fn fmt_opt(v: Option<f64>, precision: usize) -> String {
    v.map_or_else(|| UNDEF.to_string(), |v| fmt_value(v, precision))
}

/// `v` rounded to `precision` decimals, for JSON output.
pub fn round_to(v: f64, precision: usize) -> f64 {
    fmt_value(v, precision).parse().unwrap_or(v)
}

/// A rectangular table of preformatted cells.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TextTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl TextTable {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Self {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push<S: Into<String>>(&mut self, row: impl IntoIterator<Item = S>) {
        self.rows.push(row.into_iter().map(Into::into).collect());
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for row in std::iter::once(&self.header).chain(&self.rows) {
            out.push_str(&row.join("\t"));
            out.push('\n');
        }
        out
    }

    /// GitHub-style markdown; columns after the first `left_aligned` are right-aligned.
    pub fn to_markdown(&self, left_aligned: usize) -> String {
        let mut out = String::new();
        let line = |cells: &[String]| format!("| {} |\n", cells.join(" | "));
        out.push_str(&line(&self.header));
        let rule: Vec<String> = (0..self.header.len())
            .map(|i| if i < left_aligned { ":---" } else { "---:" }.to_string())
            .collect();
        out.push_str(&line(&rule));
        for row in &self.rows {
            let _ = write!(out, "{}", line(row));
        }
        out
    }
}
