//! Tabular scan output and its CSV form.
//!
//! ```text
//! # preset=<name> n_max=<max cutoff or -> version=<crate version> config=<hash>
//! x,b1_photons,...,status
//! 0e0,3.7e-1,...,ok
//! ```
//!
//! Numbers use Rust's shortest round-trip scientific formatting, so parsing
//! a cell gives back the exact `f64`. Cells whose quantity failed carry the
//! literal `SINGULAR`, and the trailing `status` column names the failure.

use std::fmt::Write as _;
use std::io::Write;

use crate::error::{Error, Result};

pub const SINGULAR: &str = "SINGULAR";
pub const STATUS_OK: &str = "ok";

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Value(f64),
    Singular,
}

impl Cell {
    pub fn value(&self) -> Option<f64> {
        match self {
            Cell::Value(v) => Some(*v),
            Cell::Singular => None,
        }
    }

    fn render(&self, out: &mut String) {
        match self {
            Cell::Value(v) => {
                let _ = write!(out, "{v:e}");
            }
            Cell::Singular => out.push_str(SINGULAR),
        }
    }

    fn parse(s: &str) -> Result<Self> {
        if s == SINGULAR {
            return Ok(Cell::Singular);
        }
        s.parse::<f64>().map(Cell::Value).map_err(|_| Error::ConfigParse {
            line: 0,
            message: format!("bad CSV cell `{s}`"),
        })
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Value(v)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanResult {
    pub preset: String,
    /// Truncated SHA-256 of the normalized configuration.
    pub config_hash: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    /// Per-row status, `ok` or a short failure tag.
    pub status: Vec<String>,
}

impl ScanResult {
    pub fn new<S: AsRef<str>>(preset: &str, columns: impl IntoIterator<Item = S>, rows: Vec<Vec<Cell>>) -> Self {
        let status = vec![STATUS_OK.to_string(); rows.len()];
        Self {
            preset: preset.to_string(),
            config_hash: String::new(),
            columns: columns.into_iter().map(|c| c.as_ref().to_string()).collect(),
            rows,
            status,
        }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn column_index(&self, name: &str) -> Result<usize> {
        self.columns
            .iter()
            .position(|c| c == name)
            .ok_or_else(|| Error::MissingColumn(name.to_string()))
    }

    pub fn column(&self, name: &str) -> Result<Vec<Cell>> {
        let k = self.column_index(name)?;
        Ok(self.rows.iter().map(|r| r[k]).collect())
    }

    /// Column values with `NaN` standing in for failed cells.
    pub fn values(&self, name: &str) -> Result<Vec<f64>> {
        Ok(self
            .column(name)?
            .into_iter()
            .map(|c| c.value().unwrap_or(f64::NAN))
            .collect())
    }

    /// Largest cutoff recorded in an `n_max` column, if any.
    pub fn max_cutoff(&self) -> Option<usize> {
        let k = self.column_index("n_max").ok()?;
        self.rows
            .iter()
            .filter_map(|r| r[k].value())
            .map(|v| v as usize)
            .max()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let cutoff = self.max_cutoff().map_or_else(|| "-".to_string(), |n| n.to_string());
        let hash = if self.config_hash.is_empty() { "-" } else { &self.config_hash };
        let _ = writeln!(
            out,
            "# preset={} n_max={} version={} config={}",
            self.preset,
            cutoff,
            env!("CARGO_PKG_VERSION"),
            hash
        );
        out.push_str(&self.columns.join(","));
        out.push_str(",status\n");
        for (row, status) in self.rows.iter().zip(&self.status) {
            for cell in row {
                cell.render(&mut out);
                out.push(',');
            }
            out.push_str(status);
            out.push('\n');
        }
        out
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(self.to_csv().as_bytes())?;
        Ok(())
    }

    /// Parses the output of [`ScanResult::to_csv`].
    pub fn from_csv(text: &str) -> Result<Self> {
        let bad = |line: usize, message: String| Error::ConfigParse { line, message };
        let mut lines = text.lines().enumerate();
        let (_, header) = lines.next().ok_or_else(|| bad(1, "empty CSV".into()))?;
        let meta = header
            .strip_prefix('#')
            .ok_or_else(|| bad(1, "missing `#` metadata line".into()))?;
        let mut preset = String::new();
        let mut config_hash = String::new();
        for field in meta.split_whitespace() {
            match field.split_once('=') {
                Some(("preset", v)) => preset = v.to_string(),
                Some(("config", v)) if v != "-" => config_hash = v.to_string(),
                _ => {}
            }
        }
        let (_, names) = lines.next().ok_or_else(|| bad(2, "missing column names".into()))?;
        let mut columns: Vec<String> = names.split(',').map(str::to_string).collect();
        if columns.last().map(String::as_str) != Some("status") {
            return Err(bad(2, "last column must be `status`".into()));
        }
        columns.pop();
        let mut rows = Vec::new();
        let mut status = Vec::new();
        for (i, line) in lines {
            if line.is_empty() {
                continue;
            }
            let mut cells: Vec<&str> = line.split(',').collect();
            if cells.len() != columns.len() + 1 {
                return Err(bad(i + 1, format!("expected {} cells", columns.len() + 1)));
            }
            status.push(cells.pop().unwrap_or_default().to_string());
            rows.push(
                cells
                    .into_iter()
                    .map(Cell::parse)
                    .collect::<Result<Vec<_>>>()
                    .map_err(|e| bad(i + 1, e.to_string()))?,
            );
        }
        Ok(Self {
            preset,
            config_hash,
            columns,
            rows,
            status,
        })
    }
}
