//! Pointwise comparison of two columns of a scan.

use super::result::{Cell, ScanResult};
use crate::error::Result;

/// Errors of `target` against `baseline`, row by row.
#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub baseline: String,
    pub target: String,
    /// Abscissa of each row.
    pub axis: Vec<f64>,
    pub absolute: Vec<f64>,
    /// `|target - baseline| / |baseline|`; `NaN` where either cell failed.
    pub relative: Vec<f64>,
    pub max_absolute: f64,
    pub max_relative: f64,
    /// Row with the largest `g` (the coupling antinode), when a `g` column exists.
    pub antinode: Option<usize>,
}

impl Comparison {
    pub fn relative_at_antinode(&self) -> Option<f64> {
        self.antinode.map(|k| self.relative[k])
    }

    /// Table with the abscissa, both columns' errors, as a scan result.
    pub fn to_result(&self, preset: &str, axis_name: &str) -> ScanResult {
        let rows = (0..self.axis.len())
            .map(|k| vec![self.axis[k].into(), self.absolute[k].into(), self.relative[k].into()])
            .collect();
        ScanResult::new(preset, [axis_name, "abs_error", "rel_error"], rows)
    }
}

fn finite_max(v: &[f64]) -> f64 {
    v.iter().copied().filter(|x| x.is_finite()).fold(0.0, f64::max)
}

/// Compares two columns of `result`; the first column is the abscissa.
pub fn compare(result: &ScanResult, baseline: &str, target: &str) -> Result<Comparison> {
    let b = result.column(baseline)?;
    let t = result.column(target)?;
    let axis = result
        .rows
        .iter()
        .map(|r| r.first().and_then(Cell::value).unwrap_or(f64::NAN))
        .collect();
    let (absolute, relative): (Vec<f64>, Vec<f64>) = b
        .iter()
        .zip(&t)
        .map(|(b, t)| match (b.value(), t.value()) {
            (Some(b), Some(t)) => {
                let abs = (t - b).abs();
                let rel = if abs == 0.0 { 0.0 } else { abs / b.abs() };
                (abs, rel)
            }
            _ => (f64::NAN, f64::NAN),
        })
        .unzip();
    let antinode = result.values("g").ok().and_then(|g| {
        g.iter()
            .enumerate()
            .filter(|(_, v)| v.is_finite())
            .max_by(|a, b| a.1.abs().total_cmp(&b.1.abs()))
            .map(|(k, _)| k)
    });
    Ok(Comparison {
        baseline: baseline.to_string(),
        target: target.to_string(),
        max_absolute: finite_max(&absolute),
        max_relative: finite_max(&relative),
        axis,
        absolute,
        relative,
        antinode,
    })
}
