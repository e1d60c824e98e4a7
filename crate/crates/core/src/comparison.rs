//! Deviation of model binding energies from reference tables, and the overlay of the
//! residual shell oscillation with the semiclassical one.

use std::collections::HashMap;
use std::io::{Read, Write};
use std::path::Path;

use serde::Serialize;

use crate::energy::{EnergyModel, ModelConstants};
use crate::error::{Error, LineError, Result};
use crate::format::{fmt_sig, SIGNIFICANT_DIGITS};
use crate::semiclassics::OscillationSeries;

/// One reference binding energy `-E` (atomic units).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReferenceRecord {
    pub z: u32,
    pub minus_e: f64,
    pub label: String,
}

/// Validated reference table, sorted by Z.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReferenceDataset {
    pub records: Vec<ReferenceRecord>,
    pub source: String,
    /// Non-fatal remarks, such as an empty input.
    pub warnings: Vec<String>,
}

impl ReferenceDataset {
    /// Checks that Z values are unique and energies positive, then sorts by Z.
    pub fn new(mut records: Vec<ReferenceRecord>, source: impl Into<String>) -> Result<Self> {
        let mut problems = Vec::new();
        let mut seen = HashMap::new();
        for (i, r) in records.iter().enumerate() {
            if let Some(first) = seen.insert(r.z, i) {
                problems.push(LineError {
                    line: i as u64 + 1,
                    message: format!("duplicate Z = {} (first in record {})", r.z, first + 1),
                });
            }
        }
        problems.extend(records.iter().enumerate().filter_map(|(i, r)| record_problem(r).map(|m| LineError {
            line: i as u64 + 1,
            message: m,
        })));
        if !problems.is_empty() {
            return Err(Error::Reference(problems));
        }
        records.sort_by_key(|r| r.z);
        let warnings = if records.is_empty() {
            vec!["reference dataset is empty".to_string()]
        } else {
            Vec::new()
        };
        Ok(Self {
            records,
            source: source.into(),
            warnings,
        })
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }
}

fn record_problem(r: &ReferenceRecord) -> Option<String> {
    if r.z == 0 {
        Some("Z must be a positive integer".into())
    } else if !(r.minus_e > 0.0 && r.minus_e.is_finite()) {
        Some(format!("binding energy must be positive and finite, got {}", r.minus_e))
    } else {
        None
    }
}

/// Reads a `Z,minusE,label` table from a file.
pub fn load_reference(path: impl AsRef<Path>) -> Result<ReferenceDataset> {
    let path = path.as_ref();
    let file = std::fs::File::open(path)?;
    parse_reference(file, path.display().to_string())
}

/// Reads a `Z,minusE,label` table. All problems are collected and reported with
/// their line numbers.
pub fn parse_reference<R: Read>(input: R, source: impl Into<String>) -> Result<ReferenceDataset> {
    let source = source.into();
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(input);
    let mut rows = rdr.records();
    let header = match rows.next() {
        None => return ReferenceDataset::new(Vec::new(), source),
        Some(h) => h?,
    };
    let names: Vec<&str> = header.iter().collect();
    if names != ["Z", "minusE", "label"] {
        return Err(Error::Reference(vec![LineError {
            line: 1,
            message: format!("expected header 'Z,minusE,label', found '{}'", names.join(",")),
        }]));
    }
    let mut records = Vec::new();
    let mut problems = Vec::new();
    let mut first_line = HashMap::new();
    for row in rows {
        let row = row?;
        let line = row.position().map(|p| p.line()).unwrap_or(0);
        if row.len() != 3 {
            problems.push(LineError {
                line,
                message: format!("expected 3 fields, found {}", row.len()),
            });
            continue;
        }
        let z = match row[0].parse::<u32>() {
            Ok(z) => z,
            Err(_) => {
                problems.push(LineError {
                    line,
                    message: format!("Z '{}' is not a positive integer", &row[0]),
                });
                continue;
            }
        };
        let minus_e = match row[1].parse::<f64>() {
            Ok(v) => v,
            Err(_) => {
                problems.push(LineError {
                    line,
                    message: format!("minusE '{}' is not a number", &row[1]),
                });
                continue;
            }
        };
        let rec = ReferenceRecord {
            z,
            minus_e,
            label: row[2].to_string(),
        };
        if let Some(m) = record_problem(&rec) {
            problems.push(LineError { line, message: m });
            continue;
        }
        if let Some(first) = first_line.insert(z, line) {
            problems.push(LineError {
                line,
                message: format!("duplicate Z = {z} (first on line {first})"),
            });
            continue;
        }
        records.push(rec);
    }
    if !problems.is_empty() {
        return Err(Error::Reference(problems));
    }
    ReferenceDataset::new(records, source)
}

/// Reference against model binding energy at one Z.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComparisonRecord {
    pub z: u32,
    pub zcube: f64,
    pub reference: f64,
    pub model: f64,
    /// `100 (ref - model) / ref`.
    pub rel_dev_pct: f64,
    /// `(ref - model) / Z^(4/3)`.
    pub scaled_dev: f64,
}

impl ComparisonRecord {
    pub fn new(z: u32, reference: f64, model: f64) -> Self {
        let zf = z as f64;
        let d = reference - model;
        Self {
            z,
            zcube: zf.cbrt(),
            reference,
            model,
            rel_dev_pct: 100.0 * d / reference,
            scaled_dev: d / zf.powf(4.0 / 3.0),
        }
    }
}

/// One comparison record per reference entry, in input order.
pub fn deviation_records(
    records: &[ReferenceRecord],
    model: EnergyModel,
    constants: &ModelConstants,
) -> Vec<ComparisonRecord> {
    records
        .iter()
        .map(|r| ComparisonRecord::new(r.z, r.minus_e, model.breakdown(r.z as f64, constants).binding()))
        .collect()
}

pub fn deviation_series(
    ds: &ReferenceDataset,
    model: EnergyModel,
    constants: &ModelConstants,
) -> Vec<ComparisonRecord> {
    deviation_records(&ds.records, model, constants)
}

pub const COMPARISON_COLUMNS: [&str; 6] = ["Z", "zcube", "ref", "model", "rel_dev_pct", "scaled_dev"];

/// Writes `Z,zcube,ref,model,rel_dev_pct,scaled_dev` rows with 10 significant digits.
pub fn write_comparison_csv<W: Write>(records: &[ComparisonRecord], mut w: W) -> Result<()> {
    let d = SIGNIFICANT_DIGITS;
    writeln!(w, "{}", COMPARISON_COLUMNS.join(","))?;
    for r in records {
        writeln!(
            w,
            "{},{},{},{},{},{}",
            r.z,
            fmt_sig(r.zcube, d),
            fmt_sig(r.reference, d),
            fmt_sig(r.model, d),
            fmt_sig(r.rel_dev_pct, d),
            fmt_sig(r.scaled_dev, d)
        )?;
    }
    Ok(())
}

/// Nuclear charges of the closed-shell inert gases, including the one at Z = 118.
pub fn inert_gas_markers() -> Vec<u32> {
    vec![2, 10, 18, 36, 54, 86, 118]
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OverlayRow {
    pub z: u32,
    pub zcube: f64,
    /// Reference deviation from the statistical energy, divided by `Z^(4/3)`.
    pub reference_scaled: f64,
    /// Semiclassical oscillation divided by `Z^(4/3)`.
    pub oscillation_scaled: f64,
    /// `reference_scaled - oscillation_scaled - offset`.
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Overlay {
    pub rows: Vec<OverlayRow>,
    /// Constant added to the oscillation column; zero unless fitted.
    pub offset: f64,
    pub rms: f64,
}

/// Aligns scaled deviations with the oscillation series (interpolated in `Z^(1/3)`).
///
/// Records outside the series grid are dropped. With `fit_offset` a constant shift of
/// the oscillation column is chosen by least squares.
pub fn oscillation_overlay(records: &[ComparisonRecord], series: &OscillationSeries, fit_offset: bool) -> Overlay {
    let pairs: Vec<(&ComparisonRecord, f64)> = records
        .iter()
        .filter_map(|r| series.scaled_at(r.zcube).map(|s| (r, s)))
        .collect();
    let offset = if fit_offset && !pairs.is_empty() {
        pairs.iter().map(|(r, s)| r.scaled_dev - s).sum::<f64>() / pairs.len() as f64
    } else {
        0.0
    };
    let rows: Vec<OverlayRow> = pairs
        .iter()
        .map(|(r, s)| OverlayRow {
            z: r.z,
            zcube: r.zcube,
            reference_scaled: r.scaled_dev,
            oscillation_scaled: *s,
            residual: r.scaled_dev - s - offset,
        })
        .collect();
    let rms = if rows.is_empty() {
        0.0
    } else {
        (rows.iter().map(|r| r.residual * r.residual).sum::<f64>() / rows.len() as f64).sqrt()
    };
    Overlay { rows, offset, rms }
}
