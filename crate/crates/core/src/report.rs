//! Rendering of comparison rows as an aligned text table, JSON or CSV.
//!
//! JSON is an array of [`ReportRow`] objects:
//!
//! ```text
//! { "label", "table", "inputs": { volume_cm3, contact_angle_deg, density,
//!   surface_tension, gravity, bond }, "large_bond", "anomaly",
//!   "measured", "sphere", "perturbative",
//!   "sphere_error_pct", "perturbative_error_pct" }
//! ```
//!
//! where each of the last five is an object keyed by `equatorial_radius`,
//! `contact_radius`, `apex_height`, `apex_to_equator` (missing keys are
//! absent). CSV flattens the same data: one header row, comma delimiter,
//! period decimal separator, empty cells for missing values, lengths in cm.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::profile::{DropObservables, Observable};
use crate::validation::ComparisonRow;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Table,
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportInputs {
    pub volume_cm3: f64,
    pub contact_angle_deg: f64,
    pub density: f64,
    pub surface_tension: f64,
    pub gravity: f64,
    pub bond: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub label: String,
    pub table: u8,
    pub inputs: ReportInputs,
    pub large_bond: bool,
    pub anomaly: bool,
    pub measured: BTreeMap<String, f64>,
    pub sphere: BTreeMap<String, f64>,
    pub perturbative: BTreeMap<String, f64>,
    pub sphere_error_pct: BTreeMap<String, f64>,
    pub perturbative_error_pct: BTreeMap<String, f64>,
}

fn keyed(entries: impl Iterator<Item = (Observable, f64)>) -> BTreeMap<String, f64> {
    entries.map(|(o, v)| (o.key().to_string(), v)).collect()
}

fn theory(obs: &DropObservables) -> BTreeMap<String, f64> {
    keyed(obs.present())
}

impl From<&ComparisonRow> for ReportRow {
    fn from(row: &ComparisonRow) -> Self {
        let rec = &row.record;
        ReportRow {
            label: rec.label.clone(),
            table: rec.table,
            inputs: ReportInputs {
                volume_cm3: rec.volume,
                contact_angle_deg: rec.contact_angle_deg(),
                density: rec.fluid.density(),
                surface_tension: rec.fluid.surface_tension(),
                gravity: rec.fluid.gravity(),
                bond: row.bond,
            },
            large_bond: row.large_bond,
            anomaly: row.anomaly,
            measured: keyed(rec.measured.iter().map(|(o, v)| (*o, *v))),
            sphere: theory(&row.sphere),
            perturbative: theory(&row.perturbative),
            sphere_error_pct: keyed(row.sphere_errors.iter().map(|(o, v)| (*o, *v))),
            perturbative_error_pct: keyed(row.perturbative_errors.iter().map(|(o, v)| (*o, *v))),
        }
    }
}

pub fn render(rows: &[ComparisonRow], format: ReportFormat) -> Result<String> {
    if rows.is_empty() {
        return Err(Error::Usage("nothing to report".into()));
    }
    match format {
        ReportFormat::Table => Ok(render_table(rows)),
        ReportFormat::Json => render_json(rows),
        ReportFormat::Csv => render_csv(rows),
    }
}

pub fn render_json(rows: &[ComparisonRow]) -> Result<String> {
    let out: Vec<ReportRow> = rows.iter().map(ReportRow::from).collect();
    let mut s = serde_json::to_string_pretty(&out).map_err(|e| Error::Usage(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

pub fn parse_json(text: &str) -> Result<Vec<ReportRow>> {
    serde_json::from_str(text).map_err(|e| Error::Usage(format!("invalid report json: {e}")))
}

/// Observables that occur in at least one row, in report order.
fn columns(rows: &[ComparisonRow]) -> Vec<Observable> {
    Observable::ALL
        .into_iter()
        .filter(|o| rows.iter().any(|r| r.record.measured.contains_key(o)))
        .collect()
}

pub fn csv_header(cols: &[Observable]) -> Vec<String> {
    let mut header: Vec<String> = [
        "label",
        "table",
        "volume_cm3",
        "contact_angle_deg",
        "density",
        "surface_tension",
        "gravity",
        "bond",
        "large_bond",
        "anomaly",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    for o in cols {
        for prefix in [
            "measured",
            "sphere",
            "perturbative",
            "sphere_err_pct",
            "perturbative_err_pct",
        ] {
            header.push(format!("{prefix}_{}", o.key()));
        }
    }
    header
}

pub fn render_csv(rows: &[ComparisonRow]) -> Result<String> {
    let cols = columns(rows);
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Usage(format!("csv: {e}"));
    w.write_record(csv_header(&cols)).map_err(io)?;
    let cell = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
    for row in rows {
        let rec = &row.record;
        let mut line = vec![
            rec.label.clone(),
            rec.table.to_string(),
            rec.volume.to_string(),
            rec.contact_angle_deg().to_string(),
            rec.fluid.density().to_string(),
            rec.fluid.surface_tension().to_string(),
            rec.fluid.gravity().to_string(),
            row.bond.to_string(),
            row.large_bond.to_string(),
            row.anomaly.to_string(),
        ];
        for &o in &cols {
            let measured = rec.measured.get(&o).copied();
            let present = measured.is_some();
            line.push(cell(measured));
            line.push(cell(row.sphere.get(o).filter(|_| present)));
            line.push(cell(row.perturbative.get(o).filter(|_| present)));
            line.push(cell(row.sphere_errors.get(&o).copied()));
            line.push(cell(row.perturbative_errors.get(&o).copied()));
        }
        w.write_record(line).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Usage(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Usage(e.to_string()))
}

/// Fixed-width layout mirroring the source tables: per observable, the
/// measurement followed by sphere and first-order values with their
/// percentage errors in parentheses.
pub fn render_table(rows: &[ComparisonRow]) -> String {
    let cols = columns(rows);
    let mut head = format!(
        "{:<28} {:>10} {:>8} {:>6}",
        "drop", "V (cm^3)", "angle", "bond"
    );
    for o in &cols {
        let sym = o.symbol();
        let _ = write!(
            head,
            " | {:>7} {:>16} {:>16}",
            format!("{sym} exp"),
            format!("{sym} sphere"),
            format!("{sym} pert")
        );
    }
    let mut out = String::new();
    out.push_str(&head);
    out.push('\n');
    out.push_str(&"-".repeat(head.len()));
    out.push('\n');

    let theory_cell = |v: Option<f64>, e: Option<f64>| match (v, e) {
        (Some(v), Some(e)) => format!("{v:.4} ({e:>4.1}%)"),
        (Some(v), None) => format!("{v:.4}"),
        _ => "--".to_string(),
    };
    for row in rows {
        let rec = &row.record;
        let mut flags = String::new();
        if row.large_bond {
            flags.push_str(" [bond>1]");
        }
        if row.anomaly {
            flags.push_str(" [anomaly]");
        }
        let _ = write!(
            out,
            "{:<28} {:>10.4e} {:>7.2}° {:>6.3}",
            rec.label,
            rec.volume,
            rec.contact_angle_deg(),
            row.bond
        );
        for &o in &cols {
            let measured = rec.measured.get(&o).copied();
            let (s, p) = if measured.is_some() {
                (
                    theory_cell(row.sphere.get(o), row.sphere_errors.get(&o).copied()),
                    theory_cell(
                        row.perturbative.get(o),
                        row.perturbative_errors.get(&o).copied(),
                    ),
                )
            } else {
                ("--".to_string(), "--".to_string())
            };
            let m = measured.map_or("--".to_string(), |v| format!("{v:.4}"));
            let _ = write!(out, " | {m:>7} {s:>16} {p:>16}");
        }
        out.push_str(&flags);
        out.push('\n');
    }
    out
}
