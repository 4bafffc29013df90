//! Published sessile-drop measurements and the sphere / first-order
//! comparison against them.
//!
//! Two data sets are bundled, all lengths in cm:
//!
//! * water drops: three on carbon steel (volumes given in units of
//!   6.75e-3 cm^3, gamma = 72 dyn/cm) and one on PMMA (gamma = 70.6 dyn/cm);
//! * four mercury drops on a glass slide (rho = 13.55 g/cm^3, gamma = 476 dyn/cm).
//!
//! `g = 980.7 cm/s^2` throughout. Each record also carries the theoretical
//! values and percentage errors as originally tabulated, so a run can be
//! checked cell by cell. Percentages are always recomputed here, never copied.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::capillary::{bond_number, solve_sphere, DropSpec, FluidParams};
use crate::error::Result;
use crate::perturbation;
use crate::profile::{DropObservables, Observable};

/// Volume of one "unit" in the carbon-steel series.
pub const CARBON_STEEL_UNIT_VOLUME: f64 = 6.75e-3;
pub const STANDARD_GRAVITY: f64 = 980.7;

/// Allowed deviation of a recomputed theory cell from the tabulated one (cm).
pub const VALUE_TOLERANCE: f64 = 5e-4;
/// Allowed deviation of a recomputed percentage error (percentage points).
pub const PERCENT_TOLERANCE: f64 = 0.15;

pub const APEX_HEIGHT_NOTE: &str =
    "source column z1 holds the apex height h (its sphere values equal R(1 - cos angle))";

pub type ObservableMap = BTreeMap<Observable, f64>;

/// Values as printed in the source tables.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct PublishedTheory {
    pub sphere: ObservableMap,
    pub perturbative: ObservableMap,
    pub sphere_error_pct: ObservableMap,
    pub perturbative_error_pct: ObservableMap,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub label: String,
    /// 1 for the water series, 2 for mercury.
    pub table: u8,
    pub volume: f64,
    pub contact_angle: f64,
    pub fluid: FluidParams,
    /// Only the columns present in the source.
    pub measured: ObservableMap,
    pub published: Option<PublishedTheory>,
    pub notes: Vec<String>,
}

impl ExperimentRecord {
    pub fn spec(&self) -> Result<DropSpec> {
        DropSpec::new(self.volume, self.contact_angle)
    }

    pub fn contact_angle_deg(&self) -> f64 {
        self.contact_angle.to_degrees()
    }
}

fn map(entries: &[(Observable, f64)]) -> ObservableMap {
    entries.iter().copied().collect()
}

#[allow(clippy::too_many_arguments)]
fn water_record(
    label: &str,
    volume: f64,
    angle_deg: f64,
    gamma: f64,
    measured: &[(Observable, f64)],
    sphere: &[(Observable, f64)],
    perturbative: &[(Observable, f64)],
    sphere_err: &[(Observable, f64)],
    pert_err: &[(Observable, f64)],
    notes: Vec<String>,
) -> ExperimentRecord {
    ExperimentRecord {
        label: label.to_string(),
        table: 1,
        volume,
        contact_angle: angle_deg.to_radians(),
        fluid: FluidParams::new(1.0, gamma, STANDARD_GRAVITY).expect("static fluid"),
        measured: map(measured),
        published: Some(PublishedTheory {
            sphere: map(sphere),
            perturbative: map(perturbative),
            sphere_error_pct: map(sphere_err),
            perturbative_error_pct: map(pert_err),
        }),
        notes,
    }
}

fn mercury_record(
    volume_milli: f64,
    angle_deg: f64,
    measured: [f64; 3],
    sphere: [f64; 3],
    perturbative: [f64; 3],
    sphere_err: [f64; 3],
    pert_err: [f64; 3],
) -> ExperimentRecord {
    use Observable::*;
    let keys = [EquatorialRadius, ContactRadius, ApexToEquator];
    let zip = |v: [f64; 3]| keys.iter().copied().zip(v).collect::<ObservableMap>();
    ExperimentRecord {
        label: format!("mercury/glass V={volume_milli:.3}e-3"),
        table: 2,
        volume: volume_milli * 1e-3,
        contact_angle: angle_deg.to_radians(),
        fluid: FluidParams::new(13.55, 476.0, STANDARD_GRAVITY).expect("static fluid"),
        measured: zip(measured),
        published: Some(PublishedTheory {
            sphere: zip(sphere),
            perturbative: zip(perturbative),
            sphere_error_pct: zip(sphere_err),
            perturbative_error_pct: zip(pert_err),
        }),
        notes: Vec::new(),
    }
}

/// The eight bundled records: three water/carbon-steel, one water/PMMA,
/// four mercury/glass.
pub fn builtin_dataset() -> Vec<ExperimentRecord> {
    use Observable::*;
    let steel =
        |n: u32, angle: f64, m: [f64; 2], s: [f64; 2], p: [f64; 2], se: [f64; 2], pe: [f64; 2]| {
            let pair = |v: [f64; 2]| [(ContactRadius, v[0]), (ApexHeight, v[1])];
            water_record(
                &format!("water/carbon steel #{n}"),
                n as f64 * CARBON_STEEL_UNIT_VOLUME,
                angle,
                72.0,
                &pair(m),
                &pair(s),
                &pair(p),
                &pair(se),
                &pair(pe),
                vec![
                    format!("volume {n} unit(s) of {CARBON_STEEL_UNIT_VOLUME} cm^3"),
                    APEX_HEIGHT_NOTE.to_string(),
                ],
            )
        };
    vec![
        steel(
            1,
            72.0,
            [0.1748, 0.1148],
            [0.1713, 0.1245],
            [0.1742, 0.1196],
            [2.0, 8.4],
            [0.3, 4.1],
        ),
        steel(
            2,
            71.3,
            [0.2240, 0.1411],
            [0.2171, 0.1557],
            [0.2229, 0.1460],
            [3.1, 10.0],
            [0.5, 3.4],
        ),
        steel(
            3,
            71.2,
            [0.2360, 0.1565],
            [0.2487, 0.1780],
            [0.2575, 0.1634],
            [5.4, 14.0],
            [9.1, 4.4],
        ),
        water_record(
            "water/PMMA",
            0.1234,
            73.44,
            70.6,
            &[(ContactRadius, 0.4897)],
            &[(ContactRadius, 0.4462)],
            &[(ContactRadius, 0.5007)],
            &[(ContactRadius, 8.9)],
            &[(ContactRadius, 2.3)],
            Vec::new(),
        ),
        mercury_record(
            0.370,
            131.1,
            [0.0445, 0.0337, 0.0442],
            [0.0458, 0.0345, 0.0458],
            [0.0462, 0.0357, 0.0456],
            [2.8, 2.3, 3.5],
            [3.9, 5.9, 3.2],
        ),
        mercury_record(
            2.510,
            129.5,
            [0.0907, 0.0722, 0.0813],
            [0.0869, 0.0671, 0.0869],
            [0.0902, 0.0748, 0.0860],
            [4.2, 7.1, 6.9],
            [0.6, 3.6, 5.7],
        ),
        mercury_record(
            4.830,
            132.6,
            [0.1163, 0.0884, 0.1035],
            [0.1074, 0.0791, 0.1074],
            [0.1137, 0.0957, 0.1057],
            [7.6, 11.0, 3.8],
            [2.2, 8.3, 2.1],
        ),
        mercury_record(
            10.370,
            132.4,
            [0.1536, 0.1191, 0.1299],
            [0.1386, 0.1024, 0.1386],
            [0.1521, 0.1379, 0.1349],
            [9.7, 14.0, 6.7],
            [1.0, 15.8, 3.9],
        ),
    ]
}

/// Theory against experiment for one record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub record: ExperimentRecord,
    pub bond: f64,
    pub large_bond: bool,
    pub sphere: DropObservables,
    pub perturbative: DropObservables,
    pub sphere_errors: ObservableMap,
    pub perturbative_errors: ObservableMap,
    /// Measurement moves opposite to what gravity predicts relative to the sphere.
    pub anomaly: bool,
}

pub fn percent_error(theory: f64, measured: f64) -> f64 {
    ((theory - measured) / measured).abs() * 100.0
}

fn errors_against(theory: &DropObservables, measured: &ObservableMap) -> ObservableMap {
    measured
        .iter()
        .filter_map(|(&o, &m)| theory.get(o).map(|t| (o, percent_error(t, m))))
        .collect()
}

/// Gravity widens the drop and lowers it. A measurement narrower or taller
/// than the weightless cap contradicts that.
fn is_anomalous(sphere: &DropObservables, measured: &ObservableMap) -> bool {
    use Observable::*;
    let below = |o: Observable| match (measured.get(&o), sphere.get(o)) {
        (Some(m), Some(s)) => *m < s,
        _ => false,
    };
    let above = |o: Observable| match (measured.get(&o), sphere.get(o)) {
        (Some(m), Some(s)) => *m > s,
        _ => false,
    };
    below(ContactRadius) || below(EquatorialRadius) || above(ApexHeight) || above(ApexToEquator)
}

pub fn compare(record: &ExperimentRecord) -> Result<ComparisonRow> {
    let spec = record.spec()?;
    let sphere = solve_sphere(&spec)?.observables();
    let perturbative = perturbation::observables(&spec, &record.fluid)?;
    let bond = bond_number(&spec, &record.fluid);
    Ok(ComparisonRow {
        record: record.clone(),
        bond,
        large_bond: bond > 1.0,
        sphere_errors: errors_against(&sphere, &record.measured),
        perturbative_errors: errors_against(&perturbative, &record.measured),
        anomaly: is_anomalous(&sphere, &record.measured),
        sphere,
        perturbative,
    })
}

pub fn compare_all(records: &[ExperimentRecord]) -> Result<Vec<ComparisonRow>> {
    records.iter().map(compare).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Sphere,
    Perturbative,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CellKind {
    Value,
    PercentError,
}

/// One recomputed table cell against its published counterpart.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellCheck {
    pub label: String,
    pub method: Method,
    pub observable: Observable,
    pub kind: CellKind,
    pub published: f64,
    pub computed: f64,
    pub tolerance: f64,
}

impl CellCheck {
    pub fn deviation(&self) -> f64 {
        (self.computed - self.published).abs()
    }

    pub fn passes(&self) -> bool {
        self.deviation() <= self.tolerance
    }
}

/// Every theory cell and percentage of the rows that carry published values.
pub fn reproduction_checks(rows: &[ComparisonRow]) -> Vec<CellCheck> {
    let mut out = Vec::new();
    for row in rows {
        let Some(published) = &row.record.published else {
            continue;
        };
        let groups = [
            (
                Method::Sphere,
                CellKind::Value,
                &published.sphere,
                &row.sphere,
                None,
            ),
            (
                Method::Perturbative,
                CellKind::Value,
                &published.perturbative,
                &row.perturbative,
                None,
            ),
            (
                Method::Sphere,
                CellKind::PercentError,
                &published.sphere_error_pct,
                &row.sphere,
                Some(&row.sphere_errors),
            ),
            (
                Method::Perturbative,
                CellKind::PercentError,
                &published.perturbative_error_pct,
                &row.perturbative,
                Some(&row.perturbative_errors),
            ),
        ];
        for (method, kind, table, theory, errors) in groups {
            for (&observable, &value) in table {
                let computed = match errors {
                    None => theory.get(observable),
                    Some(e) => e.get(&observable).copied(),
                };
                let tolerance = match kind {
                    CellKind::Value => VALUE_TOLERANCE,
                    CellKind::PercentError => PERCENT_TOLERANCE,
                };
                out.push(CellCheck {
                    label: row.record.label.clone(),
                    method,
                    observable,
                    kind,
                    published: value,
                    computed: computed.unwrap_or(f64::NAN),
                    tolerance,
                });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::capillary::solve_sphere;

    #[test]
    fn dataset_shape() {
        let data = builtin_dataset();
        assert_eq!(data.len(), 8);
        assert_eq!(data.iter().filter(|r| r.table == 1).count(), 4);
        assert!(data.iter().all(|r| !r.measured.is_empty()));

        let first = &data[0];
        assert_eq!(first.volume, 6.75e-3);
        assert!((first.contact_angle_deg() - 72.0).abs() < 1e-12);
        assert_eq!(first.measured[&Observable::ContactRadius], 0.1748);
        assert_eq!(first.measured[&Observable::ApexHeight], 0.1148);

        let pmma = &data[3];
        assert_eq!(pmma.volume, 0.1234);
        assert!((pmma.contact_angle_deg() - 73.44).abs() < 1e-12);
        assert_eq!(pmma.measured[&Observable::ContactRadius], 0.4897);
        assert!(!pmma.measured.contains_key(&Observable::ApexHeight));

        let last = &data[7];
        assert!((last.volume - 1.037e-2).abs() < 1e-15);
        assert!((last.contact_angle_deg() - 132.4).abs() < 1e-12);
        assert_eq!(last.measured[&Observable::EquatorialRadius], 0.1536);
        assert_eq!(last.measured[&Observable::ContactRadius], 0.1191);
        assert_eq!(last.measured[&Observable::ApexToEquator], 0.1299);
    }

    #[test]
    fn carbon_steel_height_column_is_apex_height() {
        for rec in builtin_dataset()
            .iter()
            .filter(|r| r.label.contains("steel"))
        {
            let cap = solve_sphere(&rec.spec().unwrap()).unwrap();
            let published = rec.published.as_ref().unwrap().sphere[&Observable::ApexHeight];
            let apex = cap.radius * (1.0 - rec.contact_angle.cos());
            assert!((apex - published).abs() < 5e-5, "{}: {apex}", rec.label);
            assert!(rec.notes.iter().any(|n| n == APEX_HEIGHT_NOTE));
        }
    }

    #[test]
    fn headline_errors() {
        let data = builtin_dataset();
        let row = compare(&data[0]).unwrap();
        let e = row.perturbative_errors[&Observable::ContactRadius];
        assert!((e - 0.3).abs() < 0.1, "{e}");
        let row = compare(&data[4]).unwrap();
        let e = row.sphere_errors[&Observable::ApexToEquator];
        assert!((e - 3.5).abs() < 0.1, "{e}");
    }

    #[test]
    fn matching_measurement_has_zero_error() {
        let fluid = FluidParams::new(1.0, 72.0, 0.0).unwrap();
        let spec = DropSpec::from_degrees(0.02, 110.0).unwrap();
        let obs = solve_sphere(&spec).unwrap().observables();
        let rec = ExperimentRecord {
            label: "synthetic".into(),
            table: 0,
            volume: spec.volume(),
            contact_angle: spec.contact_angle(),
            fluid,
            measured: obs.present().collect(),
            published: None,
            notes: Vec::new(),
        };
        let row = compare(&rec).unwrap();
        assert_eq!(row.sphere_errors.len(), 4);
        assert!(row.sphere_errors.values().all(|&e| e == 0.0));
        assert!(reproduction_checks(&[row]).is_empty());
    }

    #[test]
    fn anomalies_flagged() {
        let rows = compare_all(&builtin_dataset()).unwrap();
        let flagged: Vec<_> = rows
            .iter()
            .filter(|r| r.anomaly)
            .map(|r| r.record.label.as_str())
            .collect();
        assert_eq!(
            flagged,
            vec!["water/carbon steel #3", "mercury/glass V=0.370e-3"]
        );
    }

    #[test]
    fn largest_mercury_drop_is_past_small_bond() {
        let rows = compare_all(&builtin_dataset()).unwrap();
        let big = &rows[7];
        assert!((big.bond - 1.33).abs() < 0.01);
        assert!(big.large_bond);
        assert_eq!(rows.iter().filter(|r| r.large_bond).count(), 3);
    }

    #[test]
    fn cell_count() {
        let rows = compare_all(&builtin_dataset()).unwrap();
        let checks = reproduction_checks(&rows);
        let values = checks.iter().filter(|c| c.kind == CellKind::Value).count();
        let pct = checks
            .iter()
            .filter(|c| c.kind == CellKind::PercentError)
            .count();
        // 3 x 4 + 2 water/PMMA cells, 4 x 6 mercury cells
        assert_eq!(values, 3 * 4 + 2 + 4 * 6);
        assert_eq!(pct, values);
    }
}
