//! Gravity sweep: first-order error against the integrated profile as the
//! Bond number is varied through the gravity scale.

use rayon::prelude::*;
use serde::Serialize;

use sessile_core::oracle::{perturbation_error, OracleConfig};
use sessile_core::{DropSpec, FluidParams, Observable};

#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub gravity_scale: f64,
    pub bond: Option<f64>,
    /// Relative errors keyed by observable; empty when the row failed.
    pub errors: Vec<(Observable, f64)>,
    pub failure: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepReport {
    pub rows: Vec<SweepRow>,
    /// Log-log slope of error against Bond number per observable, when at
    /// least three rows with non-zero Bond number succeeded.
    pub orders: Vec<(Observable, Option<f64>)>,
}

impl SweepReport {
    pub fn order(&self, which: Observable) -> Option<f64> {
        self.orders
            .iter()
            .find(|(o, _)| *o == which)
            .and_then(|e| e.1)
    }

    pub fn failures(&self) -> usize {
        self.rows.iter().filter(|r| r.failure.is_some()).count()
    }
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope(points: &[(f64, f64)]) -> Option<f64> {
    let logs: Vec<(f64, f64)> = points
        .iter()
        .filter(|(x, y)| *x > 0.0 && *y > 0.0)
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    if logs.len() < 3 {
        return None;
    }
    let n = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

pub fn run(
    spec: &DropSpec,
    fluid: &FluidParams,
    scales: &[f64],
    config: &OracleConfig,
) -> SweepReport {
    let rows: Vec<SweepRow> = scales
        .par_iter()
        .map(|&scale| {
            let outcome = fluid
                .with_gravity_scaled(scale)
                .and_then(|f| perturbation_error(spec, &f, config));
            match outcome {
                Ok(e) => SweepRow {
                    gravity_scale: scale,
                    bond: Some(e.bond),
                    errors: e.errors,
                    failure: None,
                },
                Err(err) => SweepRow {
                    gravity_scale: scale,
                    bond: None,
                    errors: Vec::new(),
                    failure: Some(err.to_string()),
                },
            }
        })
        .collect();

    let orders = Observable::ALL
        .into_iter()
        .filter(|o| rows.iter().any(|r| r.errors.iter().any(|(q, _)| q == o)))
        .map(|o| {
            let pts: Vec<(f64, f64)> = rows
                .iter()
                .filter_map(|r| {
                    let err = r.errors.iter().find(|(q, _)| *q == o)?.1;
                    Some((r.bond?, err))
                })
                .collect();
            (o, log_log_slope(&pts))
        })
        .collect();
    SweepReport { rows, orders }
}
