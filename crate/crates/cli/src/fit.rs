//! Inverse problem: surface tension from measured drop dimensions.
//!
//! The search runs over `ln(gamma)` with golden-section minimisation of the
//! summed squared relative mismatch. The first-order closed form is cheap
//! and supplies the starting point; the integrated profile decides the
//! answer.

use serde::Serialize;

use sessile_core::capillary::solve_sphere;
use sessile_core::oracle::{shoot_for_volume, OracleConfig};
use sessile_core::perturbation;
use sessile_core::validation::ObservableMap;
use sessile_core::{DropObservables, DropSpec, Error, FluidParams, Observable};

pub const DEFAULT_BRACKET: (f64, f64) = (1.0, 2000.0);
const LOG_TOLERANCE: f64 = 1e-7;
/// Distance in ln(gamma) from a bracket end that counts as "on the edge".
const EDGE_TOLERANCE: f64 = 1e-4;
const MAX_GOLDEN_ITERATIONS: usize = 200;

#[derive(Debug, Clone)]
pub struct FitRequest {
    pub spec: DropSpec,
    pub density: f64,
    pub gravity: f64,
    pub measured: ObservableMap,
    pub bracket: (f64, f64),
    pub config: OracleConfig,
}

#[derive(Debug, Clone, Serialize)]
pub struct FitResult {
    pub surface_tension: f64,
    pub residual: f64,
    pub bond: f64,
    /// Estimate from the first-order closed form alone.
    pub perturbative_estimate: f64,
    pub perturbative_residual: f64,
    /// Mismatch of the weightless cap, which does not depend on gamma.
    pub sphere_residual: f64,
    pub oracle_evaluations: usize,
    pub predicted: DropObservables,
}

fn mismatch(pred: &DropObservables, measured: &ObservableMap) -> f64 {
    let mut sum = 0.0;
    for (&o, &m) in measured {
        match pred.get(o) {
            Some(p) => sum += ((p - m) / m).powi(2),
            None => return f64::INFINITY,
        }
    }
    sum
}

/// Golden-section minimum of `f` on `[a, b]`. Returns `(x, f(x))`.
pub fn golden_section(
    mut f: impl FnMut(f64) -> f64,
    mut a: f64,
    mut b: f64,
    tolerance: f64,
) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..MAX_GOLDEN_ITERATIONS {
        if (b - a).abs() <= tolerance {
            break;
        }
        // non-finite values compare as worse than anything finite
        if fc < fd || (fc.is_finite() && !fd.is_finite()) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    if fc <= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

fn validate(req: &FitRequest) -> sessile_core::Result<()> {
    if req.gravity == 0.0 {
        return Err(Error::Usage(
            "surface tension is not identifiable without gravity (g = 0)".into(),
        ));
    }
    if req.measured.is_empty() {
        return Err(Error::Usage(
            "at least one measured dimension is required".into(),
        ));
    }
    for (o, v) in &req.measured {
        if !(v.is_finite() && *v > 0.0) {
            return Err(Error::InvalidParameter {
                name: "measurement",
                reason: format!("{} must be positive, got {v}", o.key()),
            });
        }
        if !req.spec.is_obtuse()
            && matches!(o, Observable::EquatorialRadius | Observable::ApexToEquator)
        {
            return Err(Error::Usage(format!(
                "{} is undefined for contact angles up to 90 degrees",
                o.key()
            )));
        }
    }
    let (lo, hi) = req.bracket;
    if !(lo > 0.0 && hi > lo && hi.is_finite()) {
        return Err(Error::InvalidParameter {
            name: "bracket",
            reason: format!("need 0 < min < max, got [{lo}, {hi}]"),
        });
    }
    req.config.validate()?;
    FluidParams::new(req.density, lo, req.gravity)?;
    Ok(())
}

pub fn fit_surface_tension(req: &FitRequest) -> sessile_core::Result<FitResult> {
    validate(req)?;
    let fluid_at = |gamma: f64| FluidParams::new(req.density, gamma, req.gravity);
    let (lo, hi) = (req.bracket.0.ln(), req.bracket.1.ln());

    let first_order = |ln_gamma: f64| -> f64 {
        fluid_at(ln_gamma.exp())
            .and_then(|f| perturbation::observables(&req.spec, &f))
            .map_or(f64::INFINITY, |p| mismatch(&p, &req.measured))
    };
    let (ln_start, perturbative_residual) = golden_section(first_order, lo, hi, LOG_TOLERANCE);

    let mut evaluations = 0usize;
    let mut oracle = |ln_gamma: f64| -> f64 {
        evaluations += 1;
        fluid_at(ln_gamma.exp())
            .and_then(|f| shoot_for_volume(&req.spec, &f, &req.config))
            .map_or(f64::INFINITY, |s| mismatch(&s.observables, &req.measured))
    };

    // Walk outward from the first-order estimate until the oracle objective
    // rises on both sides; fall back to the full bracket otherwise.
    let mut step = 0.1;
    let f0 = oracle(ln_start);
    let (mut a, mut b) = (ln_start, ln_start);
    let mut fa = f0;
    while a > lo {
        a = (a - step).max(lo);
        let fa_new = oracle(a);
        if fa_new > fa && fa_new > f0 {
            break;
        }
        fa = fa_new;
        step *= 1.6;
    }
    step = 0.1;
    let mut fb = f0;
    while b < hi {
        b = (b + step).min(hi);
        let fb_new = oracle(b);
        if fb_new > fb && fb_new > f0 {
            break;
        }
        fb = fb_new;
        step *= 1.6;
    }
    let (ln_gamma, residual) = golden_section(&mut oracle, a, b, LOG_TOLERANCE);
    if !residual.is_finite() {
        return Err(Error::NoSolution(
            "the integrated profile failed everywhere in the bracket".into(),
        ));
    }
    if ln_gamma - lo < EDGE_TOLERANCE || hi - ln_gamma < EDGE_TOLERANCE {
        return Err(Error::NoSolution(format!(
            "no interior minimum in [{}, {}] dyn/cm: best gamma {:.4} sits on the bracket edge \
             (residual {residual:.3e}, sphere residual {:.3e})",
            req.bracket.0,
            req.bracket.1,
            ln_gamma.exp(),
            mismatch(&solve_sphere(&req.spec)?.observables(), &req.measured)
        )));
    }

    let gamma = ln_gamma.exp();
    let fluid = fluid_at(gamma)?;
    let solution = shoot_for_volume(&req.spec, &fluid, &req.config)?;
    let sphere = solve_sphere(&req.spec)?.observables();
    Ok(FitResult {
        surface_tension: gamma,
        residual,
        bond: sessile_core::capillary::bond_number(&req.spec, &fluid),
        perturbative_estimate: ln_start.exp(),
        perturbative_residual,
        sphere_residual: mismatch(&sphere, &req.measured),
        oracle_evaluations: evaluations,
        predicted: solution.observables,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_finds_parabola_minimum() {
        let (x, fx) = golden_section(|x| (x - 1.3).powi(2) + 2.0, -5.0, 5.0, 1e-9);
        assert!((x - 1.3).abs() < 1e-6);
        assert!((fx - 2.0).abs() < 1e-12);
    }

    #[test]
    fn golden_avoids_infinite_region() {
        let f = |x: f64| {
            if x < 0.0 {
                f64::INFINITY
            } else {
                (x - 0.2).powi(2)
            }
        };
        let (x, _) = golden_section(f, -3.0, 1.0, 1e-9);
        assert!((x - 0.2).abs() < 1e-6);
    }

    #[test]
    fn weightless_fit_is_rejected() {
        let req = FitRequest {
            spec: DropSpec::from_degrees(1e-3, 120.0).unwrap(),
            density: 13.6,
            gravity: 0.0,
            measured: [(Observable::ContactRadius, 0.1)].into_iter().collect(),
            bracket: DEFAULT_BRACKET,
            config: OracleConfig::default(),
        };
        assert!(matches!(fit_surface_tension(&req), Err(Error::Usage(_))));
    }

    #[test]
    fn recovers_synthetic_surface_tension() {
        let spec = DropSpec::from_degrees(2e-3, 130.0).unwrap();
        let fluid = FluidParams::new(13.6, 450.0, 980.7).unwrap();
        let truth = shoot_for_volume(&spec, &fluid, &OracleConfig::default()).unwrap();
        let req = FitRequest {
            spec,
            density: 13.6,
            gravity: 980.7,
            measured: truth.observables.present().collect(),
            bracket: DEFAULT_BRACKET,
            config: OracleConfig::default(),
        };
        let fit = fit_surface_tension(&req).unwrap();
        assert!(
            (fit.surface_tension / 450.0 - 1.0).abs() < 1e-4,
            "{}",
            fit.surface_tension
        );
        assert!(fit.residual < 1e-10);
        assert!(fit.sphere_residual > fit.residual);
    }
}
