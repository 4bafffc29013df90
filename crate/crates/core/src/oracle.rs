//! Numerical solution of the full axisymmetric Young-Laplace problem.
//!
//! The meridian is marched in arc length `s` from the apex, with the depth
//! `u` below the apex and the turning angle `phi` of the tangent:
//!
//! ```text
//! drho/ds = cos(phi)
//! du/ds   = sin(phi)
//! dphi/ds = 2 k + (rho g / gamma) u - sin(phi) / rho
//! dV/ds   = pi rho^2 sin(phi)
//! ```
//!
//! where `k` is the apex curvature. Arc length has no coordinate singularity
//! at the equator. The `sin(phi)/rho` term is removable at the apex and the
//! march is started from a Taylor series there. The march ends exactly on
//! `phi = contact angle` by switching the last step to `phi` as independent
//! variable. The apex curvature is then found by bisection so that the
//! enclosed volume matches the requested one.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::capillary::{solve_sphere, DropSpec, FluidParams};
use crate::error::{Error, Result};
use crate::perturbation;
use crate::profile::{DropObservables, Observable, ProfilePoint, ProfileSamples};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleConfig {
    /// Arc-length step as a fraction of the reference radius.
    pub step_fraction: f64,
    /// Relative volume mismatch accepted by the shooting loop.
    pub shooting_tolerance: f64,
    pub max_shooting_iterations: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            step_fraction: 5e-4,
            shooting_tolerance: 1e-10,
            max_shooting_iterations: 200,
        }
    }
}

impl OracleConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.step_fraction > 0.0 && self.step_fraction <= 1e-2) {
            return Err(Error::InvalidParameter {
                name: "step_fraction",
                reason: format!("must lie in (0, 1e-2], got {}", self.step_fraction),
            });
        }
        if !(self.shooting_tolerance > 0.0) {
            return Err(Error::InvalidParameter {
                name: "shooting_tolerance",
                reason: format!("must be positive, got {}", self.shooting_tolerance),
            });
        }
        Ok(())
    }
}

/// Result of one march from the apex to the contact line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntegratedProfile {
    pub apex_curvature: f64,
    /// Points parameterised by arc length, heights measured from the substrate.
    pub profile: ProfileSamples,
    pub volume: f64,
    pub arc_length: f64,
    /// Step-halving estimate of the relative error in volume and endpoint.
    pub richardson_error: f64,
}

/// A converged solution of the shooting problem.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleSolution {
    /// Apex curvature `k`; the apex total curvature is `2k` and `k` plays the
    /// role of the pressure constant in the hydrostatic split.
    pub apex_curvature: f64,
    pub profile: ProfileSamples,
    pub observables: DropObservables,
    pub achieved_volume: f64,
    pub iterations: usize,
    pub richardson_error: f64,
}

impl OracleSolution {
    pub fn total_apex_curvature(&self) -> f64 {
        2.0 * self.apex_curvature
    }

    pub fn identity_residual(&self, spec: &DropSpec, fluid: &FluidParams) -> Result<f64> {
        perturbation::pressure_identity_residual(&self.profile, spec, fluid, self.apex_curvature)
    }
}

/// State carried along the meridian.
#[derive(Debug, Clone, Copy)]
struct State {
    s: f64,
    rho: f64,
    u: f64,
    phi: f64,
    vol: f64,
}

#[derive(Debug, Clone, Copy)]
struct Equation {
    curvature: f64,
    gravity_ratio: f64,
}

impl Equation {
    fn phi_rate(&self, rho: f64, u: f64, phi: f64) -> f64 {
        2.0 * self.curvature + self.gravity_ratio * u - phi.sin() / rho
    }

    /// Derivatives of (rho, u, phi, vol) with respect to arc length.
    fn arc_rates(&self, y: [f64; 4]) -> [f64; 4] {
        let [rho, u, phi, _] = y;
        let (sin, cos) = phi.sin_cos();
        [cos, sin, self.phi_rate(rho, u, phi), PI * rho * rho * sin]
    }

    /// Taylor start near the apex:
    /// `phi = k s + c k s^3 / 8`, `rho = s - k^2 s^3 / 6`,
    /// `u = k s^2 / 2 + (c k / 8 - k^3 / 6) s^4 / 4`, `V = pi k s^4 / 4`.
    fn series_start(&self, s: f64) -> State {
        let k = self.curvature;
        let c = self.gravity_ratio;
        let s2 = s * s;
        State {
            s,
            rho: s - k * k * s * s2 / 6.0,
            u: 0.5 * k * s2 + (c * k / 8.0 - k.powi(3) / 6.0) * s2 * s2 / 4.0,
            phi: k * s + c * k * s * s2 / 8.0,
            vol: 0.25 * PI * k * s2 * s2,
        }
    }

    fn rk4_arc(&self, st: &State, h: f64) -> State {
        let y = [st.rho, st.u, st.phi, st.vol];
        let add = |y: [f64; 4], k: [f64; 4], f: f64| {
            [
                y[0] + f * k[0],
                y[1] + f * k[1],
                y[2] + f * k[2],
                y[3] + f * k[3],
            ]
        };
        let k1 = self.arc_rates(y);
        let k2 = self.arc_rates(add(y, k1, 0.5 * h));
        let k3 = self.arc_rates(add(y, k2, 0.5 * h));
        let k4 = self.arc_rates(add(y, k3, h));
        let mut out = y;
        for i in 0..4 {
            out[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        State {
            s: st.s + h,
            rho: out[0],
            u: out[1],
            phi: out[2],
            vol: out[3],
        }
    }

    /// One RK4 step with `phi` as independent variable, landing exactly on
    /// `phi_end`. Requires `dphi/ds > 0` along the step.
    fn rk4_to_angle(&self, st: &State, phi_end: f64) -> Result<State> {
        let dphi = phi_end - st.phi;
        let rates = |phi: f64, y: [f64; 4]| -> Result<[f64; 4]> {
            let [s, rho, u, _] = y;
            let w = self.phi_rate(rho, u, phi);
            if !(w > 0.0) {
                return Err(Error::InvalidRegime { arc_length: s, phi });
            }
            let (sin, cos) = phi.sin_cos();
            Ok([1.0 / w, cos / w, sin / w, PI * rho * rho * sin / w])
        };
        let add = |y: [f64; 4], k: [f64; 4], f: f64| {
            [
                y[0] + f * k[0],
                y[1] + f * k[1],
                y[2] + f * k[2],
                y[3] + f * k[3],
            ]
        };
        let y = [st.s, st.rho, st.u, st.vol];
        let k1 = rates(st.phi, y)?;
        let k2 = rates(st.phi + 0.5 * dphi, add(y, k1, 0.5 * dphi))?;
        let k3 = rates(st.phi + 0.5 * dphi, add(y, k2, 0.5 * dphi))?;
        let k4 = rates(phi_end, add(y, k3, dphi))?;
        let mut out = y;
        for i in 0..4 {
            out[i] += dphi / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        Ok(State {
            s: out[0],
            rho: out[1],
            u: out[2],
            phi: phi_end,
            vol: out[3],
        })
    }
}

struct March {
    end: State,
    equator: Option<State>,
    points: Vec<State>,
}

/// Length used to size the arc-length step: the apex radius of curvature,
/// capped by the capillary length so that flat puddles are still resolved.
fn reference_length(curvature: f64, fluid: &FluidParams) -> f64 {
    let apex = curvature.recip();
    fluid.capillary_length().map_or(apex, |l| apex.min(l))
}

fn march(
    curvature: f64,
    contact_angle: f64,
    fluid: &FluidParams,
    step_fraction: f64,
    record: bool,
) -> Result<March> {
    let eq = Equation {
        curvature,
        gravity_ratio: fluid.gravity_ratio(),
    };
    let h = step_fraction * reference_length(curvature, fluid);
    let max_arc = 20.0 / curvature;
    let wants_equator = contact_angle > FRAC_PI_2;

    // Keep the series start well short of the contact angle for very flat caps.
    let s0 = h.min(0.25 * contact_angle / curvature);
    let mut st = eq.series_start(s0);
    let mut points = Vec::new();
    if record {
        points.push(State {
            s: 0.0,
            rho: 0.0,
            u: 0.0,
            phi: 0.0,
            vol: 0.0,
        });
        points.push(st);
    }
    let mut equator = None;
    loop {
        let next = eq.rk4_arc(&st, h);
        if !(next.phi > st.phi) {
            return Err(Error::InvalidRegime {
                arc_length: next.s,
                phi: next.phi,
            });
        }
        if wants_equator && equator.is_none() && next.phi >= FRAC_PI_2 {
            equator = Some(eq.rk4_to_angle(&st, FRAC_PI_2)?);
        }
        if next.phi >= contact_angle {
            let end = eq.rk4_to_angle(&st, contact_angle)?;
            if record {
                points.push(end);
            }
            return Ok(March {
                end,
                equator,
                points,
            });
        }
        st = next;
        if record {
            points.push(st);
        }
        if st.s > max_arc {
            return Err(Error::Geometry {
                max_arc_length: max_arc,
            });
        }
    }
}

fn observables_from(end: &State, equator: Option<&State>) -> DropObservables {
    let h = end.u;
    DropObservables {
        contact_radius: end.rho,
        equatorial_radius: equator.map(|e| e.rho),
        apex_height: h,
        equator_height: equator.map(|e| h - e.u),
        apex_to_equator: equator.map(|e| e.u),
    }
}

/// Marches the profile with apex curvature `apex_curvature` until the
/// turning angle reaches `contact_angle`, and repeats with half the step to
/// estimate the discretisation error.
pub fn integrate_profile(
    apex_curvature: f64,
    contact_angle: f64,
    fluid: &FluidParams,
    config: &OracleConfig,
) -> Result<IntegratedProfile> {
    config.validate()?;
    if !(apex_curvature.is_finite() && apex_curvature > 0.0) {
        return Err(Error::InvalidParameter {
            name: "apex_curvature",
            reason: format!("must be positive, got {apex_curvature}"),
        });
    }
    if !(contact_angle > 0.0 && contact_angle < PI) {
        return Err(Error::InvalidParameter {
            name: "contact_angle",
            reason: format!("must lie strictly inside (0, pi), got {contact_angle}"),
        });
    }
    let coarse = march(
        apex_curvature,
        contact_angle,
        fluid,
        config.step_fraction,
        true,
    )?;
    let fine = march(
        apex_curvature,
        contact_angle,
        fluid,
        0.5 * config.step_fraction,
        false,
    )?;
    // RK4: the coarse error is about 16/15 of the coarse-fine difference.
    let rel = |a: f64, b: f64| {
        if b == 0.0 {
            (a - b).abs()
        } else {
            ((a - b) / b).abs()
        }
    };
    let richardson_error = [
        rel(coarse.end.vol, fine.end.vol),
        rel(coarse.end.rho, fine.end.rho),
        rel(coarse.end.u, fine.end.u),
    ]
    .into_iter()
    .fold(0.0, f64::max)
        * 16.0
        / 15.0;

    let apex_height = coarse.end.u;
    let points = coarse
        .points
        .iter()
        .map(|p| ProfilePoint {
            parameter: p.s,
            radial: p.rho,
            height: apex_height - p.u,
        })
        .collect();
    Ok(IntegratedProfile {
        apex_curvature,
        profile: ProfileSamples {
            points,
            observables: observables_from(&coarse.end, coarse.equator.as_ref()),
        },
        volume: coarse.end.vol,
        arc_length: coarse.end.s,
        richardson_error,
    })
}

/// Finds the apex curvature whose profile encloses `spec.volume()`.
pub fn shoot_for_volume(
    spec: &DropSpec,
    fluid: &FluidParams,
    config: &OracleConfig,
) -> Result<OracleSolution> {
    config.validate()?;
    let cap = solve_sphere(spec)?;
    let target = spec.volume();
    let angle = spec.contact_angle();
    let volume_at = |k: f64| -> Result<f64> {
        Ok(march(k, angle, fluid, config.step_fraction, false)?.end.vol)
    };

    let mut iterations = 0;
    let mut bump = || -> Result<()> {
        iterations += 1;
        if iterations > config.max_shooting_iterations {
            return Err(Error::NoSolution(format!(
                "no apex curvature within {} iterations",
                config.max_shooting_iterations
            )));
        }
        Ok(())
    };

    // Enclosed volume decreases with apex curvature.
    let (mut lo, mut hi) = (0.1 / cap.radius, 10.0 / cap.radius);
    let mut v_lo = volume_at(lo)?;
    while v_lo < target {
        bump()?;
        lo *= 0.1;
        v_lo = volume_at(lo)?;
    }
    let mut v_hi = volume_at(hi)?;
    while v_hi > target {
        bump()?;
        hi *= 10.0;
        v_hi = volume_at(hi)?;
    }

    let curvature = loop {
        bump()?;
        let mid = (lo * hi).sqrt();
        let v = volume_at(mid)?;
        if !(v <= v_lo && v >= v_hi) {
            return Err(Error::NoSolution(format!(
                "volume not monotone in apex curvature near k = {mid:e}"
            )));
        }
        if ((v - target) / target).abs() < config.shooting_tolerance {
            break mid;
        }
        if v > target {
            lo = mid;
            v_lo = v;
        } else {
            hi = mid;
            v_hi = v;
        }
        if hi - lo <= 4.0 * f64::EPSILON * hi {
            break mid;
        }
    };

    let run = integrate_profile(curvature, angle, fluid, config)?;
    Ok(OracleSolution {
        apex_curvature: curvature,
        observables: run.profile.observables,
        profile: run.profile,
        achieved_volume: run.volume,
        iterations,
        richardson_error: run.richardson_error,
    })
}

/// Relative deviation of the first-order closed form from the oracle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerturbationError {
    pub bond: f64,
    pub perturbative: DropObservables,
    pub oracle: DropObservables,
    pub errors: Vec<(Observable, f64)>,
}

impl PerturbationError {
    pub fn get(&self, which: Observable) -> Option<f64> {
        self.errors.iter().find(|(o, _)| *o == which).map(|e| e.1)
    }
}

pub fn perturbation_error(
    spec: &DropSpec,
    fluid: &FluidParams,
    config: &OracleConfig,
) -> Result<PerturbationError> {
    let coeff = perturbation::coefficients(spec, fluid)?;
    let perturbative = coeff.observables();
    let oracle = shoot_for_volume(spec, fluid, config)?.observables;
    let errors = perturbative
        .present()
        .filter_map(|(o, p)| oracle.get(o).map(|q| (o, ((p - q) / q).abs())))
        .collect();
    Ok(PerturbationError {
        bond: coeff.bond,
        perturbative,
        oracle,
        errors,
    })
}
