//! First-order gravity correction to the spherical cap.
//!
//! The drop height is expanded as `f = f0 + lambda * f1` with the Bond number
//! `lambda = V^(2/3) rho g / gamma`. The Cartesian correction of the upper
//! (concave) branch is singular at `rho = R`, which is only an artifact of
//! describing the surface as a graph over `rho`. Re-expressed in polar
//! coordinates centred at the lowest point of the weightless sphere,
//! `r(theta) = 2R cos(theta) + lambda r1(theta)`, the same correction is
//! smooth for every `theta` in `[0, pi/2)` and covers both branches.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4, PI};

use serde::{Deserialize, Serialize};

use crate::capillary::{
    bond_number, solve_sphere_guarded, AngleGuard, DropSpec, FluidParams, SphericalCap,
};
use crate::error::{Error, Result};
use crate::profile::{DropObservables, ProfilePoint, ProfileSamples};

/// Largest `rho / R` at which the Cartesian correction is evaluated.
pub const DEFAULT_CARTESIAN_GUARD: f64 = 0.95;

/// Smallest sample count accepted by [`perturbed_profile`].
pub const MIN_PROFILE_SAMPLES: usize = 16;

/// Constants of the first-order solution for one drop.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerturbationCoefficients {
    /// Bond number `lambda`.
    pub bond: f64,
    /// Growth of the contact radius due to gravity.
    pub contact_shift: f64,
    /// Constant `a` of the concave-branch equation (a length, always negative).
    pub pressure_const: f64,
    /// Integration constant `b`, including its `R^3 / V^(2/3)` prefactor.
    pub integration_const: f64,
    /// Distance `d = R (1 + cos angle)` from the substrate down to the pole.
    pub pole_offset: f64,
    /// Polar angle of the contact line.
    pub contact_polar_angle: f64,
    pub cap: SphericalCap,
    pub volume: f64,
    /// `density * g / gamma`.
    pub gravity_ratio: f64,
}

impl PerturbationCoefficients {
    pub fn new(spec: &DropSpec, fluid: &FluidParams) -> Result<Self> {
        Self::with_guard(spec, fluid, &AngleGuard::default())
    }

    pub fn with_guard(spec: &DropSpec, fluid: &FluidParams, guard: &AngleGuard) -> Result<Self> {
        let cap = solve_sphere_guarded(spec, guard)?;
        let r = cap.radius;
        let angle = spec.contact_angle();
        let cos = angle.cos();
        let one_minus_cos = 2.0 * (0.5 * angle).sin().powi(2);
        let gravity_ratio = fluid.gravity_ratio();
        let bond = bond_number(spec, fluid);
        let volume_scale = r.powi(3) / spec.volume().powf(2.0 / 3.0);

        let contact_shift =
            gravity_ratio * r.powi(3) / 6.0 * one_minus_cos.powi(2) / (angle.sin() * (2.0 + cos));
        let pressure_const = -r * one_minus_cos * (3.0 + cos) / (3.0 * (2.0 + cos));
        let integration_const =
            volume_scale * (cos / (2.0 * (2.0 + cos)) + 2.0 / 3.0 * (0.5 * angle).cos().ln());
        let pole_offset = cap.base_offset;
        let contact_polar_angle = ((cap.contact_radius + contact_shift) / pole_offset).atan();

        Ok(Self {
            bond,
            contact_shift,
            pressure_const,
            integration_const,
            pole_offset,
            contact_polar_angle,
            cap,
            volume: spec.volume(),
            gravity_ratio,
        })
    }

    /// True when the expansion parameter is not small.
    pub fn large_bond(&self) -> bool {
        self.bond > 1.0
    }

    /// `R^3 / V^(2/3)`, the length scale carried by `f1` and `r1`.
    pub fn volume_scale(&self) -> f64 {
        self.cap.radius.powi(3) / self.volume.powf(2.0 / 3.0)
    }

    /// `(3 (z0 + a) + 2R) / (6R)`, the dimensionless coefficient shared by
    /// the Cartesian and polar corrections.
    fn shape_coefficient(&self) -> f64 {
        let r = self.cap.radius;
        (3.0 * (self.cap.center_height + self.pressure_const) + 2.0 * r) / (6.0 * r)
    }

    /// Cartesian correction `f1(rho)` of the concave branch and its derivative,
    /// with the default guard.
    pub fn f1_concave(&self, rho: f64) -> Result<(f64, f64)> {
        self.f1_concave_guarded(rho, DEFAULT_CARTESIAN_GUARD)
    }

    /// Errors with [`Error::DivergenceGuard`] when `rho > guard * R`; the
    /// expression has a pole at `rho = R`.
    pub fn f1_concave_guarded(&self, rho: f64, guard: f64) -> Result<(f64, f64)> {
        let r = self.cap.radius;
        if !(rho >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "rho",
                reason: format!("must be non-negative, got {rho}"),
            });
        }
        if rho > guard * r {
            return Err(Error::DivergenceGuard {
                ratio: rho / r,
                guard,
            });
        }
        let k = self.volume_scale();
        let z0a = self.cap.center_height + self.pressure_const;
        let y = (r * r - rho * rho).sqrt();
        let value = k * ((3.0 * z0a + 2.0 * r) / (6.0 * y) - ((r + y) / (2.0 * r)).ln() / 3.0)
            + self.integration_const;
        // (R^3 - y^3) / (3 rho y^3) rewritten so that rho -> 0 is exact.
        let pole_free = rho * (r * r + r * y + y * y) / (3.0 * (r + y) * y.powi(3));
        let slope = k * (z0a * rho / (2.0 * y.powi(3)) + pole_free);
        Ok((value, slope))
    }

    /// Polar correction `r1(theta)` on `[0, pi/2)`.
    pub fn r1_polar(&self, theta: f64) -> Result<f64> {
        if !(0.0..PI / 2.0).contains(&theta) {
            return Err(Error::PolarDomain { theta });
        }
        Ok(self.r1_unchecked(theta))
    }

    fn r1_unchecked(&self, theta: f64) -> f64 {
        let c = theta.cos();
        let c2 = (2.0 * theta).cos();
        self.volume_scale() / c * (self.shape_coefficient() - 2.0 / 3.0 * c2 * c.ln())
            + self.integration_const * c2 / c
    }

    /// Corrected polar radius `r(theta) = 2R cos(theta) + lambda r1(theta)`.
    pub fn polar_radius(&self, theta: f64) -> f64 {
        let base = 2.0 * self.cap.radius * theta.cos();
        if self.bond == 0.0 {
            base
        } else {
            base + self.bond * self.r1_unchecked(theta)
        }
    }

    /// Profile point `(rho, z)` at polar angle `theta`.
    pub fn point(&self, theta: f64) -> (f64, f64) {
        let r = self.polar_radius(theta);
        (r * theta.sin(), r * theta.cos() - self.pole_offset)
    }

    /// `d/dtheta [sin(theta) r1(theta)]` at `pi/4`.
    fn equator_slope_term(&self) -> f64 {
        let k = self.volume_scale();
        2.0 * k * self.shape_coefficient() + 4.0 / 3.0 * k * FRAC_1_SQRT_2.ln()
            - 2.0 * self.integration_const
    }

    /// Polar angle of the equator to first order.
    pub fn equator_polar_angle(&self) -> f64 {
        FRAC_PI_4 + self.bond * self.equator_slope_term() / (4.0 * self.cap.radius)
    }

    pub fn observables(&self) -> DropObservables {
        let cap = &self.cap;
        let lambda = self.bond;
        let apex_height = cap.apex_height
            + lambda * (self.volume_scale() * self.shape_coefficient() + self.integration_const);
        let mut obs = DropObservables {
            contact_radius: cap.contact_radius + self.contact_shift,
            equatorial_radius: None,
            apex_height,
            equator_height: None,
            apex_to_equator: None,
        };
        if cap.equatorial_radius.is_some() {
            let r1_eq = self.r1_unchecked(FRAC_PI_4);
            obs.equatorial_radius = Some(cap.radius + lambda * FRAC_1_SQRT_2 * r1_eq);
            // z1 = z0 + R cos(2 theta1) + lambda cos(pi/4) r1(pi/4), with
            // R cos(2 theta1) taken from the equator condition.
            let z1 = cap.center_height - 0.5 * lambda * self.equator_slope_term()
                + lambda * FRAC_1_SQRT_2 * r1_eq;
            obs.equator_height = Some(z1);
            obs.apex_to_equator = Some(apex_height - z1);
        }
        obs
    }

    /// Pressure constant `kappa` from the linearised force balance at the
    /// contact line, consistent to first order with the corrected apex height.
    pub fn pressure_constant(&self) -> f64 {
        let cap = &self.cap;
        let r = cap.radius;
        let sin = cap.contact_angle.sin();
        let h = self.observables().apex_height;
        1.0 / r - self.contact_shift / (r * r * sin)
            + self.gravity_ratio * self.volume / (2.0 * PI * r * r * sin * sin)
            - 0.5 * self.gravity_ratio * h
    }
}

/// Convenience wrapper around [`PerturbationCoefficients::new`].
pub fn coefficients(spec: &DropSpec, fluid: &FluidParams) -> Result<PerturbationCoefficients> {
    PerturbationCoefficients::new(spec, fluid)
}

pub fn observables(spec: &DropSpec, fluid: &FluidParams) -> Result<DropObservables> {
    Ok(coefficients(spec, fluid)?.observables())
}

/// Corrected profile sampled uniformly in polar angle on `[0, theta0]`.
pub fn perturbed_profile(
    spec: &DropSpec,
    fluid: &FluidParams,
    samples: usize,
) -> Result<ProfileSamples> {
    if samples < MIN_PROFILE_SAMPLES {
        return Err(Error::TooFewSamples {
            got: samples,
            min: MIN_PROFILE_SAMPLES,
        });
    }
    let coeff = coefficients(spec, fluid)?;
    Ok(profile_from(&coeff, samples))
}

pub fn profile_from(coeff: &PerturbationCoefficients, samples: usize) -> ProfileSamples {
    let end = coeff.contact_polar_angle;
    let n = samples.max(2);
    let points = (0..n)
        .map(|i| {
            let theta = end * i as f64 / (n - 1) as f64;
            let (radial, height) = coeff.point(theta);
            ProfilePoint {
                parameter: theta,
                radial,
                height,
            }
        })
        .collect();
    ProfileSamples {
        points,
        observables: coeff.observables(),
    }
}

/// Relative residual of the exact force balance
/// `kappa + (rho g / 2 gamma) h = sin(angle) / rho0 + rho g V / (2 pi gamma rho0^2)`,
/// evaluated with the profile's own contact radius and apex height.
pub fn pressure_identity_residual(
    profile: &ProfileSamples,
    spec: &DropSpec,
    fluid: &FluidParams,
    kappa: f64,
) -> Result<f64> {
    let rho0 = profile.observables.contact_radius;
    if rho0 == 0.0 {
        return Err(Error::ZeroContactRadius);
    }
    let g = fluid.gravity_ratio();
    let lhs = kappa + 0.5 * g * profile.observables.apex_height;
    let rhs = spec.contact_angle().sin() / rho0 + g * spec.volume() / (2.0 * PI * rho0 * rho0);
    Ok(((lhs - rhs) / rhs).abs())
}
