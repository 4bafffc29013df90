//! Physical inputs and the weightless (spherical cap) drop.
//!
//! Without gravity the Young-Laplace equation has constant right-hand side and
//! the free surface is a piece of sphere. Everything else in the crate is
//! built as a correction to, or a numerical check against, this solution.
//!
//! Coordinates: `rho` is the distance from the symmetry axis, `z` the height
//! above the substrate. The sphere centre sits on the axis at `z0`, above the
//! substrate for obtuse contact angles and below it for acute ones.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::profile::{DropObservables, ProfilePoint, ProfileSamples};

/// Liquid density, liquid-vapour surface tension and gravitational acceleration.
///
/// Any coherent unit system works; the bundled data uses CGS.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FluidParams {
    density: f64,
    surface_tension: f64,
    gravity: f64,
}

impl FluidParams {
    pub fn new(density: f64, surface_tension: f64, gravity: f64) -> Result<Self> {
        if !(density.is_finite() && density > 0.0) {
            return Err(Error::InvalidParameter {
                name: "density",
                reason: format!("must be positive, got {density}"),
            });
        }
        if !(surface_tension.is_finite() && surface_tension > 0.0) {
            return Err(Error::InvalidParameter {
                name: "surface_tension",
                reason: format!("must be positive, got {surface_tension}"),
            });
        }
        if !(gravity.is_finite() && gravity >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "gravity",
                reason: format!("must be non-negative, got {gravity}"),
            });
        }
        Ok(Self {
            density,
            surface_tension,
            gravity,
        })
    }

    pub fn density(&self) -> f64 {
        self.density
    }

    pub fn surface_tension(&self) -> f64 {
        self.surface_tension
    }

    pub fn gravity(&self) -> f64 {
        self.gravity
    }

    /// `density * gravity / surface_tension`, the inverse squared capillary length.
    pub fn gravity_ratio(&self) -> f64 {
        self.density * self.gravity / self.surface_tension
    }

    /// `sqrt(surface_tension / (density * gravity))`; `None` without gravity.
    pub fn capillary_length(&self) -> Option<f64> {
        (self.gravity > 0.0).then(|| self.gravity_ratio().recip().sqrt())
    }

    /// Same fluid with gravity multiplied by `scale` (must stay non-negative).
    pub fn with_gravity_scaled(&self, scale: f64) -> Result<Self> {
        Self::new(self.density, self.surface_tension, self.gravity * scale)
    }

    pub fn with_surface_tension(&self, surface_tension: f64) -> Result<Self> {
        Self::new(self.density, surface_tension, self.gravity)
    }
}

/// Drop volume and equilibrium contact angle (radians).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DropSpec {
    volume: f64,
    contact_angle: f64,
}

impl DropSpec {
    pub fn new(volume: f64, contact_angle: f64) -> Result<Self> {
        if !(volume.is_finite() && volume > 0.0) {
            return Err(Error::InvalidParameter {
                name: "volume",
                reason: format!("must be positive, got {volume}"),
            });
        }
        if !(contact_angle > 0.0 && contact_angle < PI) {
            return Err(Error::InvalidParameter {
                name: "contact_angle",
                reason: format!("must lie strictly inside (0, pi), got {contact_angle}"),
            });
        }
        Ok(Self {
            volume,
            contact_angle,
        })
    }

    pub fn from_degrees(volume: f64, contact_angle_deg: f64) -> Result<Self> {
        Self::new(volume, contact_angle_deg.to_radians())
    }

    pub fn volume(&self) -> f64 {
        self.volume
    }

    pub fn contact_angle(&self) -> f64 {
        self.contact_angle
    }

    pub fn is_obtuse(&self) -> bool {
        self.contact_angle > PI / 2.0
    }
}

/// Admissible contact-angle window. Near 0 the cap degenerates into a film,
/// near pi the gravity corrections blow up.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngleGuard {
    pub min: f64,
    pub max: f64,
}

impl Default for AngleGuard {
    fn default() -> Self {
        Self {
            min: 0.5_f64.to_radians(),
            max: 179.5_f64.to_radians(),
        }
    }
}

impl AngleGuard {
    pub fn check(&self, angle: f64) -> Result<()> {
        if angle < self.min || angle > self.max || angle.is_nan() {
            return Err(Error::DegenerateAngle {
                angle_deg: angle.to_degrees(),
                min_deg: self.min.to_degrees(),
                max_deg: self.max.to_degrees(),
            });
        }
        Ok(())
    }
}

/// The weightless drop: a spherical cap cut by the substrate plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SphericalCap {
    pub radius: f64,
    /// Signed height of the sphere centre above the substrate.
    pub center_height: f64,
    pub contact_angle: f64,
    pub contact_radius: f64,
    /// Only present for obtuse contact angles.
    pub equatorial_radius: Option<f64>,
    pub apex_height: f64,
    /// Depth of the sphere's lowest point below the substrate, `R - z0`.
    pub base_offset: f64,
}

impl SphericalCap {
    /// Recomputed volume; equals the input volume up to rounding.
    pub fn volume(&self) -> f64 {
        cap_volume(self.radius, self.contact_angle)
    }

    pub fn observables(&self) -> DropObservables {
        let equator = self.equatorial_radius.map(|_| self.center_height);
        DropObservables {
            contact_radius: self.contact_radius,
            equatorial_radius: self.equatorial_radius,
            apex_height: self.apex_height,
            equator_height: equator,
            apex_to_equator: equator.map(|z1| self.apex_height - z1),
        }
    }
}

/// Young's relation `cos(angle) = adhesion / surface_tension - 1`.
pub fn contact_angle_from_adhesion(adhesion: f64, surface_tension: f64) -> Result<f64> {
    if !(surface_tension.is_finite() && surface_tension > 0.0) {
        return Err(Error::InvalidParameter {
            name: "surface_tension",
            reason: format!("must be positive, got {surface_tension}"),
        });
    }
    if !(0.0..=2.0 * surface_tension).contains(&adhesion) {
        return Err(Error::NoEquilibriumAngle {
            adhesion,
            surface_tension,
        });
    }
    Ok((adhesion / surface_tension - 1.0).clamp(-1.0, 1.0).acos())
}

/// Volume of a spherical cap of radius `radius` meeting the plane at `contact_angle`.
pub fn cap_volume(radius: f64, contact_angle: f64) -> f64 {
    let c = contact_angle.cos();
    PI / 3.0 * radius.powi(3) * (1.0 - c).powi(2) * (2.0 + c)
}

/// Volume per unit `R^3`, the shape factor inverted by [`solve_sphere`].
fn cap_shape_factor(contact_angle: f64) -> f64 {
    // (1 - cos)^2 = 4 sin^4(angle/2) keeps precision for small angles.
    let s = (0.5 * contact_angle).sin();
    PI / 3.0 * 4.0 * s.powi(4) * (2.0 + contact_angle.cos())
}

pub fn solve_sphere(spec: &DropSpec) -> Result<SphericalCap> {
    solve_sphere_guarded(spec, &AngleGuard::default())
}

pub fn solve_sphere_guarded(spec: &DropSpec, guard: &AngleGuard) -> Result<SphericalCap> {
    let angle = spec.contact_angle();
    guard.check(angle)?;
    let radius = (spec.volume() / cap_shape_factor(angle)).cbrt();
    let cos = angle.cos();
    let center_height = -radius * cos;
    // 1 - cos and 1 + cos written through half angles to avoid cancellation.
    let half = 0.5 * angle;
    let apex_height = 2.0 * radius * half.sin().powi(2);
    let base_offset = 2.0 * radius * half.cos().powi(2);
    Ok(SphericalCap {
        radius,
        center_height,
        contact_angle: angle,
        contact_radius: radius * angle.sin(),
        equatorial_radius: spec.is_obtuse().then_some(radius),
        apex_height,
        base_offset,
    })
}

/// Bond number `V^(2/3) * density * g / surface_tension`; zero without gravity.
pub fn bond_number(spec: &DropSpec, fluid: &FluidParams) -> f64 {
    spec.volume().powf(2.0 / 3.0) * fluid.gravity_ratio()
}

/// Samples the cap from apex to contact line.
///
/// The parameter is the polar angle `theta` seen from the sphere's lowest
/// point, sampled uniformly on `[0, contact_angle / 2]`; in this coordinate the
/// sphere is `r = 2R cos(theta)`, and the turning angle of the profile is
/// `2 theta`, so the samples are also uniform in arc length.
pub fn spherical_profile(cap: &SphericalCap, samples: usize) -> Result<ProfileSamples> {
    if samples < 2 {
        return Err(Error::TooFewSamples {
            got: samples,
            min: 2,
        });
    }
    let end = 0.5 * cap.contact_angle;
    let points = (0..samples)
        .map(|i| {
            let theta = end * i as f64 / (samples - 1) as f64;
            let r = 2.0 * cap.radius * theta.cos();
            ProfilePoint {
                parameter: theta,
                radial: r * theta.sin(),
                height: r * theta.cos() - cap.base_offset,
            }
        })
        .collect();
    Ok(ProfileSamples {
        points,
        observables: cap.observables(),
    })
}
