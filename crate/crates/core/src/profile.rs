//! Sampled meridian profiles and the scalar observables reported for a drop.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

/// One point of a meridian profile.
///
/// `parameter` is whatever the producing solver marches in: the polar angle
/// for the closed-form profiles, arc length for the numerical one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfilePoint {
    pub parameter: f64,
    pub radial: f64,
    pub height: f64,
}

/// Measurable scalars of a sessile drop.
///
/// The equatorial fields exist only for obtuse contact angles, where the
/// profile bulges past the contact line.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct DropObservables {
    pub contact_radius: f64,
    pub equatorial_radius: Option<f64>,
    pub apex_height: f64,
    pub equator_height: Option<f64>,
    pub apex_to_equator: Option<f64>,
}

/// Names of the observables, in report order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Observable {
    EquatorialRadius,
    ContactRadius,
    ApexHeight,
    ApexToEquator,
}

impl Observable {
    pub const ALL: [Observable; 4] = [
        Observable::EquatorialRadius,
        Observable::ContactRadius,
        Observable::ApexHeight,
        Observable::ApexToEquator,
    ];

    pub fn symbol(self) -> &'static str {
        match self {
            Observable::EquatorialRadius => "rho1",
            Observable::ContactRadius => "rho0",
            Observable::ApexHeight => "h",
            Observable::ApexToEquator => "h~",
        }
    }

    pub fn key(self) -> &'static str {
        match self {
            Observable::EquatorialRadius => "equatorial_radius",
            Observable::ContactRadius => "contact_radius",
            Observable::ApexHeight => "apex_height",
            Observable::ApexToEquator => "apex_to_equator",
        }
    }
}

impl DropObservables {
    pub fn get(&self, which: Observable) -> Option<f64> {
        match which {
            Observable::EquatorialRadius => self.equatorial_radius,
            Observable::ContactRadius => Some(self.contact_radius),
            Observable::ApexHeight => Some(self.apex_height),
            Observable::ApexToEquator => self.apex_to_equator,
        }
    }

    pub fn set(&mut self, which: Observable, value: Option<f64>) {
        match which {
            Observable::EquatorialRadius => self.equatorial_radius = value,
            Observable::ContactRadius => self.contact_radius = value.unwrap_or(f64::NAN),
            Observable::ApexHeight => self.apex_height = value.unwrap_or(f64::NAN),
            Observable::ApexToEquator => self.apex_to_equator = value,
        }
    }

    /// Observables that carry a value, in report order.
    pub fn present(&self) -> impl Iterator<Item = (Observable, f64)> + '_ {
        Observable::ALL
            .into_iter()
            .filter_map(move |o| self.get(o).map(|v| (o, v)))
    }
}

/// An ordered apex-to-contact profile together with its observables.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileSamples {
    pub points: Vec<ProfilePoint>,
    pub observables: DropObservables,
}

impl ProfileSamples {
    pub fn max_radial(&self) -> f64 {
        self.points.iter().map(|p| p.radial).fold(0.0, f64::max)
    }

    pub fn arc_lengths(&self) -> Vec<f64> {
        let mut acc = 0.0;
        let mut out = Vec::with_capacity(self.points.len());
        out.push(0.0);
        for w in self.points.windows(2) {
            acc += (w[1].radial - w[0].radial).hypot(w[1].height - w[0].height);
            out.push(acc);
        }
        out
    }

    /// Volume of the solid of revolution bounded by the profile and the
    /// substrate, by the trapezoidal rule on `pi rho^2 dz`.
    pub fn revolved_volume(&self) -> f64 {
        self.points
            .windows(2)
            .map(|w| {
                let dz = w[0].height - w[1].height;
                0.5 * PI * (w[0].radial.powi(2) + w[1].radial.powi(2)) * dz
            })
            .sum()
    }

    /// Re-samples the polyline at `samples` points equally spaced in arc
    /// length, linearly interpolated. The parameter column becomes arc length.
    pub fn resample_arc_length(&self, samples: usize) -> ProfileSamples {
        let s = self.arc_lengths();
        let total = *s.last().unwrap_or(&0.0);
        let n = samples.max(2);
        let mut points = Vec::with_capacity(n);
        let mut seg = 0;
        for i in 0..n {
            let target = total * i as f64 / (n - 1) as f64;
            while seg + 2 < s.len() && s[seg + 1] < target {
                seg += 1;
            }
            let (a, b) = (self.points[seg], self.points[(seg + 1).min(s.len() - 1)]);
            let span = s[(seg + 1).min(s.len() - 1)] - s[seg];
            let t = if span > 0.0 {
                ((target - s[seg]) / span).clamp(0.0, 1.0)
            } else {
                0.0
            };
            points.push(ProfilePoint {
                parameter: target,
                radial: a.radial + t * (b.radial - a.radial),
                height: a.height + t * (b.height - a.height),
            });
        }
        ProfileSamples {
            points,
            observables: self.observables,
        }
    }
}
