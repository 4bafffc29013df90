//! Equilibrium shapes of axisymmetric sessile drops.
//!
//! Three models of the same drop are provided:
//!
//! * [`capillary`]: the weightless spherical cap,
//! * [`perturbation`]: the first-order gravity correction in a polar
//!   coordinate that stays smooth across the equator,
//! * [`oracle`]: a shooting solution of the full Young-Laplace equation,
//!   used as ground truth.
//!
//! [`validation`] compares all of them against published sessile-drop
//! measurements, and [`report`] renders the comparison.

pub mod capillary;
pub mod error;
pub mod oracle;
pub mod perturbation;
pub mod profile;
pub mod report;
pub mod validation;

pub use capillary::{DropSpec, FluidParams, SphericalCap};
pub use error::{Error, Result};
pub use profile::{DropObservables, Observable, ProfilePoint, ProfileSamples};
