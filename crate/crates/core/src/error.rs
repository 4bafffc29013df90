use thiserror::Error;

/// Errors raised by the drop-shape solvers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("no equilibrium contact angle: adhesion {adhesion} outside [0, 2*{surface_tension}]")]
    NoEquilibriumAngle { adhesion: f64, surface_tension: f64 },

    #[error(
        "degenerate geometry: contact angle {angle_deg:.4} deg outside [{min_deg}, {max_deg}] deg"
    )]
    DegenerateAngle {
        angle_deg: f64,
        min_deg: f64,
        max_deg: f64,
    },

    #[error(
        "cartesian correction diverges near rho = R: rho/R = {ratio:.4} exceeds guard {guard}"
    )]
    DivergenceGuard { ratio: f64, guard: f64 },

    #[error("polar angle {theta} outside [0, pi/2)")]
    PolarDomain { theta: f64 },

    #[error("too few samples: {got} (need at least {min})")]
    TooFewSamples { got: usize, min: usize },

    #[error("profile did not reach the contact angle within arc length {max_arc_length:.6e}")]
    Geometry { max_arc_length: f64 },

    #[error("turning angle stopped increasing at s = {arc_length:.6e} (phi = {phi:.6})")]
    InvalidRegime { arc_length: f64, phi: f64 },

    #[error("shooting failed: {0}")]
    NoSolution(String),

    #[error("contact radius is zero")]
    ZeroContactRadius,

    #[error("usage: {0}")]
    Usage(String),
}

pub type Result<T> = std::result::Result<T, Error>;
