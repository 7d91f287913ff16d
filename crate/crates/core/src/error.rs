use thiserror::Error;

/// Errors raised by the beam model, the quadrature engine and the frame transforms.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum BeamError {
    #[error("Hermite order {order} exceeds the supported maximum {max}")]
    HermiteOrder { order: u32, max: u32 },

    #[error("invalid beam geometry: {0}")]
    Geometry(String),

    #[error("polarization is not normalized: |alpha|^2 + |beta|^2 = {norm}")]
    PolarizationNorm { norm: f64 },

    #[error("helicity must lie in [-1, 1], got {0}")]
    HelicityRange(f64),

    #[error("mode superposition is empty")]
    EmptySuperposition,

    #[error("mode superposition has zero norm")]
    ZeroNorm,

    #[error("mode index ({n}, {m}) exceeds the maximum order {max_order}")]
    ModeOrder { n: u32, m: u32, max_order: u32 },

    #[error("mode coefficient for ({n}, {m}) is not finite")]
    NonFiniteCoefficient { n: u32, m: u32 },

    #[error("three-mode summary requires only (0,0), (0,1), (1,0); found ({n}, {m})")]
    ExtraMode { n: u32, m: u32 },

    #[error("invalid quadrature setup: {0}")]
    Quadrature(String),

    #[error("non-finite integrand sample at (x = {x}, y = {y}, z = {z})")]
    NonFiniteSample { x: f64, y: f64, z: f64 },

    #[error("vanishing flux: the integrated p_z is {0}, centroid is undefined")]
    VanishingFlux(f64),

    #[error("tilt angle theta = {theta} is outside [0, {theta_max}): tan(theta) diverges near pi/2")]
    TiltAngle { theta: f64, theta_max: f64 },

    #[error("azimuth phi = {0} is not finite")]
    Azimuth(f64),
}

pub type Result<T> = std::result::Result<T, BeamError>;
