//! Gaussian beam length scales.
//!
//! Everything is expressed in the internal unit system where the wavenumber
//! is 1, so lengths are measured in reduced wavelengths and the waist is
//! supplied as the dimensionless product `k * w0`.

use crate::error::{BeamError, Result};

/// Upper bound on the angular spread `2 / (k w0)` accepted by default.
pub const DEFAULT_MAX_ANGULAR_SPREAD: f64 = 0.2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamGeometry {
    w0: f64,
    k: f64,
}

impl BeamGeometry {
    /// Geometry with `k = 1` and waist `w0 = kw0`.
    pub fn new(kw0: f64) -> Result<Self> {
        Self::with_wavenumber(kw0, 1.0, DEFAULT_MAX_ANGULAR_SPREAD)
    }

    /// Geometry with an explicit wavenumber and paraxiality bound on `theta0`.
    pub fn with_wavenumber(w0: f64, k: f64, max_angular_spread: f64) -> Result<Self> {
        if !(w0.is_finite() && w0 > 0.0) {
            return Err(BeamError::Geometry(format!("waist w0 must be positive and finite, got {w0}")));
        }
        if !(k.is_finite() && k > 0.0) {
            return Err(BeamError::Geometry(format!("wavenumber k must be positive and finite, got {k}")));
        }
        let theta0 = 2.0 / (k * w0);
        if !(theta0 < max_angular_spread) {
            return Err(BeamError::Geometry(format!(
                "angular spread theta0 = 2/(k w0) = {theta0} violates the paraxial bound theta0 < {max_angular_spread}"
            )));
        }
        Ok(Self { w0, k })
    }

    pub fn w0(&self) -> f64 {
        self.w0
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn kw0(&self) -> f64 {
        self.k * self.w0
    }

    /// Rayleigh range `k w0^2 / 2`.
    pub fn rayleigh_range(&self) -> f64 {
        self.k * self.w0 * self.w0 / 2.0
    }

    /// Reduced wavelength `1 / k`.
    pub fn lambda_bar(&self) -> f64 {
        1.0 / self.k
    }

    /// Far-field divergence half-angle `2 / (k w0)`.
    pub fn angular_spread(&self) -> f64 {
        2.0 / (self.k * self.w0)
    }

    /// Spot size `w0 sqrt(1 + z^2 / L^2)`.
    pub fn spot_size(&self, z: f64) -> f64 {
        let zr = z / self.rayleigh_range();
        self.w0 * (1.0 + zr * zr).sqrt()
    }
}
