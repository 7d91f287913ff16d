use num_complex::Complex64;

use crate::error::{BeamError, Result};

const NORM_TOL: f64 = 1e-12;

/// Transverse Jones pair `u = alpha x + beta y`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarizationState {
    alpha: Complex64,
    beta: Complex64,
}

impl PolarizationState {
    /// Requires `|alpha|^2 + |beta|^2 = 1` within 1e-12.
    pub fn new(alpha: Complex64, beta: Complex64) -> Result<Self> {
        let norm = alpha.norm_sqr() + beta.norm_sqr();
        if !norm.is_finite() || (norm - 1.0).abs() > NORM_TOL {
            return Err(BeamError::PolarizationNorm { norm });
        }
        Ok(Self { alpha, beta })
    }

    /// Rescales an arbitrary nonzero pair to unit norm.
    pub fn normalized(alpha: Complex64, beta: Complex64) -> Result<Self> {
        let norm = (alpha.norm_sqr() + beta.norm_sqr()).sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(BeamError::PolarizationNorm { norm: norm * norm });
        }
        Self::new(alpha / norm, beta / norm)
    }

    pub fn linear_x() -> Self {
        Self { alpha: Complex64::new(1.0, 0.0), beta: Complex64::new(0.0, 0.0) }
    }

    /// Circular polarization with helicity `+1` (`positive = true`) or `-1`.
    pub fn circular(positive: bool) -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let b = if positive { s } else { -s };
        Self { alpha: Complex64::new(s, 0.0), beta: Complex64::new(0.0, b) }
    }

    pub fn alpha(&self) -> Complex64 {
        self.alpha
    }

    pub fn beta(&self) -> Complex64 {
        self.beta
    }

    pub fn helicity(&self) -> f64 {
        helicity_of(self.alpha, self.beta)
    }
}

fn helicity_of(alpha: Complex64, beta: Complex64) -> f64 {
    let s = Complex64::i() * (alpha * beta.conj() - alpha.conj() * beta);
    debug_assert!(s.im.abs() < 1e-14, "helicity has imaginary residue {}", s.im);
    // rounding can push circular states a few ulp past +/-1
    s.re.clamp(-1.0, 1.0)
}

/// `sigma = i (alpha beta* - alpha* beta)` for an arbitrary pair, which must be normalized.
pub fn helicity(alpha: Complex64, beta: Complex64) -> Result<f64> {
    Ok(PolarizationState::new(alpha, beta)?.helicity())
}

pub(crate) fn check_helicity(sigma: f64) -> Result<f64> {
    if sigma.is_finite() && (-1.0..=1.0).contains(&sigma) {
        Ok(sigma)
    } else {
        Err(BeamError::HelicityRange(sigma))
    }
}
