//! Pointwise electromagnetic fields and momentum densities of a polarized envelope.
//!
//! Units follow the `k = omega = 1` convention: `p` is in units of `hbar k` per
//! normalized volume and `j = r x p` carries an extra length.

use nalgebra::Vector3;
use num_complex::Complex64;

use crate::modes::EnvelopeSample;
use crate::polarization::PolarizationState;
use crate::Point3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VectorFieldSample {
    pub e: Vector3<Complex64>,
    pub b: Vector3<Complex64>,
}

impl VectorFieldSample {
    /// Time-averaged `Re[E x B*]` with `epsilon_0 = 1`.
    pub fn poynting_momentum(&self) -> Vector3<f64> {
        let (e, b) = (&self.e, &self.b);
        let bc = b.map(|c| c.conj());
        Vector3::new(
            (e.y * bc.z - e.z * bc.y).re,
            (e.z * bc.x - e.x * bc.z).re,
            (e.x * bc.y - e.y * bc.x).re,
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensitySample {
    pub point: Point3,
    pub p: Vector3<f64>,
    pub j: Vector3<f64>,
}

/// Electric and magnetic fields built from the scalar envelope and its gradient.
pub fn vector_fields(env: &EnvelopeSample, pol: &PolarizationState) -> VectorFieldSample {
    let i = Complex64::i();
    let (a, b) = (pol.alpha(), pol.beta());
    let EnvelopeSample { f, dfdx, dfdy } = *env;
    // omega = k = 1
    let e = Vector3::new(i * a * f, i * b * f, i * i * (a * dfdx + b * dfdy));
    let bf = Vector3::new(-i * b * f, i * a * f, i * (-i) * (b * dfdx - a * dfdy));
    VectorFieldSample { e, b: bf }
}

/// Linear momentum density for helicity `sigma`, in units of `hbar k`.
pub fn momentum_density(env: &EnvelopeSample, sigma: f64) -> Vector3<f64> {
    let EnvelopeSample { f, dfdx, dfdy } = *env;
    let fx = f * dfdx.conj();
    let fy = f * dfdy.conj();
    Vector3::new(-fx.im + sigma * fy.re, -fy.im - sigma * fx.re, f.norm_sqr())
}

/// `j = r x p`.
pub fn angular_momentum_density(point: &Point3, p: &Vector3<f64>) -> Vector3<f64> {
    point.coords.cross(p)
}

pub fn density_sample(point: Point3, env: &EnvelopeSample, sigma: f64) -> DensitySample {
    let p = momentum_density(env, sigma);
    DensitySample { point, p, j: angular_momentum_density(&point, &p) }
}
