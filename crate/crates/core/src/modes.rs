//! Hermite-Gaussian basis and sparse mode superpositions.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_1_SQRT_2, LN_2, PI, SQRT_2};

use num_complex::Complex64;

use crate::error::{BeamError, Result};
use crate::geometry::BeamGeometry;
use crate::hermite::{hermite, ln_factorial, MAX_HERMITE_ORDER};
use crate::Point3;

pub const DEFAULT_MAX_ORDER: u32 = 8;

const UNIT_NORM_TOL: f64 = 1e-12;

/// Scalar envelope and its transverse gradient at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvelopeSample {
    pub f: Complex64,
    pub dfdx: Complex64,
    pub dfdy: Complex64,
}

impl EnvelopeSample {
    pub const ZERO: Self = Self {
        f: Complex64 { re: 0.0, im: 0.0 },
        dfdx: Complex64 { re: 0.0, im: 0.0 },
        dfdy: Complex64 { re: 0.0, im: 0.0 },
    };
}

/// Coefficients `f_nm` of `f = sum f_nm psi_nm`, iterated n-major, m-minor.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeSuperposition {
    coefficients: BTreeMap<(u32, u32), Complex64>,
    max_order: u32,
}

impl Default for ModeSuperposition {
    fn default() -> Self {
        Self::new(DEFAULT_MAX_ORDER)
    }
}

impl ModeSuperposition {
    pub fn new(max_order: u32) -> Self {
        Self { coefficients: BTreeMap::new(), max_order: max_order.min(MAX_HERMITE_ORDER) }
    }

    /// Builds a superposition with the default order cutoff.
    pub fn from_terms<I>(terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = ((u32, u32), Complex64)>,
    {
        let mut s = Self::default();
        for ((n, m), c) in terms {
            s.insert(n, m, c)?;
        }
        Ok(s)
    }

    /// The fundamental Gaussian `psi_00`.
    pub fn fundamental() -> Self {
        Self::from_terms([((0, 0), Complex64::new(1.0, 0.0))]).expect("order 0 is always valid")
    }

    /// Laguerre-Gaussian `LG^1_0` as `(psi_10 + i psi_01) / sqrt(2)`.
    pub fn laguerre_gauss_l1() -> Self {
        Self::from_terms([
            ((0, 1), Complex64::new(0.0, FRAC_1_SQRT_2)),
            ((1, 0), Complex64::new(FRAC_1_SQRT_2, 0.0)),
        ])
        .expect("order 1 is always valid")
    }

    /// Sets `f_nm`, adding onto an existing coefficient.
    pub fn insert(&mut self, n: u32, m: u32, c: Complex64) -> Result<()> {
        if n > self.max_order || m > self.max_order {
            return Err(BeamError::ModeOrder { n, m, max_order: self.max_order });
        }
        if !(c.re.is_finite() && c.im.is_finite()) {
            return Err(BeamError::NonFiniteCoefficient { n, m });
        }
        *self.coefficients.entry((n, m)).or_insert(Complex64::new(0.0, 0.0)) += c;
        Ok(())
    }

    pub fn get(&self, n: u32, m: u32) -> Complex64 {
        self.coefficients.get(&(n, m)).copied().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = ((u32, u32), Complex64)> + '_ {
        self.coefficients.iter().map(|(&k, &v)| (k, v))
    }

    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }

    pub fn max_order(&self) -> u32 {
        self.max_order
    }

    /// Highest populated `(n, m)` indices.
    pub fn populated_orders(&self) -> (u32, u32) {
        self.coefficients
            .keys()
            .fold((0, 0), |(a, b), &(n, m)| (a.max(n), b.max(m)))
    }

    /// `sum |f_nm|^2`, which equals `P_z`.
    pub fn norm_sqr(&self) -> f64 {
        self.coefficients.values().map(|c| c.norm_sqr()).sum()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() <= UNIT_NORM_TOL
    }

    pub fn normalized(&self) -> Result<Self> {
        if self.is_empty() {
            return Err(BeamError::EmptySuperposition);
        }
        let norm = self.norm_sqr();
        if !(norm > 0.0) {
            return Err(BeamError::ZeroNorm);
        }
        let s = norm.sqrt();
        Ok(Self {
            coefficients: self.coefficients.iter().map(|(&k, &v)| (k, v / s)).collect(),
            max_order: self.max_order,
        })
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self {
            coefficients: self.coefficients.iter().map(|(&k, &v)| (k, v * factor)).collect(),
            max_order: self.max_order,
        }
    }

    /// Rejects superpositions that cannot carry any flux.
    pub fn validate(&self) -> Result<()> {
        if self.is_empty() {
            return Err(BeamError::EmptySuperposition);
        }
        if !(self.norm_sqr() > 0.0) {
            return Err(BeamError::ZeroNorm);
        }
        Ok(())
    }
}

/// Per-point quantities shared by every mode: Hermite tables, Gaussian envelope, Gouy angle.
struct BasisPoint {
    hx: Vec<f64>,
    hy: Vec<f64>,
    // exp(ik(x^2+y^2) / (2(z - iL)))
    envelope: Complex64,
    // ik x / (z - iL) and ik y / (z - iL)
    gx: Complex64,
    gy: Complex64,
    gouy: f64,
    ln_prefactor: f64,
    scale: f64,
}

impl BasisPoint {
    fn new(nmax: u32, mmax: u32, point: &Point3, geom: &BeamGeometry) -> Self {
        let k = geom.k();
        let l = geom.rayleigh_range();
        let w = geom.spot_size(point.z);
        let scale = SQRT_2 / w;
        let u = scale * point.x;
        let v = scale * point.y;
        let q = Complex64::new(point.z, -l);
        let ik_over_q = Complex64::new(0.0, k) / q;
        let r2 = point.x * point.x + point.y * point.y;
        Self {
            hx: hermite_table(nmax, u),
            hy: hermite_table(mmax, v),
            envelope: (ik_over_q * (0.5 * r2)).exp(),
            gx: ik_over_q * point.x,
            gy: ik_over_q * point.y,
            gouy: (point.z / l).atan(),
            ln_prefactor: -(PI * w * w).ln(),
            scale,
        }
    }

    fn phase_and_norm(&self, n: u32, m: u32) -> Complex64 {
        let order = n + m;
        let ln_norm = 0.5
            * ((1.0 - f64::from(order)) * LN_2 + self.ln_prefactor - ln_factorial(n) - ln_factorial(m));
        let gouy = Complex64::from_polar(1.0, -f64::from(order + 1) * self.gouy);
        self.envelope * gouy * ln_norm.exp()
    }

    fn amplitude(&self, n: u32, m: u32) -> Complex64 {
        self.phase_and_norm(n, m) * (self.hx[n as usize] * self.hy[m as usize])
    }

    fn sample(&self, n: u32, m: u32) -> EnvelopeSample {
        let (n_, m_) = (n as usize, m as usize);
        let common = self.phase_and_norm(n, m);
        let hn = self.hx[n_];
        let hm = self.hy[m_];
        // H_n'(u) = 2n H_{n-1}(u), chain rule du/dx = sqrt(2)/w
        let dhn = if n == 0 { 0.0 } else { 2.0 * f64::from(n) * self.hx[n_ - 1] * self.scale };
        let dhm = if m == 0 { 0.0 } else { 2.0 * f64::from(m) * self.hy[m_ - 1] * self.scale };
        let f = common * (hn * hm);
        EnvelopeSample {
            f,
            dfdx: common * (dhn * hm) + f * self.gx,
            dfdy: common * (hn * dhm) + f * self.gy,
        }
    }
}

fn hermite_table(nmax: u32, u: f64) -> Vec<f64> {
    let mut t = Vec::with_capacity(nmax as usize + 1);
    t.push(1.0);
    if nmax >= 1 {
        t.push(2.0 * u);
    }
    for j in 1..nmax as usize {
        let next = 2.0 * u * t[j] - 2.0 * j as f64 * t[j - 1];
        t.push(next);
    }
    t
}

fn check_order(n: u32, m: u32) -> Result<()> {
    // the recurrence itself reports the error
    hermite(n, 0.0)?;
    hermite(m, 0.0)?;
    Ok(())
}

/// Hermite-Gaussian mode `psi_nm(r)`.
pub fn mode_amplitude(n: u32, m: u32, point: &Point3, geom: &BeamGeometry) -> Result<Complex64> {
    check_order(n, m)?;
    Ok(BasisPoint::new(n, m, point, geom).amplitude(n, m))
}

/// Analytic `(d psi_nm / dx, d psi_nm / dy)`.
pub fn mode_transverse_gradient(
    n: u32,
    m: u32,
    point: &Point3,
    geom: &BeamGeometry,
) -> Result<(Complex64, Complex64)> {
    check_order(n, m)?;
    let s = BasisPoint::new(n, m, point, geom).sample(n, m);
    Ok((s.dfdx, s.dfdy))
}

/// `f`, `df/dx` and `df/dy` of a superposition.
pub fn superposition_amplitude_and_gradient(
    modes: &ModeSuperposition,
    point: &Point3,
    geom: &BeamGeometry,
) -> Result<EnvelopeSample> {
    if modes.is_empty() {
        return Err(BeamError::EmptySuperposition);
    }
    Ok(superposition_sample(modes, point, geom))
}

pub(crate) fn superposition_sample(
    modes: &ModeSuperposition,
    point: &Point3,
    geom: &BeamGeometry,
) -> EnvelopeSample {
    let (nmax, mmax) = modes.populated_orders();
    let basis = BasisPoint::new(nmax, mmax, point, geom);
    modes.iter().fold(EnvelopeSample::ZERO, |acc, ((n, m), c)| {
        let s = basis.sample(n, m);
        EnvelopeSample { f: acc.f + c * s.f, dfdx: acc.dfdx + c * s.dfdx, dfdy: acc.dfdy + c * s.dfdy }
    })
}
