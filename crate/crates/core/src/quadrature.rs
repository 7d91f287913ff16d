//! Transverse-plane integration of beam densities.
//!
//! A tensor-product Gauss-Legendre rule on a square window. Rows (fixed `x`
//! node) are evaluated independently, each summed in node order, and the row
//! totals are combined by a fixed pairwise tree, so results are bit-identical
//! across runs and thread counts at a fixed node count.

use std::f64::consts::PI;
use std::ops::{Add, Mul};

use nalgebra::{Vector2, Vector3};
use num_complex::Complex64;

use crate::error::{BeamError, Result};
use crate::fields::{angular_momentum_density, momentum_density};
use crate::geometry::BeamGeometry;
use crate::modes::{superposition_sample, ModeSuperposition};
use crate::par::{map_rows, Execution};
use crate::polarization::{check_helicity, PolarizationState};
use crate::Point3;

pub const DEFAULT_HALF_WIDTH_FACTOR: f64 = 8.0;
pub const DEFAULT_NODES_PER_AXIS: usize = 201;
pub const MIN_NODES_PER_AXIS: usize = 21;
pub const MIN_HALF_WIDTH_FACTOR: f64 = 5.0;

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Nodes are the roots of `P_n`, refined by Newton from the Tricomi initial guess.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() <= 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for j in 2..=n {
        let jf = j as f64;
        let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    (p1, nf * (x * p1 - p0) / (x * x - 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub half_width_factor: f64,
    pub nodes_per_axis: usize,
    pub execution: Execution,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            half_width_factor: DEFAULT_HALF_WIDTH_FACTOR,
            nodes_per_axis: DEFAULT_NODES_PER_AXIS,
            execution: Execution::default(),
        }
    }
}

impl QuadratureSpec {
    pub fn new(half_width_factor: f64, nodes_per_axis: usize) -> Result<Self> {
        let s = Self { half_width_factor, nodes_per_axis, ..Self::default() };
        s.validate()?;
        Ok(s)
    }

    pub fn with_execution(mut self, execution: Execution) -> Self {
        self.execution = execution;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.nodes_per_axis % 2 == 0 || self.nodes_per_axis < MIN_NODES_PER_AXIS {
            return Err(BeamError::Quadrature(format!(
                "nodes_per_axis must be odd and >= {MIN_NODES_PER_AXIS}, got {}",
                self.nodes_per_axis
            )));
        }
        if !(self.half_width_factor.is_finite() && self.half_width_factor >= MIN_HALF_WIDTH_FACTOR) {
            return Err(BeamError::Quadrature(format!(
                "half_width_factor must be >= {MIN_HALF_WIDTH_FACTOR}, got {}",
                self.half_width_factor
            )));
        }
        Ok(())
    }

    /// Same window factor with `2n + 1` nodes.
    pub fn doubled(&self) -> Self {
        Self { nodes_per_axis: 2 * self.nodes_per_axis + 1, ..*self }
    }
}

/// Square integration window `[cx - h, cx + h] x [cy - h, cy + h]` in the plane `z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneWindow {
    pub center: Vector2<f64>,
    pub half_width: f64,
    pub z: f64,
}

impl PlaneWindow {
    /// Window centred on the axis with half-width `c w(z)`.
    pub fn for_beam(geom: &BeamGeometry, z: f64, spec: &QuadratureSpec) -> Self {
        Self { center: Vector2::zeros(), half_width: spec.half_width_factor * geom.spot_size(z), z }
    }
}

/// Values that can be accumulated by the quadrature rule.
pub trait Integrand: Copy + Send + Add<Output = Self> + Mul<f64, Output = Self> {
    fn zero() -> Self;
    fn is_finite(&self) -> bool;
}

impl Integrand for f64 {
    fn zero() -> Self {
        0.0
    }
    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }
}

impl Integrand for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

impl Integrand for Vector3<f64> {
    fn zero() -> Self {
        Vector3::zeros()
    }
    fn is_finite(&self) -> bool {
        self.iter().all(|v| v.is_finite())
    }
}

/// Fixed-size bundle of real integrands evaluated together.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Moments<const N: usize>(pub [f64; N]);

impl<const N: usize> Add for Moments<N> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for (a, b) in self.0.iter_mut().zip(rhs.0) {
            *a += b;
        }
        self
    }
}

impl<const N: usize> Mul<f64> for Moments<N> {
    type Output = Self;
    fn mul(mut self, rhs: f64) -> Self {
        for a in &mut self.0 {
            *a *= rhs;
        }
        self
    }
}

impl<const N: usize> Integrand for Moments<N> {
    fn zero() -> Self {
        Moments([0.0; N])
    }
    fn is_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }
}

fn pairwise_sum<T: Integrand>(values: &[T]) -> T {
    match values.len() {
        0 => T::zero(),
        1 => values[0],
        n => {
            let (a, b) = values.split_at(n / 2);
            pairwise_sum(a) + pairwise_sum(b)
        }
    }
}

/// `int sampler(x, y, z) dx dy` over `window`.
pub fn integrate_plane<T, F>(sampler: F, window: &PlaneWindow, spec: &QuadratureSpec) -> Result<T>
where
    T: Integrand,
    F: Fn(Point3) -> T + Sync + Send,
{
    spec.validate()?;
    let rule = GaussLegendre::new(spec.nodes_per_axis);
    integrate_with_rule(&sampler, window, &rule, spec.execution)
}

fn integrate_with_rule<T, F>(sampler: &F, window: &PlaneWindow, rule: &GaussLegendre, exec: Execution) -> Result<T>
where
    T: Integrand,
    F: Fn(Point3) -> T + Sync + Send,
{
    let h = window.half_width;
    let (nodes, weights) = (rule.nodes(), rule.weights());
    let rows = map_rows(rule.len(), exec, |i| -> Result<T> {
        let x = window.center.x + h * nodes[i];
        let mut acc = T::zero();
        for (&t, &w) in nodes.iter().zip(weights) {
            let y = window.center.y + h * t;
            let v = sampler(Point3::new(x, y, window.z));
            if !v.is_finite() {
                return Err(BeamError::NonFiniteSample { x, y, z: window.z });
            }
            acc = acc + v * w;
        }
        Ok(acc * weights[i])
    });
    let rows = rows.into_iter().collect::<Result<Vec<T>>>()?;
    Ok(pairwise_sum(&rows) * (h * h))
}

/// Relative change of a real integral when the node count is doubled.
pub fn convergence_check<F>(sampler: F, window: &PlaneWindow, spec: &QuadratureSpec) -> Result<f64>
where
    F: Fn(Point3) -> f64 + Sync + Send,
{
    let coarse = integrate_plane(&sampler, window, spec)?;
    let fine = integrate_plane(&sampler, window, &spec.doubled())?;
    Ok((fine - coarse).abs() / fine.abs().max(f64::MIN_POSITIVE))
}

/// Per-unit-length momenta and centroid in the plane `z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamMoments {
    pub p: Vector3<f64>,
    pub j: Vector3<f64>,
    pub centroid: Vector2<f64>,
    pub z: f64,
}

impl BeamMoments {
    pub fn flux(&self) -> f64 {
        self.p.z
    }

    pub fn transverse_j(&self) -> Vector2<f64> {
        Vector2::new(self.j.x, self.j.y)
    }
}

/// Integrates `p`, `r x p` and the centroid numerators of an arbitrary momentum-density field.
pub(crate) fn integrate_density_field<F>(density: F, window: &PlaneWindow, spec: &QuadratureSpec) -> Result<BeamMoments>
where
    F: Fn(&Point3) -> Vector3<f64> + Sync + Send,
{
    let sums: Moments<8> = integrate_plane(
        |pt: Point3| {
            let p = density(&pt);
            let j = angular_momentum_density(&pt, &p);
            Moments([p.x, p.y, p.z, j.x, j.y, j.z, pt.x * p.z, pt.y * p.z])
        },
        window,
        spec,
    )?;
    let [px, py, pz, jx, jy, jz, xp, yp] = sums.0;
    if !(pz > 0.0) {
        return Err(BeamError::VanishingFlux(pz));
    }
    Ok(BeamMoments {
        p: Vector3::new(px, py, pz),
        j: Vector3::new(jx, jy, jz),
        centroid: Vector2::new(xp / pz, yp / pz),
        z: window.z,
    })
}

fn checked_inputs(modes: &ModeSuperposition, pol: &PolarizationState) -> Result<f64> {
    modes.validate()?;
    check_helicity(pol.helicity())
}

/// Intensity-weighted mean transverse position `<r_perp>` at `z`.
///
/// `p_z = |f|^2` does not depend on the polarization; `pol` is only validated.
pub fn centroid(
    modes: &ModeSuperposition,
    pol: &PolarizationState,
    geom: &BeamGeometry,
    z: f64,
    spec: &QuadratureSpec,
) -> Result<Vector2<f64>> {
    checked_inputs(modes, pol)?;
    let window = PlaneWindow::for_beam(geom, z, spec);
    let sums: Moments<3> = integrate_plane(
        |pt: Point3| {
            let i = superposition_sample(modes, &pt, geom).f.norm_sqr();
            Moments([i, pt.x * i, pt.y * i])
        },
        &window,
        spec,
    )?;
    let [flux, xs, ys] = sums.0;
    if !(flux > 0.0) {
        return Err(BeamError::VanishingFlux(flux));
    }
    Ok(Vector2::new(xs / flux, ys / flux))
}

/// `P(z)`, `J(z)` and the centroid by direct integration of the densities.
pub fn momenta_numeric(
    modes: &ModeSuperposition,
    pol: &PolarizationState,
    geom: &BeamGeometry,
    z: f64,
    spec: &QuadratureSpec,
) -> Result<BeamMoments> {
    let sigma = checked_inputs(modes, pol)?;
    let window = PlaneWindow::for_beam(geom, z, spec);
    integrate_density_field(
        |pt| momentum_density(&superposition_sample(modes, pt, geom), sigma),
        &window,
        spec,
    )
}

/// Residuals of the integration-by-parts identities:
/// `|int Re(f df*/dx)| + |int Re(f df*/dy)|` and
/// `|int [x Re(f df*/dx) + y Re(f df*/dy)] + int |f|^2|`.
pub fn parts_relations_residuals(
    modes: &ModeSuperposition,
    geom: &BeamGeometry,
    z: f64,
    spec: &QuadratureSpec,
) -> Result<(f64, f64)> {
    modes.validate()?;
    let window = PlaneWindow::for_beam(geom, z, spec);
    let sums: Moments<4> = integrate_plane(
        |pt: Point3| {
            let e = superposition_sample(modes, &pt, geom);
            let rx = (e.f * e.dfdx.conj()).re;
            let ry = (e.f * e.dfdy.conj()).re;
            Moments([rx, ry, pt.x * rx + pt.y * ry, e.f.norm_sqr()])
        },
        &window,
        spec,
    )?;
    let [rx, ry, radial, norm] = sums.0;
    Ok((rx.abs() + ry.abs(), (radial + norm).abs()))
}
