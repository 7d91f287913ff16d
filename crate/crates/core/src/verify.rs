//! Invariant suite shared by the `verify` subcommand and the test targets.
//!
//! Every check reports a worst-case metric next to the tolerance it must stay
//! under. Oracles here (finite differences, Poynting vector, series
//! exponential) deliberately avoid the code paths they check.

use std::f64::consts::FRAC_PI_2;

use nalgebra::{Matrix3, Vector2, Vector3};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::fields::{density_sample, vector_fields};
use crate::geometry::BeamGeometry;
use crate::modes::{mode_amplitude, mode_transverse_gradient, superposition_amplitude_and_gradient, ModeSuperposition};
use crate::modespace::{angular_momentum_modespace, momentum_modespace};
use crate::polarization::PolarizationState;
use crate::quadrature::{centroid, integrate_plane, momenta_numeric, parts_relations_residuals, Moments, PlaneWindow, QuadratureSpec};
use crate::tilt::{
    rotation_matrix, rotation_matrix_series, slice_profile_closed, slice_profile_numeric, tilted_centroid_closed,
    tilted_centroid_numeric, tilted_momenta_closed, tilted_momenta_numeric, SliceAxis, TiltFrame,
};
use crate::Point3;

pub const DEFAULT_SEED: u64 = 0x5eed_2008;
pub const DEFAULT_CASES: usize = 20;

/// Angular spread used by the tilted-beam checks.
pub const TILT_THETA0: f64 = 0.01;
pub const TILT_THETAS: [f64; 3] = [0.1, 0.3, 0.6];
pub const TILT_PHIS: [f64; 3] = [0.0, 1.0, FRAC_PI_2];
pub const HELICITIES: [f64; 3] = [-1.0, 0.0, 1.0];

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
}

impl Check {
    pub fn new(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Self { name: name.into(), value, tolerance }
    }

    pub fn passed(&self) -> bool {
        self.value <= self.tolerance
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyConfig {
    pub seed: u64,
    pub cases: usize,
    pub spec: QuadratureSpec,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self { seed: DEFAULT_SEED, cases: DEFAULT_CASES, spec: QuadratureSpec::default() }
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Central-difference transverse gradient of `psi_nm` with step `1e-5 w0`.
pub fn finite_difference_gradient(n: u32, m: u32, p: &Point3, g: &BeamGeometry) -> (Complex64, Complex64) {
    let h = 1e-5 * g.w0();
    let f = |x: f64, y: f64| mode_amplitude(n, m, &Point3::new(x, y, p.z), g).expect("order checked by caller");
    (
        (f(p.x + h, p.y) - f(p.x - h, p.y)) / (2.0 * h),
        (f(p.x, p.y + h) - f(p.x, p.y - h)) / (2.0 * h),
    )
}

/// `|d2f/dx2 + d2f/dy2 + 2ik df/dz|` of `psi_nm` by central differences.
pub fn paraxial_residual(n: u32, m: u32, p: &Point3, g: &BeamGeometry) -> f64 {
    let f = |x: f64, y: f64, z: f64| mode_amplitude(n, m, &Point3::new(x, y, z), g).expect("order checked by caller");
    let h = 1e-3 * g.w0();
    let hz = 1e-4 * g.rayleigh_range();
    let f0 = f(p.x, p.y, p.z);
    let dxx = (f(p.x + h, p.y, p.z) - 2.0 * f0 + f(p.x - h, p.y, p.z)) / (h * h);
    let dyy = (f(p.x, p.y + h, p.z) - 2.0 * f0 + f(p.x, p.y - h, p.z)) / (h * h);
    let dz = (f(p.x, p.y, p.z + hz) - f(p.x, p.y, p.z - hz)) / (2.0 * hz);
    (dxx + dyy + c(0.0, 2.0 * g.k()) * dz).norm()
}

fn random_point(rng: &mut ChaCha8Rng, g: &BeamGeometry) -> Point3 {
    Point3::new(
        rng.gen_range(-2.0..2.0) * g.w0(),
        rng.gen_range(-2.0..2.0) * g.w0(),
        rng.gen_range(-2.0..2.0) * g.rayleigh_range(),
    )
}

fn random_modes(rng: &mut ChaCha8Rng, max_index: u32) -> ModeSuperposition {
    let terms = rng.gen_range(2..=6);
    let mut s = ModeSuperposition::default();
    for _ in 0..terms {
        let n = rng.gen_range(0..=max_index);
        let m = rng.gen_range(0..=max_index);
        s.insert(n, m, c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).expect("indices within default order");
    }
    s.normalized().expect("random coefficients are nonzero")
}

fn random_polarization(rng: &mut ChaCha8Rng) -> PolarizationState {
    PolarizationState::normalized(
        c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
        c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
    )
    .expect("random pair is nonzero")
}

/// A random beam for the oracle comparisons: orders up to 3, random polarization.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleCase {
    pub modes: ModeSuperposition,
    pub pol: PolarizationState,
    pub geom: BeamGeometry,
}

pub fn oracle_cases(seed: u64, count: usize) -> Vec<OracleCase> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let geom = BeamGeometry::new(rng.gen_range(20.0..60.0)).expect("kw0 >= 20 is paraxial");
            let modes = random_modes(&mut rng, 3);
            let pol = random_polarization(&mut rng);
            OracleCase { modes, pol, geom }
        })
        .collect()
}

/// Largest componentwise relative deviation of `a` from `b`.
///
/// Components smaller than `floor` in magnitude are compared against `floor` instead.
pub fn componentwise_relative(a: &Vector3<f64>, b: &Vector3<f64>, floor: f64) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).abs() / y.abs().max(floor).max(f64::MIN_POSITIVE))
        .fold(0.0, f64::max)
}

/// Outcome of comparing mode-space and quadrature momenta for one beam.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleReport {
    /// Worst componentwise relative error of `P` across the sampled planes.
    pub p_relative: f64,
    /// Same for `J`.
    pub j_relative: f64,
    /// Worst componentwise relative spread of numeric `P`, `J` between planes.
    pub z_spread: f64,
    /// `|(J_x, J_y)/P_z - (<y>, -<x>)| / max(|<r>|, lambda_bar)` at the waist.
    pub centroid_theorem: f64,
    /// `|<r> . J_perp| / (|<r>| |J_perp|)` at the waist.
    pub orthogonality: f64,
}

pub fn oracle_report(case: &OracleCase, spec: &QuadratureSpec) -> Result<OracleReport> {
    let OracleCase { modes, pol, geom } = case;
    let sigma = pol.helicity();
    let p_modes = momentum_modespace(modes, geom);
    let j_modes = angular_momentum_modespace(modes, geom, sigma)?;
    let l = geom.rayleigh_range();
    let p_floor = 1e-9 * p_modes.norm();
    // angular momentum components are judged on the scale of one lambda-bar per unit flux
    let j_floor = 1e-3 * geom.lambda_bar() * p_modes.z;
    let mut report = OracleReport { p_relative: 0.0, j_relative: 0.0, z_spread: 0.0, centroid_theorem: 0.0, orthogonality: 0.0 };
    let mut first: Option<(Vector3<f64>, Vector3<f64>)> = None;
    for z in [0.0, l, 3.0 * l] {
        let m = momenta_numeric(modes, pol, geom, z, spec)?;
        report.p_relative = report.p_relative.max(componentwise_relative(&m.p, &p_modes, p_floor));
        report.j_relative = report.j_relative.max(componentwise_relative(&m.j, &j_modes, j_floor));
        match first {
            None => first = Some((m.p, m.j)),
            Some((p0, j0)) => {
                report.z_spread = report
                    .z_spread
                    .max(componentwise_relative(&m.p, &p0, p_floor))
                    .max(componentwise_relative(&m.j, &j0, j_floor));
            }
        }
    }
    let waist = momenta_numeric(modes, pol, geom, 0.0, spec)?;
    let r = centroid(modes, pol, geom, 0.0, spec)?;
    let predicted = Vector2::new(-waist.j.y, waist.j.x) / waist.p.z;
    report.centroid_theorem = (predicted - r).norm() / r.norm().max(geom.lambda_bar());
    let jt = waist.transverse_j();
    let denom = (r.norm() * jt.norm()).max(f64::MIN_POSITIVE);
    report.orthogonality = r.dot(&jt).abs() / denom;
    Ok(report)
}

/// Worst `|<psi_nm|psi_pq> - delta|` over all `n, m, p, q <= max_index` in the plane `z`.
pub fn orthonormality_error(geom: &BeamGeometry, z: f64, spec: &QuadratureSpec) -> Result<f64> {
    const D: usize = 5;
    const M: usize = D * D;
    let window = PlaneWindow::for_beam(geom, z, spec);
    let sums: Moments<{ 2 * M * M }> = integrate_plane(
        |pt: Point3| {
            let mut psi = [c(0.0, 0.0); M];
            for (i, v) in psi.iter_mut().enumerate() {
                *v = mode_amplitude((i / D) as u32, (i % D) as u32, &pt, geom).expect("order 4");
            }
            let mut out = [0.0; 2 * M * M];
            for a in 0..M {
                for b in 0..M {
                    let o = psi[a] * psi[b].conj();
                    out[2 * (a * M + b)] = o.re;
                    out[2 * (a * M + b) + 1] = o.im;
                }
            }
            Moments(out)
        },
        &window,
        spec,
    )?;
    let mut worst: f64 = 0.0;
    for a in 0..M {
        for b in 0..M {
            let o = c(sums.0[2 * (a * M + b)], sums.0[2 * (a * M + b) + 1]);
            let target = if a == b { 1.0 } else { 0.0 };
            worst = worst.max((o - target).norm());
        }
    }
    Ok(worst)
}

/// Structural properties of the basis, the densities and the rotations.
pub fn structural_checks(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let geom = BeamGeometry::new(40.0)?;
    let l = geom.rayleigh_range();
    let mut checks = Vec::new();

    let mut ortho: f64 = 0.0;
    for z in [0.0, l / 2.0, 3.0 * l] {
        ortho = ortho.max(orthonormality_error(&geom, z, &cfg.spec)?);
    }
    checks.push(Check::new("orthonormality_n_m_le_4", ortho, 1e-9));

    let mut paraxial: f64 = 0.0;
    let mut gradient: f64 = 0.0;
    for _ in 0..200 {
        let (n, m) = (rng.gen_range(0..=4), rng.gen_range(0..=4));
        let pt = random_point(&mut rng, &geom);
        let f = mode_amplitude(n, m, &pt, &geom)?;
        let (ax, ay) = mode_transverse_gradient(n, m, &pt, &geom)?;
        // w0 |grad f| keeps the scale finite at nodes, where the difference error does not vanish
        let scale = f.norm().max(geom.w0() * ax.norm().hypot(ay.norm()));
        if scale > 1e-12 {
            paraxial = paraxial.max(paraxial_residual(n, m, &pt, &geom) / (geom.k() * geom.k() * scale));
        }
        let (fx, fy) = finite_difference_gradient(n, m, &pt, &geom);
        let floor = f.norm() / geom.w0();
        let ex = (ax - fx).norm() / ax.norm().max(floor).max(f64::MIN_POSITIVE);
        let ey = (ay - fy).norm() / ay.norm().max(floor).max(f64::MIN_POSITIVE);
        gradient = gradient.max(ex).max(ey);
    }
    checks.push(Check::new("paraxial_equation_relative_residual", paraxial, 1e-5));
    checks.push(Check::new("gradient_vs_finite_difference", gradient, 1e-6));

    let mut r_dot_j: f64 = 0.0;
    let mut poynting: f64 = 0.0;
    for _ in 0..200 {
        let modes = random_modes(&mut rng, 3);
        let pol = random_polarization(&mut rng);
        let pt = random_point(&mut rng, &geom);
        let env = superposition_amplitude_and_gradient(&modes, &pt, &geom)?;
        let s = density_sample(pt, &env, pol.helicity());
        let scale = (pt.coords.norm() * s.j.norm()).max(f64::MIN_POSITIVE);
        r_dot_j = r_dot_j.max(pt.coords.dot(&s.j).abs() / scale);
        let oracle = vector_fields(&env, &pol).poynting_momentum();
        poynting = poynting.max((s.p - oracle).norm() / oracle.norm().max(f64::MIN_POSITIVE));
    }
    checks.push(Check::new("r_dot_j_relative", r_dot_j, 1e-13));
    checks.push(Check::new("poynting_vs_envelope_momentum", poynting, 1e-12));

    // same helicity, different ellipse orientation: sigma = sin(2a) for both
    let ellipse = |a: f64, b: f64| {
        PolarizationState::new(
            c(a.cos() * b.cos(), -a.sin() * b.sin()),
            c(a.cos() * b.sin(), a.sin() * b.cos()),
        )
    };
    let mut sigma_only: f64 = 0.0;
    for _ in 0..50 {
        let a = rng.gen_range(-0.78..0.78);
        let (pa, pb) = (ellipse(a, 0.0)?, ellipse(a, rng.gen_range(0.1..3.0))?);
        let modes = random_modes(&mut rng, 3);
        let pt = random_point(&mut rng, &geom);
        let env = superposition_amplitude_and_gradient(&modes, &pt, &geom)?;
        let qa = vector_fields(&env, &pa).poynting_momentum();
        let qb = vector_fields(&env, &pb).poynting_momentum();
        sigma_only = sigma_only.max((qa - qb).norm() / qa.norm().max(f64::MIN_POSITIVE));
    }
    checks.push(Check::new("helicity_only_polarization_dependence", sigma_only, 1e-14));

    let mut parts_a: f64 = 0.0;
    let mut parts_b: f64 = 0.0;
    for _ in 0..5 {
        let modes = random_modes(&mut rng, 3);
        let z = rng.gen_range(-2.0..2.0) * l;
        let (a, b) = parts_relations_residuals(&modes, &geom, z, &cfg.spec)?;
        parts_a = parts_a.max(a);
        parts_b = parts_b.max(b);
    }
    checks.push(Check::new("integration_by_parts_first", parts_a, 1e-8));
    checks.push(Check::new("integration_by_parts_second", parts_b, 1e-8));

    let mut orth: f64 = 0.0;
    let mut series: f64 = 0.0;
    for i in 0..14 {
        for j in 0..8 {
            let frame = TiltFrame::new(0.1 * f64::from(i), 0.8 * f64::from(j))?;
            let r = *rotation_matrix(&frame).matrix();
            orth = orth
                .max((r.transpose() * r - Matrix3::identity()).amax())
                .max((r.determinant() - 1.0).abs())
                .max((r * Vector3::z() - frame.beam_axis()).amax());
            series = series.max((rotation_matrix_series(&frame) - r).amax());
        }
    }
    checks.push(Check::new("rotation_orthogonality", orth, 1e-12));
    checks.push(Check::new("rotation_axis_angle_vs_series", series, 1e-12));
    Ok(checks)
}

/// Mode-space operators against plane quadrature on random beams.
pub fn oracle_checks(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let mut worst = OracleReport { p_relative: 0.0, j_relative: 0.0, z_spread: 0.0, centroid_theorem: 0.0, orthogonality: 0.0 };
    for case in oracle_cases(cfg.seed, cfg.cases) {
        let r = oracle_report(&case, &cfg.spec)?;
        worst.p_relative = worst.p_relative.max(r.p_relative);
        worst.j_relative = worst.j_relative.max(r.j_relative);
        worst.z_spread = worst.z_spread.max(r.z_spread);
        worst.centroid_theorem = worst.centroid_theorem.max(r.centroid_theorem);
        worst.orthogonality = worst.orthogonality.max(r.orthogonality);
    }
    let geom = BeamGeometry::new(40.0)?;
    let lg = ModeSuperposition::laguerre_gauss_l1();
    let mut lg_jz: f64 = 0.0;
    let mut lg_jperp: f64 = 0.0;
    for sigma in HELICITIES {
        let pol = polarization_with_helicity(sigma)?;
        let m = momenta_numeric(&lg, &pol, &geom, 0.0, &cfg.spec)?;
        lg_jz = lg_jz.max((m.j.z / m.p.z - geom.lambda_bar() * (sigma + 1.0)).abs());
        lg_jperp = lg_jperp.max(m.transverse_j().norm());
    }
    Ok(vec![
        Check::new("modespace_vs_quadrature_p", worst.p_relative, 1e-6),
        Check::new("modespace_vs_quadrature_j", worst.j_relative, 1e-6),
        Check::new("momenta_z_independence", worst.z_spread, 1e-7),
        Check::new("centroid_theorem_waist", worst.centroid_theorem, 1e-7),
        Check::new("centroid_orthogonal_to_transverse_j", worst.orthogonality, 1e-9),
        Check::new("lg10_jz_over_pz", lg_jz, 1e-8),
        Check::new("lg10_transverse_j", lg_jperp, 1e-10),
    ])
}

/// Polarization `(cos a, i sin a)` with `sin 2a = sigma`.
pub fn polarization_with_helicity(sigma: f64) -> Result<PolarizationState> {
    let a = 0.5 * sigma.clamp(-1.0, 1.0).asin();
    PolarizationState::new(c(a.cos(), 0.0), c(0.0, a.sin()))
}

/// Allowed deviation from a leading-order closed form: `max(1 %, 5 theta0^2 lambda_bar)`.
pub fn tilt_allowance(closed: f64, geom: &BeamGeometry) -> f64 {
    (0.01 * closed.abs()).max(5.0 * geom.angular_spread().powi(2) * geom.lambda_bar())
}

/// Tilted-beam centroids and momenta against their closed forms.
///
/// Values are worst-case ratios of deviation to allowance, so each passes at 1.
pub fn tilt_checks(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let geom = BeamGeometry::new(2.0 / TILT_THETA0)?;
    let l = geom.rayleigh_range();
    let spec = &cfg.spec;
    let mut centroid_ratio: f64 = 0.0;
    let mut momenta_ratio: f64 = 0.0;
    let mut orthogonality: f64 = 0.0;
    let mut theorem: f64 = 0.0;
    let mut straight: f64 = 0.0;
    let mut slice: f64 = 0.0;
    for theta in TILT_THETAS {
        for phi in TILT_PHIS {
            let frame = TiltFrame::new(theta, phi)?;
            for sigma in HELICITIES {
                let mut samples = Vec::new();
                for z in [-l / 4.0, 0.0, l / 4.0] {
                    let num = tilted_centroid_numeric(sigma, &geom, &frame, z, spec)?;
                    let closed = tilted_centroid_closed(sigma, &frame, z, &geom)?;
                    for k in 0..2 {
                        centroid_ratio = centroid_ratio.max((num[k] - closed[k]).abs() / tilt_allowance(closed[k], &geom));
                    }
                    samples.push((z, num));
                }
                let m = tilted_momenta_numeric(sigma, &geom, &frame, 0.0, spec)?;
                let closed = tilted_momenta_closed(sigma, &frame, &geom)?;
                let (p, j) = (m.p / m.p.z, m.j / m.p.z);
                for k in 0..3 {
                    momenta_ratio = momenta_ratio
                        .max((p[k] - closed.p_over_pz[k]).abs() / tilt_allowance(closed.p_over_pz[k], &geom))
                        .max((j[k] - closed.j_over_pz[k]).abs() / tilt_allowance(closed.j_over_pz[k], &geom));
                }
                let r = m.centroid;
                let jt = m.transverse_j();
                if sigma != 0.0 {
                    orthogonality = orthogonality.max(r.dot(&jt).abs() / (r.norm() * jt.norm()));
                }
                let predicted = Vector2::new(-m.j.y, m.j.x) / m.p.z;
                theorem = theorem.max((predicted - r).norm() / r.norm().max(geom.lambda_bar()));
                // affine in z with slope P_perp / P_z
                let slope = Vector2::new(p.x, p.y);
                let (z0, r0) = samples[1];
                for &(z, rz) in &[samples[0], samples[2]] {
                    let expected = r0 + slope * (z - z0);
                    straight = straight.max((rz - expected).norm() / (slope.norm() * (z - z0).abs()).max(1.0));
                }
            }
        }
        for axis in [SliceAxis::X, SliceAxis::Y] {
            for s in [-2.0, -1.0, -0.5, 0.5, 1.0, 2.0] {
                let num = slice_profile_numeric(axis, 1.0, theta, s, &geom)?;
                let law = slice_profile_closed(axis, 1.0, theta, s, &geom);
                slice = slice.max((num - law).abs());
            }
        }
    }
    Ok(vec![
        Check::new("tilted_centroid_vs_closed_form_ratio", centroid_ratio, 1.0),
        Check::new("tilted_momenta_vs_closed_form_ratio", momenta_ratio, 1.0),
        Check::new("tilted_shift_orthogonal_to_transverse_j", orthogonality, 1e-6),
        Check::new("tilted_centroid_theorem", theorem, 1e-7),
        Check::new("tilted_straight_line_propagation", straight, 1e-4),
        Check::new("tilted_slice_profile_law", slice, TILT_THETA0 * TILT_THETA0),
    ])
}

pub fn run_all(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let mut all = structural_checks(cfg)?;
    all.extend(oracle_checks(cfg)?);
    all.extend(tilt_checks(cfg)?);
    Ok(all)
}
