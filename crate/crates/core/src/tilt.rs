//! A circularly polarized fundamental Gaussian observed from a tilted frame.
//!
//! The beam propagates along `z' = R(theta, phi) z`, where
//! `R = exp(theta n.L)` rotates about `n = (z x z') / |z x z'|`. Its momentum
//! density is evaluated exactly in beam coordinates and carried into the
//! observation frame as `p(r) = R p'(R^-1 r)`. Integrating that field over a
//! plane of constant `z` gives a barycenter displaced perpendicular to the
//! plane of incidence by `lambda_bar (sigma / 2) tan(theta)`.

use nalgebra::{Matrix3, Vector2, Vector3};

use crate::error::{BeamError, Result};
use crate::fields::momentum_density;
use crate::geometry::BeamGeometry;
use crate::modes::{superposition_sample, ModeSuperposition};
use crate::polarization::check_helicity;
use crate::quadrature::{integrate_density_field, integrate_plane, BeamMoments, Moments, PlaneWindow, QuadratureSpec};
use crate::Point3;

pub const DEFAULT_THETA_MAX: f64 = 1.4;

/// Propagation direction of the beam relative to the observation frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TiltFrame {
    theta: f64,
    phi: f64,
}

impl TiltFrame {
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        Self::with_theta_max(theta, phi, DEFAULT_THETA_MAX)
    }

    /// `theta` in `[0, theta_max)`; `phi` is wrapped into `[0, 2 pi)`.
    pub fn with_theta_max(theta: f64, phi: f64, theta_max: f64) -> Result<Self> {
        let limit = theta_max.min(std::f64::consts::FRAC_PI_2);
        if !(theta.is_finite() && (0.0..limit).contains(&theta)) {
            return Err(BeamError::TiltAngle { theta, theta_max: limit });
        }
        if !phi.is_finite() {
            return Err(BeamError::Azimuth(phi));
        }
        Ok(Self { theta, phi: phi.rem_euclid(std::f64::consts::TAU) })
    }

    pub fn untilted() -> Self {
        Self { theta: 0.0, phi: 0.0 }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// Beam axis `z'` expressed in the observation frame.
    pub fn beam_axis(&self) -> Vector3<f64> {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        Vector3::new(st * cp, st * sp, ct)
    }

    /// Unit normal to the plane of incidence, `(-sin phi, cos phi, 0)`.
    ///
    /// Defined by continuity at `theta = 0`, where `z x z'` vanishes.
    pub fn incidence_normal(&self) -> Vector3<f64> {
        let (sp, cp) = self.phi.sin_cos();
        Vector3::new(-sp, cp, 0.0)
    }
}

/// Proper rotation taking the observation frame onto the beam frame.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotationMatrix(Matrix3<f64>);

impl RotationMatrix {
    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.0
    }

    pub fn apply(&self, v: &Vector3<f64>) -> Vector3<f64> {
        self.0 * v
    }

    pub fn apply_inverse(&self, v: &Vector3<f64>) -> Vector3<f64> {
        self.0.tr_mul(v)
    }
}

/// `[L_i]_{jk} = -epsilon_{ijk}`, so that `(n.L) v = n x v`.
pub fn so3_generators() -> [Matrix3<f64>; 3] {
    let mut gens = [Matrix3::zeros(); 3];
    for (i, g) in gens.iter_mut().enumerate() {
        for j in 0..3 {
            for k in 0..3 {
                g[(j, k)] = -levi_civita(i, j, k);
            }
        }
    }
    gens
}

fn levi_civita(i: usize, j: usize, k: usize) -> f64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

fn generator(frame: &TiltFrame) -> Matrix3<f64> {
    let n = frame.incidence_normal();
    let [l1, l2, l3] = so3_generators();
    l1 * n.x + l2 * n.y + l3 * n.z
}

/// `exp(theta n.L)` by the axis-angle formula `I + sin(theta) K + (1 - cos(theta)) K^2`.
pub fn rotation_matrix(frame: &TiltFrame) -> RotationMatrix {
    if frame.theta == 0.0 {
        return RotationMatrix(Matrix3::identity());
    }
    let k = generator(frame);
    let (s, c) = frame.theta.sin_cos();
    RotationMatrix(Matrix3::identity() + k * s + k * k * (1.0 - c))
}

/// `exp(theta n.L)` from a truncated 12-term Taylor series, with scaling and squaring
/// so the truncation error stays below 1e-15 for every allowed tilt.
pub fn rotation_matrix_series(frame: &TiltFrame) -> Matrix3<f64> {
    const SQUARINGS: i32 = 3;
    let a = generator(frame) * (frame.theta / f64::from(1 << SQUARINGS));
    let mut term = Matrix3::identity();
    let mut sum = Matrix3::identity();
    for j in 1..12 {
        term = term * a / f64::from(j);
        sum += term;
    }
    for _ in 0..SQUARINGS {
        sum = sum * sum;
    }
    sum
}

/// Observation-frame momentum density of the tilted `psi_00` beam with helicity `sigma`.
pub fn rotated_momentum_density(
    sigma: f64,
    geom: &BeamGeometry,
    frame: &TiltFrame,
    point: &Point3,
) -> Result<Vector3<f64>> {
    let sigma = check_helicity(sigma)?;
    let rot = rotation_matrix(frame);
    Ok(rotated_density(&ModeSuperposition::fundamental(), sigma, geom, &rot, point))
}

fn rotated_density(
    beam: &ModeSuperposition,
    sigma: f64,
    geom: &BeamGeometry,
    rot: &RotationMatrix,
    point: &Point3,
) -> Vector3<f64> {
    let local = Point3::from(rot.apply_inverse(&point.coords));
    let p_beam = momentum_density(&superposition_sample(beam, &local, geom), sigma);
    rot.apply(&p_beam)
}

/// Integration window in the plane `z`, centred where the beam axis crosses it.
///
/// The spot size is taken at the axial distance `z / cos(theta)` and the
/// half-width is stretched by `1 / cos(theta)` for the oblique footprint.
pub fn tilted_window(geom: &BeamGeometry, frame: &TiltFrame, z: f64, spec: &QuadratureSpec) -> PlaneWindow {
    let ct = frame.theta.cos();
    let axis = frame.beam_axis();
    let shift = z / axis.z;
    PlaneWindow {
        center: Vector2::new(axis.x * shift, axis.y * shift),
        half_width: spec.half_width_factor * geom.spot_size(z / ct) / ct,
        z,
    }
}

/// Barycenter of the rotated `p_z` over the plane `z`.
pub fn tilted_centroid_numeric(
    sigma: f64,
    geom: &BeamGeometry,
    frame: &TiltFrame,
    z: f64,
    spec: &QuadratureSpec,
) -> Result<Vector2<f64>> {
    let sigma = check_helicity(sigma)?;
    let rot = rotation_matrix(frame);
    let beam = ModeSuperposition::fundamental();
    let window = tilted_window(geom, frame, z, spec);
    let sums: Moments<3> = integrate_plane(
        |pt: Point3| {
            let pz = rotated_density(&beam, sigma, geom, &rot, &pt).z;
            Moments([pz, pt.x * pz, pt.y * pz])
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

/// `P`, `J = int r x p` and the centroid of the tilted beam over the plane `z`.
pub fn tilted_momenta_numeric(
    sigma: f64,
    geom: &BeamGeometry,
    frame: &TiltFrame,
    z: f64,
    spec: &QuadratureSpec,
) -> Result<BeamMoments> {
    let sigma = check_helicity(sigma)?;
    let rot = rotation_matrix(frame);
    let beam = ModeSuperposition::fundamental();
    let window = tilted_window(geom, frame, z, spec);
    integrate_density_field(|pt| rotated_density(&beam, sigma, geom, &rot, pt), &window, spec)
}

/// Leading-order barycenter in the plane `z`:
/// `<x> = -lb (sigma/2) tan(theta) sin(phi) + z tan(theta) cos(phi)`,
/// `<y> =  lb (sigma/2) tan(theta) cos(phi) + z tan(theta) sin(phi)`.
pub fn tilted_centroid_closed(sigma: f64, frame: &TiltFrame, z: f64, geom: &BeamGeometry) -> Result<Vector2<f64>> {
    let sigma = check_helicity(sigma)?;
    let t = frame.theta.tan();
    let (sp, cp) = frame.phi.sin_cos();
    let spin = geom.lambda_bar() * sigma / 2.0 * t;
    Ok(Vector2::new(-spin * sp + z * t * cp, spin * cp + z * t * sp))
}

/// Closed-form `P / P_z` and `J / P_z` of the tilted beam at `z = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TiltedMomenta {
    pub p_over_pz: Vector3<f64>,
    pub j_over_pz: Vector3<f64>,
}

impl TiltedMomenta {
    /// `|J| / P_z`, which is not rotation invariant.
    pub fn angular_momentum_magnitude(&self) -> f64 {
        self.j_over_pz.norm()
    }
}

pub fn tilted_momenta_closed(sigma: f64, frame: &TiltFrame, geom: &BeamGeometry) -> Result<TiltedMomenta> {
    let sigma = check_helicity(sigma)?;
    let t = frame.theta.tan();
    let s2 = frame.theta.sin().powi(2);
    let sec2 = 1.0 / frame.theta.cos().powi(2);
    let (sp, cp) = frame.phi.sin_cos();
    let half = geom.lambda_bar() * sigma / 2.0;
    Ok(TiltedMomenta {
        p_over_pz: Vector3::new(t * cp, t * sp, 1.0),
        j_over_pz: Vector3::new(half * t * cp, half * t * sp, half * (2.0 - s2) * sec2),
    })
}

/// Transverse slice through the waist plane of the tilted beam.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SliceAxis {
    /// `p_z(x, 0, 0)`, with the beam tilted in the `y-z` plane (`phi = pi/2`).
    X,
    /// `p_z(0, y, 0)`, with the beam tilted in the `x-z` plane (`phi = 0`).
    Y,
}

impl SliceAxis {
    pub fn frame(self, theta: f64) -> Result<TiltFrame> {
        match self {
            SliceAxis::X => TiltFrame::new(theta, std::f64::consts::FRAC_PI_2),
            SliceAxis::Y => TiltFrame::new(theta, 0.0),
        }
    }
}

/// Normalized slice law `exp(-2 s^2) (1 -/+ theta0 sigma s tan(theta))`, `s` in units of `w0`.
pub fn slice_profile_closed(axis: SliceAxis, sigma: f64, theta: f64, s: f64, geom: &BeamGeometry) -> f64 {
    let sign = match axis {
        SliceAxis::X => -1.0,
        SliceAxis::Y => 1.0,
    };
    (-2.0 * s * s).exp() * (1.0 + sign * geom.angular_spread() * sigma * s * theta.tan())
}

/// Rotated `p_z` along the slice, normalized to its on-axis value.
pub fn slice_profile_numeric(axis: SliceAxis, sigma: f64, theta: f64, s: f64, geom: &BeamGeometry) -> Result<f64> {
    let frame = axis.frame(theta)?;
    let at = |s: f64| {
        let d = s * geom.w0();
        let pt = match axis {
            SliceAxis::X => Point3::new(d, 0.0, 0.0),
            SliceAxis::Y => Point3::new(0.0, d, 0.0),
        };
        rotated_momentum_density(sigma, geom, &frame, &pt).map(|p| p.z)
    };
    Ok(at(s)? / at(0.0)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn geom(theta0: f64) -> BeamGeometry {
        BeamGeometry::new(2.0 / theta0).unwrap()
    }

    #[test]
    fn generators() {
        let [l1, l2, l3] = so3_generators();
        assert_eq!(l3 * Vector3::x(), Vector3::y());
        for l in [l1, l2, l3] {
            assert_eq!(l + l.transpose(), Matrix3::zeros());
        }
        assert_eq!(l1 * l2 - l2 * l1, l3);
        assert_eq!(l2 * l3 - l3 * l2, l1);
        assert_eq!(l3 * l1 - l1 * l3, l2);
        let n = Vector3::new(0.3, -0.5, 0.8);
        let v = Vector3::new(-1.0, 2.0, 0.25);
        let k = l1 * n.x + l2 * n.y + l3 * n.z;
        assert!((k * v - n.cross(&v)).norm() < 1e-15);
    }

    #[test]
    fn rotation_examples() {
        for phi in [0.0, 1.0, 4.0] {
            let r = rotation_matrix(&TiltFrame::new(0.0, phi).unwrap());
            assert_eq!(*r.matrix(), Matrix3::identity());
        }
        // quarter turn about y, outside the validated range
        let r = rotation_matrix(&TiltFrame { theta: FRAC_PI_2, phi: 0.0 });
        assert!((r.apply(&Vector3::z()) - Vector3::x()).norm() < 1e-15);
        assert!((r.matrix()[(1, 1)] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn frame_validation() {
        assert!(TiltFrame::new(1.4, 0.0).is_err());
        assert!(TiltFrame::new(-0.1, 0.0).is_err());
        assert!(TiltFrame::new(0.3, f64::INFINITY).is_err());
        assert!((TiltFrame::new(0.3, -FRAC_PI_2).unwrap().phi() - 1.5 * PI).abs() < 1e-15);
        assert!(TiltFrame::with_theta_max(1.5, 0.0, 3.0).is_ok());
        assert!(TiltFrame::with_theta_max(FRAC_PI_2, 0.0, 3.0).is_err());
    }

    proptest! {
        #[test]
        fn rotation_group_properties(theta in 0.0f64..1.4, phi in 0.0f64..std::f64::consts::TAU) {
            let f = TiltFrame::new(theta, phi).unwrap();
            let r = rotation_matrix(&f);
            let m = r.matrix();
            prop_assert!((m.transpose() * m - Matrix3::identity()).amax() < 1e-12);
            prop_assert!((m.determinant() - 1.0).abs() < 1e-12);
            prop_assert!((r.apply(&Vector3::z()) - f.beam_axis()).amax() < 1e-12);
            prop_assert!((rotation_matrix_series(&f) - m).amax() < 1e-12);
        }

        #[test]
        fn spin_density_magnitude_is_rotation_covariant(
            theta in 0.0f64..1.3, phi in 0.0f64..6.28, xs in -2.0f64..2.0, ys in -2.0f64..2.0, zs in -0.5f64..0.5,
        ) {
            let g = geom(0.05);
            let f = TiltFrame::new(theta, phi).unwrap();
            let r = rotation_matrix(&f);
            let beam_point = Point3::new(xs * g.w0(), ys * g.w0(), zs * g.rayleigh_range());
            let p_beam = rotated_momentum_density(1.0, &g, &TiltFrame::untilted(), &beam_point).unwrap();
            let j_beam = beam_point.coords.cross(&p_beam);
            let lab = Point3::from(r.apply(&beam_point.coords));
            let p_lab = rotated_momentum_density(1.0, &g, &f, &lab).unwrap();
            let j_lab = lab.coords.cross(&p_lab);
            prop_assert!((j_lab.norm() - j_beam.norm()).abs() <= 1e-12 * j_beam.norm().max(1e-300));
        }
    }

    #[test]
    fn untilted_density_matches_plain_density() {
        let g = geom(0.01);
        let f0 = TiltFrame::new(0.0, 0.7).unwrap();
        let m = ModeSuperposition::fundamental();
        for pt in [Point3::new(30.0, -50.0, 0.0), Point3::new(-120.0, 10.0, 900.0)] {
            let a = rotated_momentum_density(1.0, &g, &f0, &pt).unwrap();
            let b = momentum_density(&superposition_sample(&m, &pt, &g), 1.0);
            assert_eq!(a, b);
        }
    }

    #[test]
    fn on_axis_density_is_along_beam() {
        let g = geom(0.01);
        let f = TiltFrame::new(0.45, 2.2).unwrap();
        let r = rotation_matrix(&f);
        let pt = Point3::from(r.apply(&Vector3::new(0.0, 0.0, 3000.0)));
        let p = rotated_momentum_density(1.0, &g, &f, &pt).unwrap();
        let local = r.apply_inverse(&p);
        assert!(local.x.abs() < 1e-15 * p.norm() && local.y.abs() < 1e-15 * p.norm());
        assert!((p.normalize() - f.beam_axis()).norm() < 1e-14);
    }

    #[test]
    fn slice_laws() {
        let g = geom(0.01);
        for axis in [SliceAxis::X, SliceAxis::Y] {
            for theta in [0.1, 0.3, 0.6] {
                for s in [-1.5, -0.5, 0.25, 1.0, 2.0] {
                    let num = slice_profile_numeric(axis, 1.0, theta, s, &g).unwrap();
                    let law = slice_profile_closed(axis, 1.0, theta, s, &g);
                    let peak = slice_profile_closed(axis, 1.0, theta, 0.0, &g);
                    assert!((num - law).abs() < 0.01f64.powi(2) * peak, "{axis:?} {theta} {s}: {num} vs {law}");
                }
            }
        }
    }

    #[test]
    fn closed_forms() {
        let g = geom(0.01);
        let f = TiltFrame::new(PI / 4.0, FRAC_PI_2).unwrap();
        let c = tilted_centroid_closed(1.0, &f, 0.0, &g).unwrap();
        assert!((c - Vector2::new(-0.5, 0.0)).norm() < 1e-15);
        let f = TiltFrame::new(0.3, 0.0).unwrap();
        let slope = tilted_centroid_closed(1.0, &f, 1.0, &g).unwrap().x - tilted_centroid_closed(1.0, &f, 0.0, &g).unwrap().x;
        assert!((slope - 0.3f64.tan()).abs() < 1e-15);
        assert_eq!(tilted_centroid_closed(0.0, &f, 0.0, &g).unwrap(), Vector2::zeros());

        let m = tilted_momenta_closed(1.0, &TiltFrame::untilted(), &g).unwrap();
        assert_eq!(m.p_over_pz, Vector3::z());
        assert_eq!(m.j_over_pz, Vector3::new(0.0, 0.0, 1.0));
        let m = tilted_momenta_closed(1.0, &f, &g).unwrap();
        assert!((m.j_over_pz.x - 0.5 * 0.3f64.tan()).abs() < 1e-15);
        assert_eq!(m.j_over_pz.y, 0.0);
        // magnitude from the components: (1/2) sqrt(4 - 3 sin^2) sec^2
        let s2 = 0.3f64.sin().powi(2);
        let expected = 0.5 * (4.0 - 3.0 * s2).sqrt() / 0.3f64.cos().powi(2);
        assert!((m.angular_momentum_magnitude() - expected).abs() < 1e-14);
        assert!((m.angular_momentum_magnitude() - 1.0).abs() > 0.01);
    }

    #[test]
    fn numeric_shift_examples() {
        let g = geom(0.01);
        let spec = QuadratureSpec::default();
        let f = TiltFrame::new(0.3, 0.0).unwrap();
        let up = tilted_centroid_numeric(1.0, &g, &f, 0.0, &spec).unwrap();
        let expected = 0.5 * 0.3f64.tan();
        assert!((up.y - expected).abs() < 0.01 * expected, "{} vs {expected}", up.y);
        assert!(up.x.abs() < 1e-9 * g.w0());
        let down = tilted_centroid_numeric(-1.0, &g, &f, 0.0, &spec).unwrap();
        assert!((down.y + up.y).abs() < 1e-12 * up.y.abs());
        for phi in [0.0, 1.0, FRAC_PI_2] {
            let f = TiltFrame::new(0.6, phi).unwrap();
            let lin = tilted_centroid_numeric(0.0, &g, &f, 0.0, &spec).unwrap();
            assert!(lin.norm() < 1e-9 * g.w0(), "{lin:?}");
        }
    }
}
