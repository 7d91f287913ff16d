//! Closed-form per-unit-length momenta as quadratic forms over HG coefficients.
//!
//! The ladder matrices are tridiagonal with zero diagonal, so every contraction
//! only visits the two neighbours `n +/- 1` of each populated index.

use nalgebra::{DMatrix, Vector3};
use num_complex::Complex64;

use crate::error::{BeamError, Result};
use crate::geometry::BeamGeometry;
use crate::modes::ModeSuperposition;
use crate::polarization::check_helicity;

const IMAG_RESIDUE_TOL: f64 = 1e-14;

/// Banded operators `B` (transverse momentum) and `C` (transverse position).
#[derive(Debug, Clone, PartialEq)]
pub struct LadderCoefficients {
    kw0: f64,
    order: u32,
}

impl LadderCoefficients {
    pub fn new(geom: &BeamGeometry, order: u32) -> Result<Self> {
        if order < 1 {
            return Err(BeamError::Geometry("ladder coefficients need order N >= 1".into()));
        }
        Ok(Self { kw0: geom.kw0(), order })
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// `B_np = (sqrt(p) d_{p,n+1} - sqrt(n) d_{n,p+1}) / (k w0)`.
    pub fn b(&self, n: u32, p: u32) -> f64 {
        band(n, p, -1.0) / self.kw0
    }

    /// `C_np = k w0 (sqrt(p) d_{p,n+1} + sqrt(n) d_{n,p+1}) / 2`.
    pub fn c(&self, n: u32, p: u32) -> f64 {
        band(n, p, 1.0) * self.kw0 / 2.0
    }

    pub fn b_matrix(&self) -> DMatrix<f64> {
        let d = self.order as usize + 1;
        DMatrix::from_fn(d, d, |i, j| self.b(i as u32, j as u32))
    }

    pub fn c_matrix(&self) -> DMatrix<f64> {
        let d = self.order as usize + 1;
        DMatrix::from_fn(d, d, |i, j| self.c(i as u32, j as u32))
    }
}

fn band(n: u32, p: u32, lower_sign: f64) -> f64 {
    if p == n + 1 {
        f64::from(p).sqrt()
    } else if n == p + 1 {
        lower_sign * f64::from(n).sqrt()
    } else {
        0.0
    }
}

/// `sum_p A(n, p) f_{p m}` style neighbour contraction along one index.
fn neighbours(n: u32) -> impl Iterator<Item = u32> {
    [n.checked_sub(1), n.checked_add(1)].into_iter().flatten()
}

fn real_part(v: Complex64, scale: f64) -> f64 {
    debug_assert!(
        v.im.abs() <= IMAG_RESIDUE_TOL * scale.max(1.0),
        "quadratic form has imaginary residue {}",
        v.im
    );
    v.re
}

/// Linear momentum per unit length from the mode coefficients.
pub fn momentum_modespace(modes: &ModeSuperposition, geom: &BeamGeometry) -> Vector3<f64> {
    let ladder = LadderCoefficients { kw0: geom.kw0(), order: modes.max_order().max(1) };
    let mut px = Complex64::new(0.0, 0.0);
    let mut py = Complex64::new(0.0, 0.0);
    for ((n, m), f) in modes.iter() {
        let fc = f.conj();
        for p in neighbours(n) {
            px += fc * ladder.b(n, p) * modes.get(p, m);
        }
        for q in neighbours(m) {
            py += fc * ladder.b(m, q) * modes.get(n, q);
        }
    }
    let minus_i = Complex64::new(0.0, -1.0);
    let pz = modes.norm_sqr();
    Vector3::new(real_part(minus_i * px, pz), real_part(minus_i * py, pz), pz)
}

/// Angular momentum per unit length from the mode coefficients.
pub fn angular_momentum_modespace(modes: &ModeSuperposition, geom: &BeamGeometry, sigma: f64) -> Result<Vector3<f64>> {
    let sigma = check_helicity(sigma)?;
    let ladder = LadderCoefficients { kw0: geom.kw0(), order: modes.max_order().max(1) };
    let mut jx = Complex64::new(0.0, 0.0);
    let mut jy = Complex64::new(0.0, 0.0);
    let mut orbital = Complex64::new(0.0, 0.0);
    for ((n, m), f) in modes.iter() {
        let fc = f.conj();
        // x: delta_np C_mq ; y: -C_np delta_mq
        for q in neighbours(m) {
            jx += fc * ladder.c(m, q) * modes.get(n, q);
        }
        for p in neighbours(n) {
            jy -= fc * ladder.c(n, p) * modes.get(p, m);
        }
        // -i sqrt(nq) with p = n - 1, q = m + 1
        if n >= 1 {
            let q = m + 1;
            orbital += Complex64::new(0.0, -(f64::from(n) * f64::from(q)).sqrt()) * fc * modes.get(n - 1, q);
        }
        // +i sqrt(mp) with p = n + 1, q = m - 1
        if m >= 1 {
            let p = n + 1;
            orbital += Complex64::new(0.0, (f64::from(m) * f64::from(p)).sqrt()) * fc * modes.get(p, m - 1);
        }
    }
    let pz = modes.norm_sqr();
    let lb = geom.lambda_bar();
    let scale = pz * geom.kw0();
    Ok(Vector3::new(
        lb * real_part(jx, scale),
        lb * real_part(jy, scale),
        lb * (sigma * pz + real_part(orbital, pz)),
    ))
}

/// Momenta of `f = f00 psi_00 + f01 psi_01 + f10 psi_10`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThreeModeSummary {
    pub p: Vector3<f64>,
    pub j: Vector3<f64>,
}

/// Shortcut formulas for the three lowest modes.
///
/// `J_x` is driven by the `psi_01` admixture and `J_y` by `psi_10`, with signs
/// fixed so that `J_x = <y> P_z` and `J_y = -<x> P_z` at the waist.
pub fn three_mode_summary(modes: &ModeSuperposition, sigma: f64, geom: &BeamGeometry) -> Result<ThreeModeSummary> {
    let sigma = check_helicity(sigma)?;
    if let Some(((n, m), _)) = modes.iter().find(|&((n, m), _)| n + m > 1) {
        return Err(BeamError::ExtraMode { n, m });
    }
    let (f00, f01, f10) = (modes.get(0, 0), modes.get(0, 1), modes.get(1, 0));
    three_mode_from_coefficients(f00, f01, f10, sigma, geom)
}

pub fn three_mode_from_coefficients(
    f00: Complex64,
    f01: Complex64,
    f10: Complex64,
    sigma: f64,
    geom: &BeamGeometry,
) -> Result<ThreeModeSummary> {
    let sigma = check_helicity(sigma)?;
    let theta0 = geom.angular_spread();
    let w0 = geom.w0();
    let lb = geom.lambda_bar();
    let pz = f00.norm_sqr() + f01.norm_sqr() + f10.norm_sqr();
    let a10 = f00.conj() * f10;
    let a01 = f00.conj() * f01;
    Ok(ThreeModeSummary {
        p: Vector3::new(theta0 * a10.im, theta0 * a01.im, pz),
        j: Vector3::new(
            w0 * a01.re,
            -w0 * a10.re,
            lb * sigma * pz + 2.0 * lb * (f10.conj() * f01).im,
        ),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn ladder_entries() {
        let g = BeamGeometry::new(20.0).unwrap();
        let g2 = BeamGeometry::with_wavenumber(2.0, 1.0, 2.0).unwrap();
        let l = LadderCoefficients::new(&g2, 1).unwrap();
        assert_eq!(l.b(0, 1), 0.5);
        assert_eq!(l.b(1, 0), -0.5);
        assert_eq!(l.c(0, 1), 1.0);
        assert_eq!(l.c(1, 0), 1.0);
        assert!(LadderCoefficients::new(&g, 0).is_err());

        let l = LadderCoefficients::new(&g, 6).unwrap();
        let (b, cm) = (l.b_matrix(), l.c_matrix());
        assert_eq!(b.transpose(), -&b);
        assert_eq!(cm.transpose(), cm);
        for i in 0..7 {
            assert_eq!(b[(i, i)], 0.0);
            assert_eq!(cm[(i, i)], 0.0);
            for j in 0..7 {
                if i.abs_diff(j) > 1 {
                    assert_eq!((b[(i, j)], cm[(i, j)]), (0.0, 0.0));
                }
                if j == i + 1 {
                    // upper band: C = B (k w0)^2 / 2
                    assert!((cm[(i, j)] - b[(i, j)] * g.kw0().powi(2) / 2.0).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn momentum_examples() {
        let g = BeamGeometry::new(20.0).unwrap();
        assert_eq!(momentum_modespace(&ModeSuperposition::fundamental(), &g), Vector3::new(0.0, 0.0, 1.0));
        let s = FRAC_1_SQRT_2;
        let m = ModeSuperposition::from_terms([((0, 0), c(s, 0.0)), ((1, 0), c(0.0, s))]).unwrap();
        let p = momentum_modespace(&m, &g);
        assert!((p.x - g.angular_spread() / 2.0).abs() < 1e-16);
        assert_eq!(p.y, 0.0);
        let real = ModeSuperposition::from_terms([((0, 0), c(0.4, 0.0)), ((1, 0), c(0.7, 0.0)), ((0, 1), c(-0.2, 0.0))])
            .unwrap();
        let p = momentum_modespace(&real, &g);
        assert_eq!((p.x, p.y), (0.0, 0.0));
    }

    #[test]
    fn angular_momentum_examples() {
        let g = BeamGeometry::new(20.0).unwrap();
        let f = ModeSuperposition::fundamental();
        assert_eq!(angular_momentum_modespace(&f, &g, 1.0).unwrap(), Vector3::new(0.0, 0.0, 1.0));
        assert_eq!(angular_momentum_modespace(&f, &g, -1.0).unwrap(), Vector3::new(0.0, 0.0, -1.0));

        let s = FRAC_1_SQRT_2;
        let shifted = ModeSuperposition::from_terms([((0, 0), c(s, 0.0)), ((0, 1), c(s, 0.0))]).unwrap();
        let j = angular_momentum_modespace(&shifted, &g, 0.0).unwrap();
        assert!((j.x - g.w0() / 2.0).abs() < 1e-13);
        assert_eq!((j.y, j.z), (0.0, 0.0));

        let lg = ModeSuperposition::laguerre_gauss_l1();
        for sigma in [-1.0, 0.0, 1.0] {
            let j = angular_momentum_modespace(&lg, &g, sigma).unwrap();
            assert!((j.z - (sigma + 1.0)).abs() < 1e-15);
            assert_eq!((j.x, j.y), (0.0, 0.0));
        }
        assert!(angular_momentum_modespace(&f, &g, 2.0).is_err());
    }

    #[test]
    fn three_mode_examples() {
        let g = BeamGeometry::new(50.0).unwrap();
        let t = three_mode_summary(&ModeSuperposition::fundamental(), 0.5, &g).unwrap();
        assert_eq!(t.p, Vector3::new(0.0, 0.0, 1.0));
        assert_eq!(t.j, Vector3::new(0.0, 0.0, 0.5));

        let t = three_mode_summary(&ModeSuperposition::laguerre_gauss_l1(), 1.0, &g).unwrap();
        assert!((t.j.z - 2.0).abs() < 1e-15);

        let m = ModeSuperposition::from_terms([
            ((0, 0), c(FRAC_1_SQRT_2, 0.0)),
            ((0, 1), c(0.5, 0.0)),
            ((1, 0), c(0.0, 0.5)),
        ])
        .unwrap();
        let t = three_mode_summary(&m, 0.0, &g).unwrap();
        let j = angular_momentum_modespace(&m, &g, 0.0).unwrap();
        let p = momentum_modespace(&m, &g);
        assert!((t.j - j).amax() < 1e-14 * g.w0());
        assert!((t.p - p).amax() < 1e-14);

        let extra = ModeSuperposition::from_terms([((0, 0), c(1.0, 0.0)), ((1, 1), c(0.1, 0.0))]).unwrap();
        assert_eq!(three_mode_summary(&extra, 0.0, &g), Err(BeamError::ExtraMode { n: 1, m: 1 }));
    }

    prop_compose! {
        fn arb_modes(max: u32)(
            entries in proptest::collection::vec(((0..=max), (0..=max), -1.0f64..1.0, -1.0f64..1.0), 1..10)
        ) -> ModeSuperposition {
            let mut s = ModeSuperposition::default();
            for (n, m, re, im) in entries {
                s.insert(n, m, c(re, im)).unwrap();
            }
            s
        }
    }

    proptest! {
        #[test]
        fn spin_orbital_split_and_sigma_independence(m in arb_modes(4), sigma in -1.0f64..1.0, kw0 in 12.0f64..300.0) {
            let g = BeamGeometry::new(kw0).unwrap();
            let j = angular_momentum_modespace(&m, &g, sigma).unwrap();
            let j0 = angular_momentum_modespace(&m, &g, 0.0).unwrap();
            prop_assert_eq!(j.x, j0.x);
            prop_assert_eq!(j.y, j0.y);
            let spin = g.lambda_bar() * sigma * m.norm_sqr();
            prop_assert!((j.z - j0.z - spin).abs() <= 4.0 * f64::EPSILON * (j.z.abs() + j0.z.abs() + spin.abs()));
        }

        #[test]
        fn three_mode_matches_general_operators(
            v in proptest::collection::vec(-1.0f64..1.0, 6), sigma in -1.0f64..1.0,
        ) {
            let g = BeamGeometry::new(40.0).unwrap();
            let m = ModeSuperposition::from_terms([
                ((0, 0), c(v[0], v[1])), ((0, 1), c(v[2], v[3])), ((1, 0), c(v[4], v[5])),
            ]).unwrap();
            let t = three_mode_summary(&m, sigma, &g).unwrap();
            let p = momentum_modespace(&m, &g);
            let j = angular_momentum_modespace(&m, &g, sigma).unwrap();
            prop_assert!((t.p - p).amax() <= 1e-14);
            prop_assert!((t.j - j).amax() <= 1e-14 * g.w0());
        }

        #[test]
        fn real_displacements_carry_no_orbital_jz(a in -1.0f64..1.0, b in -1.0f64..1.0) {
            let g = BeamGeometry::new(40.0).unwrap();
            let m = ModeSuperposition::from_terms([
                ((0, 0), c(1.0, 0.0)), ((0, 1), c(a, 0.0)), ((1, 0), c(b, 0.0)),
            ]).unwrap();
            let j = angular_momentum_modespace(&m, &g, 0.0).unwrap();
            prop_assert_eq!(j.z, 0.0);
        }
    }
}
