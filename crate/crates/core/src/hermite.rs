//! Physicists' Hermite polynomials.

use crate::error::{BeamError, Result};

/// Largest degree accepted by [`hermite`].
pub const MAX_HERMITE_ORDER: u32 = 64;

/// `H_n(u)` by the three-term recurrence `H_{n+1} = 2u H_n - 2n H_{n-1}`.
pub fn hermite(n: u32, u: f64) -> Result<f64> {
    if n > MAX_HERMITE_ORDER {
        return Err(BeamError::HermiteOrder { order: n, max: MAX_HERMITE_ORDER });
    }
    Ok(hermite_unchecked(n, u))
}

fn hermite_unchecked(n: u32, u: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 2.0 * u;
    for j in 1..n {
        let next = 2.0 * u * cur - 2.0 * f64::from(j) * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `ln(n!)`, summed exactly term by term.
pub(crate) fn ln_factorial(n: u32) -> f64 {
    (2..=n).map(|j| f64::from(j).ln()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_orders() {
        assert_eq!(hermite(0, 3.7).unwrap(), 1.0);
        assert_eq!(hermite(2, 1.0).unwrap(), 2.0);
        assert_eq!(hermite(3, 0.5).unwrap(), -5.0);
        assert_eq!(hermite(1, -0.25).unwrap(), -0.5);
    }

    #[test]
    fn explicit_polynomials() {
        for &u in &[-2.3f64, -0.7, 0.0, 0.4, 1.9] {
            let h4 = 16.0 * u.powi(4) - 48.0 * u * u + 12.0;
            let h5 = 32.0 * u.powi(5) - 160.0 * u.powi(3) + 120.0 * u;
            assert!((hermite(4, u).unwrap() - h4).abs() < 1e-11 * h4.abs().max(1.0));
            assert!((hermite(5, u).unwrap() - h5).abs() < 1e-11 * h5.abs().max(1.0));
        }
    }

    #[test]
    fn order_cutoff() {
        assert!(hermite(64, 1.0).unwrap().is_finite());
        assert_eq!(
            hermite(65, 1.0),
            Err(BeamError::HermiteOrder { order: 65, max: 64 })
        );
    }

    #[test]
    fn parity() {
        for n in 0..12 {
            let s = if n % 2 == 0 { 1.0 } else { -1.0 };
            let a = hermite(n, 0.83).unwrap();
            assert!((hermite(n, -0.83).unwrap() - s * a).abs() <= 1e-12 * a.abs().max(1.0));
        }
    }

    #[test]
    fn factorial_logs() {
        assert_eq!(ln_factorial(0), 0.0);
        assert_eq!(ln_factorial(1), 0.0);
        assert!((ln_factorial(5) - 120f64.ln()).abs() < 1e-14);
    }
}
