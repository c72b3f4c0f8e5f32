//! Potentials along fixed rays.
//!
//! Quadratic rays carry the potential `t` with Green's function
//! `G(gamma(t)) = 2^(t-1)`, so that `f(gamma(t)) = gamma(t+1)` and the
//! angle-0 ray of `z^2` passes through `e` at `t = 1`. Exponential rays use
//! the piecewise tetration [`tetration`] and its inverse [`slog`].

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::config::RayConfig;
use crate::family::{FamilyId, FamilyMember, HoloMap};
use crate::{Error, Result};

/// Green's function `lim 2^-n log|f_c^n(z)|` of the quadratic family.
pub fn boettcher_potential(m: &FamilyMember, z: Complex64, cfg: &RayConfig) -> Result<f64> {
    if m.id != FamilyId::QuadraticC {
        return Err(Error::InvalidInput("Green's function is defined for the quadratic family".into()));
    }
    let c = m.a;
    let mut w = z;
    let mut scale = 1.0_f64;
    for _ in 0..=cfg.max_iter {
        if w.norm() > cfg.escape_radius {
            // log|phi(w)| = log|w| + Re(c / 2w^2) + O(|w|^-4)
            let tail = (c / (2.0 * w * w)).re;
            return Ok(scale * (w.norm().ln() + tail));
        }
        w = w * w + c;
        scale *= 0.5;
    }
    Err(Error::NonEscaping { z })
}

/// Ray potential `1 + log2 G(z)` of a quadratic point.
pub fn quadratic_potential(m: &FamilyMember, z: Complex64, cfg: &RayConfig) -> Result<f64> {
    Ok(1.0 + boettcher_potential(m, z, cfg)?.log2())
}

/// Tetration `E` with `E(u) = u + 1` on `[-1, 0]` and `E(u + 1) = exp E(u)`.
///
/// Defined for `u > -2`; returns `+inf` once the tower overflows.
pub fn tetration(u: f64) -> f64 {
    if u <= -2.0 {
        return f64::NEG_INFINITY;
    }
    if u < -1.0 {
        return (u + 2.0).ln();
    }
    let mut k = u.ceil().max(0.0) as i64;
    let mut v = u - k as f64 + 1.0;
    while k > 0 {
        v = v.exp();
        if !v.is_finite() {
            return f64::INFINITY;
        }
        k -= 1;
    }
    v
}

/// Inverse of [`tetration`] on the reals.
pub fn slog(x: f64) -> f64 {
    if x <= 0.0 {
        return x.exp() - 2.0;
    }
    let mut x = x;
    let mut k = 0.0;
    while x > 1.0 {
        x = x.ln();
        k += 1.0;
    }
    x - 1.0 + k
}

/// `Log lambda - 2 pi i s`, the shift that straightens an exponential ray
/// with fixed address entry `s`.
pub(crate) fn exp_shift(m: &FamilyMember, s: i64) -> Complex64 {
    m.a.ln() - Complex64::new(0.0, 2.0 * PI * s as f64)
}

/// Potential of `z` on the exponential ray with fixed address entry `s`:
/// `slog(Re(f^n(z) + Log lambda - 2 pi i s)) - n` once the shifted orbit
/// passes the tail potential.
pub fn exponential_potential(m: &FamilyMember, z: Complex64, s: i64, cfg: &RayConfig) -> Result<f64> {
    if m.id != FamilyId::ExponentialLambda {
        return Err(Error::InvalidInput("exponential potential needs the exponential family".into()));
    }
    let shift = exp_shift(m, s);
    let mut w = z;
    for n in 0..=cfg.max_iter {
        let y = w + shift;
        if y.re >= cfg.exponential_tail_potential {
            return Ok(slog(y.re) - n as f64);
        }
        w = match m.eval(w) {
            Ok(v) => v,
            Err(Error::OverflowGuard { .. }) => return Err(Error::NonEscaping { z }),
            Err(e) => return Err(e),
        };
    }
    Err(Error::NonEscaping { z })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;

    fn quad(c: f64) -> FamilyMember {
        FamilyMember::new(FamilyId::QuadraticC, Complex64::new(c, 0.0)).unwrap()
    }

    #[test]
    fn green_function_of_squaring() {
        let cfg = RayConfig::default();
        let g = boettcher_potential(&quad(0.0), Complex64::new(E, 0.0), &cfg).unwrap();
        assert!((g - 1.0).abs() < 1e-12);
        let h = boettcher_potential(&quad(0.0), Complex64::new(0.5f64.exp(), 0.0), &cfg).unwrap();
        assert!((h - 0.5).abs() < 1e-12);
    }

    #[test]
    fn green_function_two_depths_agree() {
        let m = quad(0.26);
        let z = Complex64::new(0.26, 0.0);
        let a = boettcher_potential(&m, z, &RayConfig::default()).unwrap();
        let deeper = RayConfig { escape_radius: 1e16, ..RayConfig::default() };
        let b = boettcher_potential(&m, z, &deeper).unwrap();
        assert!(a > 0.0);
        assert!((a - b).abs() <= 1e-10 * a, "{a} {b}");
    }

    #[test]
    fn bounded_orbits_do_not_escape() {
        let err = boettcher_potential(&quad(0.0), Complex64::new(0.5, 0.0), &RayConfig::default());
        assert!(matches!(err, Err(Error::NonEscaping { .. })));
    }

    #[test]
    fn tetration_and_slog_invert() {
        assert_eq!(tetration(0.0), 1.0);
        assert!((tetration(1.0) - E).abs() < 1e-15);
        assert!((tetration(2.0) - E.exp()).abs() < 1e-12);
        for u in [-1.7, -0.5, 0.3, 1.5, 2.2, 2.9] {
            assert!((slog(tetration(u)) - u).abs() < 1e-12, "{u}");
        }
        assert!(tetration(5.0).is_infinite());
    }
}
