//! Kœnigs linearizers at attracting or repelling fixed points.
//!
//! `kappa(f(z)) = mu kappa(z)` with `kappa'(fp) = 1`. Points are moved into a
//! small disk by iterating toward the fixed point (forward when attracting,
//! along the local inverse when repelling), where the Kœnigs power series is
//! applied. The logarithm of `kappa` is accumulated along the orbit from the
//! principal logarithms of the normalized step ratios, so a single branch
//! choice at the starting point fixes it.

use num_complex::Complex64;

use super::log_cut;
use crate::config::FatouConfig;
use crate::family::HoloMap;
use crate::{Error, Result};

const ESCAPE: f64 = 1e8;

#[derive(Debug, Clone)]
pub struct LinearizerChart<M: HoloMap> {
    map: M,
    pub fixed_point: Complex64,
    pub multiplier: Complex64,
    /// Radius of the disk where the power series is trusted.
    pub domain_radius: f64,
    coeffs: Vec<Complex64>,
    pub max_iterations: usize,
}

/// Taylor coefficients of `F^j` up to order `n`, for `j = 1..=n`.
fn powers(f: &[Complex64], n: usize) -> Vec<Vec<Complex64>> {
    let zero = Complex64::new(0.0, 0.0);
    let mut out = vec![vec![zero; n + 1]];
    let mut cur = f.to_vec();
    cur.resize(n + 1, zero);
    for _ in 1..=n {
        out.push(cur.clone());
        let mut next = vec![zero; n + 1];
        for (i, &a) in cur.iter().enumerate() {
            if a == zero {
                continue;
            }
            for (j, &b) in f.iter().enumerate().take(n + 1 - i) {
                next[i + j] += a * b;
            }
        }
        cur = next;
    }
    out
}

impl<M: HoloMap> LinearizerChart<M> {
    pub fn new(map: M, fixed_point: Complex64, multiplier: Complex64, cfg: &FatouConfig) -> Result<Self> {
        if (multiplier.norm() - 1.0).abs() <= cfg.indifferent_band {
            return Err(Error::IndifferentMultiplier { mu: multiplier });
        }
        let n = cfg.koenigs_order.max(1);
        let mut f = map.taylor(fixed_point, n)?;
        f[0] = Complex64::new(0.0, 0.0);
        if (f[1] - multiplier).norm() > 1e-8 * multiplier.norm().max(1.0) {
            return Err(Error::NotAFixedPoint { z: fixed_point, residual: (f[1] - multiplier).norm() });
        }
        f[1] = multiplier;
        let pw = powers(&f, n);
        let mut k = vec![Complex64::new(0.0, 0.0); n + 1];
        k[1] = Complex64::new(1.0, 0.0);
        for m in 2..=n {
            let mut s = Complex64::new(0.0, 0.0);
            for j in 1..m {
                s += k[j] * pw[j][m];
            }
            k[m] = s / (multiplier - multiplier.powi(m as i32));
        }
        // largest radius at which the last retained terms are at rounding level
        let mut radius = f64::INFINITY;
        let lo = n.saturating_sub(2).max(2);
        for (m, km) in k.iter().enumerate().take(n + 1).skip(lo) {
            if km.norm() > 0.0 {
                radius = radius.min((1e-16 / km.norm()).powf(1.0 / (m as f64 - 1.0)));
            }
        }
        Ok(Self { map, fixed_point, multiplier, domain_radius: radius, coeffs: k, max_iterations: cfg.max_iterations })
    }

    /// Caps the series disk at `radius`.
    pub fn with_radius(mut self, radius: f64) -> Self {
        self.domain_radius = self.domain_radius.min(radius);
        self
    }

    pub fn is_repelling(&self) -> bool {
        self.multiplier.norm() > 1.0
    }

    pub fn map(&self) -> &M {
        &self.map
    }

    /// The truncated Kœnigs series at `u = z - fp`.
    pub fn series(&self, u: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * u + c)
    }

    /// `log kappa(z)` on the branch where `z - fp` takes `log_cut(., cut)`.
    pub fn log_kappa(&self, z: Complex64, cut: Complex64) -> Result<Complex64> {
        let fp = self.fixed_point;
        let mu = self.multiplier;
        let mut u = z - fp;
        if u.norm() == 0.0 {
            return Err(Error::NotInPetal { z });
        }
        let mut acc = log_cut(u, cut);
        let mut cur = z;
        let repelling = self.is_repelling();
        for _ in 0..self.max_iterations {
            if u.norm() <= self.domain_radius {
                return Ok(acc + (self.series(u) / u).ln());
            }
            let next = if repelling {
                self.map.branch_preimage(cur, fp)?
            } else {
                match self.map.eval(cur) {
                    Ok(v) => v,
                    Err(Error::OverflowGuard { .. }) => return Err(Error::NotInPetal { z }),
                    Err(e) => return Err(e),
                }
            };
            let un = next - fp;
            if !(un.norm() < ESCAPE) || un.norm() == 0.0 {
                return Err(Error::NotInPetal { z });
            }
            acc += if repelling { mu * un / u } else { un / (mu * u) }.ln();
            cur = next;
            u = un;
        }
        Err(Error::BranchLoss(format!(
            "orbit of {z} did not reach the linearization disk in {} steps",
            self.max_iterations
        )))
    }

    pub fn kappa(&self, z: Complex64) -> Result<Complex64> {
        Ok(self.log_kappa(z, Complex64::new(-1.0, 0.0))?.exp())
    }
}

/// `kappa(z)` for the linearizer of `m` at `fp`.
pub fn koenigs<M: HoloMap>(m: M, fp: Complex64, mu: Complex64, z: Complex64, cfg: &FatouConfig) -> Result<Complex64> {
    LinearizerChart::new(m, fp, mu, cfg)?.kappa(z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fatou::models::{Linear, Polynomial};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn cfg() -> FatouConfig {
        FatouConfig::default()
    }

    #[test]
    fn linear_map_is_its_own_linearizer() {
        let k = koenigs(Linear { mu: c(0.5, 0.0) }, c(0.0, 0.0), c(0.5, 0.0), c(0.3, 0.0), &cfg()).unwrap();
        assert!((k - 0.3).norm() < 1e-15);
    }

    #[test]
    fn truncation_depths_agree() {
        let g = Polynomial::quadratic(c(0.9, 0.0));
        let z = c(0.01, 0.0);
        let a = koenigs(g.clone(), c(0.0, 0.0), c(0.9, 0.0), z, &cfg()).unwrap();
        let mut shallow = cfg();
        shallow.koenigs_order = 6;
        let b =
            LinearizerChart::new(g, c(0.0, 0.0), c(0.9, 0.0), &shallow).unwrap().with_radius(1e-4).kappa(z).unwrap();
        assert!((a - b).norm() < 1e-10, "{a} {b}");
        assert!(((a - z) / z).norm() < 0.2);
    }

    #[test]
    fn schroeder_identity() {
        let g = Polynomial::quadratic(c(1.1, 0.0));
        let lin = LinearizerChart::new(g.clone(), c(0.0, 0.0), c(1.1, 0.0), &cfg()).unwrap();
        let z = c(0.01, 0.0);
        let ratio = lin.kappa(g.eval(z).unwrap()).unwrap() / lin.kappa(z).unwrap();
        assert!((ratio - 1.1).norm() < 1e-9);
        let z = c(0.2, 0.3);
        let ratio = lin.kappa(g.eval(z).unwrap()).unwrap() / lin.kappa(z).unwrap();
        assert!((ratio - 1.1).norm() < 1e-9);
    }

    #[test]
    fn indifferent_rejected() {
        let g = Polynomial::quadratic(Complex64::from_polar(1.0, 0.3));
        let err = LinearizerChart::new(g, c(0.0, 0.0), Complex64::from_polar(1.0, 0.3), &cfg()).unwrap_err();
        assert!(matches!(err, Error::IndifferentMultiplier { .. }));
    }

    #[test]
    fn complex_multiplier_schroeder() {
        let mu = c(1.05, 0.08);
        let g = Polynomial::quadratic(mu);
        let lin = LinearizerChart::new(g.clone(), c(0.0, 0.0), mu, &cfg()).unwrap();
        for z in [c(0.05, 0.02), c(-0.03, 0.04), c(0.0, -0.06)] {
            let ratio = lin.kappa(g.eval(z).unwrap()).unwrap() / lin.kappa(z).unwrap();
            assert!((ratio - mu).norm() < 1e-9, "{z}: {ratio}");
        }
    }
}
