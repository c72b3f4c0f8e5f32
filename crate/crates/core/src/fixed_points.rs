//! The bifurcating fixed-point pair, its multipliers, the λ-coordinate
//! `mu1 = 1 + 2 lambda^n`, and the affine change of variable that brings a
//! member into the normalized form `(1 + 2 lambda^n) w + w^2 + O(w^3)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::contour::{count_fixed_points, fixed_point_power_sum, Circle};
use crate::family::{FamilyId, FamilyMember, HoloMap};
use crate::{Error, Result};

/// The two fixed points inside a disk.
///
/// `z1` is the point followed from the parabolic fixed point. For the
/// normalized family it is `0`. Otherwise it is the point with the larger
/// `|mu|`, and for a tie it is the point in the upper half plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FixedPair {
    pub z1: Complex64,
    pub z2: Complex64,
    pub mu1: Complex64,
    pub mu2: Complex64,
    #[serde(skip)]
    pub disk: Option<Circle>,
}

/// `lambda` with `1 + 2 lambda^n = mu1`; `branch` is the k of the root
/// `principal * exp(2 pi i k / n)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LambdaCoordinate {
    pub lambda: Complex64,
    pub n: u32,
    pub branch: u32,
}

/// Open sector of arguments `2 pi (theta1, theta2)`, in turns.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sector {
    pub theta1: f64,
    pub theta2: f64,
}

impl Sector {
    pub fn new(theta1: f64, theta2: f64) -> Result<Self> {
        if !(theta1 < theta2) || !theta1.is_finite() || !theta2.is_finite() {
            return Err(Error::InvalidInput(format!("empty sector ({theta1}, {theta2})")));
        }
        Ok(Self { theta1, theta2 })
    }

    pub fn width(&self) -> f64 {
        self.theta2 - self.theta1
    }

    /// Whether `arg z` (in turns, modulo 1) lies strictly inside.
    pub fn contains_arg(&self, z: Complex64) -> bool {
        let t = z.arg() / (2.0 * PI);
        let k = (self.theta1 - t).ceil();
        let shifted = t + k;
        let shifted = if shifted <= self.theta1 { shifted + 1.0 } else { shifted };
        shifted > self.theta1 && shifted < self.theta2
    }
}

/// Affine chart `w = alpha z + beta`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Affine {
    pub alpha: Complex64,
    pub beta: Complex64,
}

impl Affine {
    pub fn identity() -> Self {
        Self { alpha: Complex64::new(1.0, 0.0), beta: Complex64::new(0.0, 0.0) }
    }

    pub fn apply(&self, z: Complex64) -> Complex64 {
        self.alpha * z + self.beta
    }

    pub fn invert(&self, w: Complex64) -> Complex64 {
        (w - self.beta) / self.alpha
    }

    /// Taylor coefficients at `w = apply(center)` of the conjugate map
    /// `w -> apply(f(invert(w)))`, given those of `f` at `center`.
    pub fn conjugate_taylor(&self, coeffs: &[Complex64]) -> Vec<Complex64> {
        coeffs
            .iter()
            .enumerate()
            .map(|(k, &c)| match k {
                0 => self.apply(c),
                _ => c * self.alpha.powi(1 - k as i32),
            })
            .collect()
    }
}

fn fixed_point_newton<M: HoloMap>(m: &M, seed: Complex64, tol: &Tolerances) -> Result<Complex64> {
    let cfg = &tol.fixed_points;
    let residual = |z: Complex64| -> Result<f64> { Ok((m.eval(z)? - z).norm()) };
    let mut best = seed;
    let mut best_r = residual(seed)?;
    let mut z = seed;
    for _ in 0..cfg.newton_max_iter {
        let d = m.deriv(z)? - 1.0;
        if d.norm() == 0.0 {
            break;
        }
        let step = (m.eval(z)? - z) / d;
        z -= step;
        let r = residual(z)?;
        if !r.is_finite() {
            break;
        }
        if r < best_r {
            best = z;
            best_r = r;
        }
        if step.norm() <= cfg.newton_tol * (1.0 + z.norm()) {
            break;
        }
    }
    Ok(best)
}

/// Locates the two fixed points of `m` inside `disk`.
///
/// Seeds come from the power sums `s1, s2` of the fixed points in the disk,
/// then each seed is Newton-polished. With `distinct`, a pair closer than the
/// coalescence tolerance is rejected.
pub fn find_pair(m: &FamilyMember, disk: &Circle, distinct: bool, tol: &Tolerances) -> Result<FixedPair> {
    let count = count_fixed_points(m, disk, &tol.contour)?;
    if count != 2 {
        return Err(Error::WrongZeroCount { expected: 2, found: count });
    }
    let s1 = fixed_point_power_sum(m, disk, 1, &tol.contour)?;
    let s2 = fixed_point_power_sum(m, disk, 2, &tol.contour)?;
    let e2 = (s1 * s1 - s2) / 2.0;
    let root = (s1 * s1 - 4.0 * e2).sqrt();
    let seeds = [(s1 + root) / 2.0, (s1 - root) / 2.0];

    let (z1, z2) = if let FamilyId::NormalizedParabolic { .. } = m.id {
        // 0 is fixed for every parameter; the partner is -2 lambda^n exactly
        let partner = if seeds[0].norm() >= seeds[1].norm() { seeds[0] } else { seeds[1] };
        (Complex64::new(0.0, 0.0), fixed_point_newton(m, partner, tol)?)
    } else {
        let a = fixed_point_newton(m, seeds[0], tol)?;
        let b = fixed_point_newton(m, seeds[1], tol)?;
        order_pair(m, a, b)?
    };

    for z in [z1, z2] {
        let residual = (m.eval(z)? - z).norm();
        if residual > tol.fixed_points.residual_tol {
            return Err(Error::NotAFixedPoint { z, residual });
        }
    }
    let gap = (z1 - z2).norm();
    if distinct && gap < tol.fixed_points.coalesce_tol {
        return Err(Error::CoalescedPair { gap });
    }
    Ok(FixedPair { z1, z2, mu1: m.deriv(z1)?, mu2: m.deriv(z2)?, disk: Some(*disk) })
}

fn order_pair(m: &FamilyMember, a: Complex64, b: Complex64) -> Result<(Complex64, Complex64)> {
    let (ma, mb) = (m.deriv(a)?.norm(), m.deriv(b)?.norm());
    let scale = ma.max(mb).max(1.0);
    if (ma - mb).abs() <= 1e-12 * scale {
        return Ok(if a.im >= b.im { (a, b) } else { (b, a) });
    }
    Ok(if ma > mb { (a, b) } else { (b, a) })
}

/// The multiplier `f'(z)` of a fixed point.
pub fn multiplier_at<M: HoloMap>(m: &M, z: Complex64, tol: &Tolerances) -> Result<Complex64> {
    let residual = (m.eval(z)? - z).norm();
    if residual > tol.fixed_points.fixed_point_tol {
        return Err(Error::NotAFixedPoint { z, residual });
    }
    m.deriv(z)
}

/// Solves `1 + 2 lambda^n = mu` with the root branch in `sector`.
pub fn lambda_from_multiplier(mu: Complex64, n: u32, sector: &Sector) -> Result<LambdaCoordinate> {
    if n == 0 {
        return Err(Error::InvalidInput("n must be positive".into()));
    }
    if n as f64 * sector.width() >= 1.0 {
        return Err(Error::SectorViolation(format!(
            "n (theta2 - theta1) = {} is not below 1",
            n as f64 * sector.width()
        )));
    }
    let d = (mu - 1.0) / 2.0;
    if d.norm() == 0.0 {
        return Err(Error::ParabolicInput);
    }
    let principal = d.powf(1.0 / n as f64);
    for k in 0..n {
        let lambda = principal * Complex64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64);
        if sector.contains_arg(lambda) {
            return Ok(LambdaCoordinate { lambda, n, branch: k });
        }
    }
    Err(Error::SectorViolation(format!(
        "no {n}-th root of {d} has argument in 2 pi ({}, {})",
        sector.theta1, sector.theta2
    )))
}

/// The λ-coordinate of a pair, from its multiplier `mu1`.
pub fn lambda_coordinate(pair: &FixedPair, n: u32, sector: &Sector) -> Result<LambdaCoordinate> {
    lambda_from_multiplier(pair.mu1, n, sector)
}

/// The affine chart sending `z1` to 0 with monic quadratic term.
pub fn normalize_to_parabolic_form(m: &FamilyMember, pair: &FixedPair) -> Result<Affine> {
    let coeffs = m.taylor(pair.z1, 2)?;
    let alpha = coeffs[2];
    if alpha.norm() < 1e-14 {
        return Err(Error::DegenerateQuadraticTerm);
    }
    Ok(Affine { alpha, beta: -alpha * pair.z1 })
}

/// Follows `z1` once around the parameter circle `|a - a0| = radius`.
///
/// Returns `DoubleCover` when `z1` comes back as the other fixed point,
/// which is the situation where the pair is only holomorphic on a
/// degree-2 cover of the parameter disk.
pub fn check_single_valued(id: FamilyId, radius: f64, steps: usize, tol: &Tolerances) -> Result<()> {
    let a0 = id.base_parameter();
    let z0 = id.base_fixed_point();
    let disk_radius = (8.0 * radius.sqrt()).max(4.0 * radius).min(0.5);
    let disk = Circle::new(z0, disk_radius, 256)?;
    let member = |k: usize| -> Result<FamilyMember> {
        let a = a0 + Complex64::from_polar(radius, 2.0 * PI * k as f64 / steps as f64);
        FamilyMember::new(id, a)
    };
    let start = find_pair(&member(0)?, &disk, true, tol)?;
    let mut current = start.z1;
    for k in 1..=steps {
        let p = find_pair(&member(k)?, &disk, true, tol)?;
        current = if (p.z1 - current).norm() <= (p.z2 - current).norm() { p.z1 } else { p.z2 };
    }
    if (current - start.z2).norm() < (current - start.z1).norm() {
        return Err(Error::DoubleCover);
    }
    Ok(())
}
