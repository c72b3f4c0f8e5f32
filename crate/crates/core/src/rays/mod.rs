//! Fixed dynamic rays `gamma(t)` with `f(gamma(t)) = gamma(t + 1)`.
//!
//! A point at potential `t` is obtained by seeding a tail asymptotic at
//! potential `t + N` and pulling back `N` times along the ray's branch.

mod combinatorics;
mod landing;
mod potential;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::RayConfig;
use crate::family::{FamilyId, FamilyMember, HoloMap};
use crate::{Error, Result};

pub use combinatorics::Combinatorics;
pub use landing::{extrapolate, Landing, LandingModel};
pub use potential::{boettcher_potential, exponential_potential, quadratic_potential, slog, tetration};

use potential::exp_shift;

/// Potentials closer than this are treated as equal.
const POTENTIAL_MATCH: f64 = 1e-9;
const MAX_DEPTH: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RaySample {
    pub t: f64,
    pub z: Complex64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RayCurve {
    pub member: FamilyMember,
    pub comb: Combinatorics,
    /// Potentials descending.
    pub samples: Vec<RaySample>,
    /// `None` when no two samples are one potential unit apart.
    pub invariance_residual: Option<f64>,
}

/// The tail point at potential `tau_t` (already deep enough) and branch `s`.
fn tail_point(m: &FamilyMember, s: i64, t: f64) -> Result<Complex64> {
    match m.id {
        FamilyId::QuadraticC => {
            let g = (t - 1.0).exp2();
            let w = Complex64::new(g.exp(), 0.0);
            if !w.re.is_finite() {
                return Err(Error::OverflowGuard { z: Complex64::new(g, 0.0), limit: f64::MAX.ln() });
            }
            // inverse Boettcher map: z = w - c/(2w) + O(w^-3)
            Ok(w - m.a / (2.0 * w))
        }
        _ => {
            let tau = tetration(t);
            if !tau.is_finite() {
                return Err(Error::OverflowGuard { z: Complex64::new(t, 0.0), limit: f64::MAX });
            }
            let k = -exp_shift(m, s);
            Ok(tau + k + k * (-tau).exp())
        }
    }
}

/// Smallest depth at which the tail asymptotic is accurate.
fn tail_depth(m: &FamilyMember, t: f64, cfg: &RayConfig) -> usize {
    let deep_enough = |u: f64| match m.id {
        FamilyId::QuadraticC => (u - 1.0).exp2() >= cfg.quadratic_tail_modulus.ln(),
        _ => tetration(u) >= cfg.exponential_tail_potential,
    };
    (0..MAX_DEPTH).find(|&n| deep_enough(t + n as f64)).unwrap_or(MAX_DEPTH)
}

/// One pullback along the ray's branch.
fn pullback(m: &FamilyMember, s: i64, w: Complex64, cfg: &RayConfig) -> Result<Complex64> {
    match m.id {
        FamilyId::QuadraticC => {
            let [y1, y2] = m.quadratic_preimages(w);
            let gap = (y1 - y2).norm();
            if gap < cfg.preimage_separation {
                return Err(Error::SingularHit { z: y1, distance: gap / 2.0 });
            }
            let y = if (y1 - w).norm() <= (y2 - w).norm() { y1 } else { y2 };
            if y.norm() < cfg.critical_distance {
                return Err(Error::SingularHit { z: y, distance: y.norm() });
            }
            Ok(y)
        }
        _ => {
            if w.norm() < cfg.critical_distance {
                return Err(Error::SingularHit { z: w, distance: w.norm() });
            }
            m.exp_preimage(w, s)
        }
    }
}

fn pull_from_depth(m: &FamilyMember, s: i64, t: f64, depth: usize, cfg: &RayConfig) -> Result<Complex64> {
    let mut z = tail_point(m, s, t + depth as f64)?;
    for _ in 0..depth {
        z = pullback(m, s, z, cfg)?;
    }
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::NonFiniteSample { at: z });
    }
    Ok(z)
}

/// `gamma(t)` on the fixed ray of `comb`.
///
/// The seeding depth is the smallest one at which the tail is accurate, and
/// is increased until one more level moves the point by at most
/// `cfg.depth_tol`.
pub fn ray_point(m: &FamilyMember, comb: &Combinatorics, t: f64, cfg: &RayConfig) -> Result<Complex64> {
    let s = comb.fixed_branch(m.id)?;
    let mut depth = tail_depth(m, t, cfg);
    let mut z = pull_from_depth(m, s, t, depth, cfg)?;
    loop {
        if depth >= MAX_DEPTH {
            return Err(Error::NoConvergence { what: "ray seeding depth".into(), iterations: depth });
        }
        let deeper = match pull_from_depth(m, s, t, depth + 1, cfg) {
            Ok(v) => v,
            // the next tail overflows: the current one is as deep as f64 allows
            Err(Error::OverflowGuard { .. }) => return Ok(z),
            Err(e) => return Err(e),
        };
        if (deeper - z).norm() <= cfg.depth_tol * (1.0 + z.norm()) {
            return Ok(deeper);
        }
        depth += 1;
        z = deeper;
    }
}

/// Samples of the fixed ray at `t_hi, t_hi - step, ...` down to `t_lo`.
pub fn trace_ray(
    m: &FamilyMember,
    comb: &Combinatorics,
    t_hi: f64,
    t_lo: f64,
    step: f64,
    cfg: &RayConfig,
) -> Result<RayCurve> {
    if !(t_hi > t_lo) || !(step > 0.0) || !t_hi.is_finite() || !t_lo.is_finite() {
        return Err(Error::InvalidInput(format!("need t_hi > t_lo and step > 0, got {t_hi}, {t_lo}, {step}")));
    }
    comb.fixed_branch(m.id)?;
    let count = ((t_hi - t_lo) / step + POTENTIAL_MATCH).floor() as usize + 1;
    let samples = (0..count)
        .map(|k| {
            let t = t_hi - k as f64 * step;
            Ok(RaySample { t, z: ray_point(m, comb, t, cfg)? })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut curve = RayCurve { member: *m, comb: comb.clone(), samples, invariance_residual: None };
    curve.invariance_residual = invariance_residual(&curve).ok();
    Ok(curve)
}

/// Pairs `(i, j)` of sample indices with `t_j = t_i + 1`.
fn unit_pairs(samples: &[RaySample]) -> Vec<(usize, usize)> {
    let mut pairs = Vec::new();
    for (i, a) in samples.iter().enumerate() {
        if let Some(j) = samples.iter().position(|b| (b.t - a.t - 1.0).abs() <= POTENTIAL_MATCH) {
            pairs.push((i, j));
        }
    }
    pairs
}

/// `max |f(gamma(t)) - gamma(t + 1)|` over unit-separated samples.
pub fn invariance_residual(r: &RayCurve) -> Result<f64> {
    let pairs = unit_pairs(&r.samples);
    if pairs.is_empty() {
        return Err(Error::NoUnitPairs);
    }
    pairs.into_iter().try_fold(0.0_f64, |acc, (i, j)| {
        let image = r.member.eval(r.samples[i].z)?;
        Ok(acc.max((image - r.samples[j].z).norm()))
    })
}

/// The unit-spaced chain ending at the deepest sample, deepest last.
pub fn unit_chain(samples: &[RaySample]) -> Vec<RaySample> {
    let Some(deepest) = samples.iter().min_by(|a, b| a.t.total_cmp(&b.t)) else {
        return Vec::new();
    };
    let mut chain = vec![*deepest];
    while let Some(next) = samples.iter().find(|s| (s.t - chain[chain.len() - 1].t - 1.0).abs() <= POTENTIAL_MATCH) {
        chain.push(*next);
    }
    chain.reverse();
    chain
}

/// Extrapolated landing point of the ray as `t -> -inf`.
pub fn landing_estimate(r: &RayCurve) -> Result<Landing> {
    let chain = unit_chain(&r.samples);
    if chain.len() < 9 {
        return Err(Error::TooFewSamples { needed: 9, have: chain.len() });
    }
    let z: Vec<Complex64> = chain.iter().map(|s| s.z).collect();
    extrapolate(&z)
}

impl RayCurve {
    /// CSV with header `t,re,im`, potentials descending.
    pub fn to_csv(&self) -> String {
        samples_to_csv(&self.samples)
    }
}

pub fn samples_to_csv(samples: &[RaySample]) -> String {
    let mut sorted = samples.to_vec();
    sorted.sort_by(|a, b| b.t.total_cmp(&a.t));
    let mut out = String::from("t,re,im\n");
    for s in sorted {
        out.push_str(&format!("{},{},{}\n", s.t, s.z.re, s.z.im));
    }
    out
}

/// Parses the CSV written by [`RayCurve::to_csv`].
pub fn samples_from_csv(text: &str) -> Result<Vec<RaySample>> {
    let mut lines = text.lines();
    if lines.next().map(str::trim) != Some("t,re,im") {
        return Err(Error::InvalidInput("ray CSV must start with the header t,re,im".into()));
    }
    lines
        .filter(|l| !l.trim().is_empty())
        .enumerate()
        .map(|(k, line)| {
            let f: Vec<&str> = line.split(',').collect();
            let num = |s: &str| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::InvalidInput(format!("ray CSV line {}: bad number '{s}'", k + 2)))
            };
            if f.len() != 3 {
                return Err(Error::InvalidInput(format!("ray CSV line {} needs 3 fields", k + 2)));
            }
            Ok(RaySample { t: num(f[0])?, z: Complex64::new(num(f[1])?, num(f[2])?) })
        })
        .collect()
}
