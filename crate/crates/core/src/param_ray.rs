//! Parameter rays `Gamma(t)`: parameters whose singular value sits on the
//! fixed dynamic ray at potential `t`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::Tolerances;
use crate::contour::{count_zeros, locate_single_zero, Circle, Derivative};
use crate::family::{FamilyId, FamilyMember};
use crate::fatou::phase_b;
use crate::rays::{
    exponential_potential, extrapolate, quadratic_potential, ray_point, unit_chain, Combinatorics, Landing, RaySample,
};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Newton,
    Winding,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Newton => "newton",
            Method::Winding => "winding",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Solution {
    pub a: Complex64,
    pub residual: f64,
    pub method: Method,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParamSample {
    pub t: f64,
    pub a: Complex64,
    pub residual: f64,
    pub method: Method,
    /// `Re B(a)` when the phase is computable at `a`; not part of the CSV.
    #[serde(default)]
    pub phase_re: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParameterRay {
    pub family: FamilyId,
    pub comb: Combinatorics,
    /// Potentials strictly decreasing.
    pub samples: Vec<ParamSample>,
    pub landing: Option<Landing>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LandingReport {
    pub a0: Complex64,
    /// `|Gamma(t) - a0|` in sample order.
    pub distances: Vec<f64>,
    /// Distances nonincreasing over the final ten samples.
    pub monotone: bool,
    pub limit: Complex64,
    pub uncertainty: f64,
    pub limit_error: f64,
}

/// `s(a) - gamma_a(t)`.
pub fn defect(family: FamilyId, comb: &Combinatorics, a: Complex64, t: f64, tol: &Tolerances) -> Result<Complex64> {
    let lost = |e: Error| Error::RayLost { a, t, reason: e.to_string() };
    let m = FamilyMember::new(family, a).map_err(lost)?.with_overflow_guard(tol.family.overflow_re);
    let z = ray_point(&m, comb, t, &tol.rays).map_err(lost)?;
    Ok(m.singular_value() - z)
}

fn newton(family: FamilyId, comb: &Combinatorics, t: f64, seed: Complex64, tol: &Tolerances) -> Result<Solution> {
    let cfg = &tol.param_ray;
    let f = |a| defect(family, comb, a, t, tol);
    let mut a = seed;
    let mut d = f(a)?;
    for _ in 0..cfg.newton_max_iter {
        let h = cfg.fd_step * a.norm().max(1.0);
        let slope = (f(a + h)? - f(a - h)?) / (2.0 * h);
        if slope.norm() == 0.0 || !slope.norm().is_finite() {
            break;
        }
        let step = d / slope;
        let next = a - step;
        let dn = f(next)?;
        if dn.norm() >= d.norm() && d.norm() <= cfg.defect_tol {
            break;
        }
        a = next;
        d = dn;
        if step.norm() <= 1e-15 * a.norm().max(1.0) {
            break;
        }
    }
    if d.norm() <= cfg.defect_tol {
        Ok(Solution { a, residual: d.norm(), method: Method::Newton })
    } else {
        Err(Error::NoConvergence { what: format!("Newton on the defect at t = {t}"), iterations: cfg.newton_max_iter })
    }
}

/// The parameter with `s(a) = gamma_a(t)` near `seed`: Newton first, then a
/// winding count on circles of doubling radius up to the trust radius.
pub fn solve_at_potential(
    family: FamilyId,
    comb: &Combinatorics,
    t: f64,
    seed: Complex64,
    tol: &Tolerances,
) -> Result<Solution> {
    let cfg = &tol.param_ray;
    let a0 = family.base_parameter();
    let trust = cfg.trust_factor * (seed - a0).norm() + cfg.trust_floor;
    if let Ok(sol) = newton(family, comb, t, seed, tol) {
        if (sol.a - seed).norm() <= trust {
            return Ok(sol);
        }
    }
    winding_solve(family, comb, t, seed, trust, tol)
}

/// Winding-count fallback: circles around `seed` of radius `trust / 8`,
/// doubled up to `trust`, until the defect has a zero inside; exactly one
/// zero is located by the contour integral and polished by Newton.
pub fn winding_solve(
    family: FamilyId,
    comb: &Combinatorics,
    t: f64,
    seed: Complex64,
    trust: f64,
    tol: &Tolerances,
) -> Result<Solution> {
    let f = |a: Complex64| defect(family, comb, a, t, tol);
    let mut radius = trust / 8.0;
    loop {
        let circle = Circle::new(seed, radius, 32)?;
        match count_zeros(&f, Derivative::CentralDifference, &circle, &tol.contour)? {
            0 if radius < trust => radius = (2.0 * radius).min(trust),
            0 => return Err(Error::NoZeroInTrustRegion { seed }),
            1 => {
                let rough = locate_single_zero(&f, Derivative::CentralDifference, &circle, &tol.contour)?;
                let polished = newton(family, comb, t, rough, tol)?;
                return Ok(Solution { method: Method::Winding, ..polished });
            }
            count => return Err(Error::MultipleZeros { seed, count }),
        }
    }
}

/// Potential of the singular value of the real member `a`, or `-inf` when
/// it does not escape.
fn singular_potential(family: FamilyId, s: i64, a: f64, tol: &Tolerances) -> Result<f64> {
    let m = FamilyMember::new(family, Complex64::new(a, 0.0))?;
    let z = m.singular_value();
    let p = match family {
        FamilyId::QuadraticC => quadratic_potential(&m, z, &tol.rays),
        FamilyId::ExponentialLambda => exponential_potential(&m, z, s, &tol.rays),
        FamilyId::NormalizedParabolic { .. } => {
            return Err(Error::InvalidInput("parameter rays need the quadratic or exponential family".into()))
        }
    };
    match p {
        Err(Error::NonEscaping { .. }) => Ok(f64::NEG_INFINITY),
        other => other,
    }
}

/// Real parameter `a > a0` whose singular value has potential `t`, found by
/// bisection; only the real-symmetric rays (branch 0) qualify.
pub fn real_seed(family: FamilyId, comb: &Combinatorics, t: f64, tol: &Tolerances) -> Result<Complex64> {
    let s = comb.fixed_branch(family)?;
    if s != 0 {
        return Err(Error::InvalidInput(format!("no real seed for combinatorics {comb}")));
    }
    let a0 = family.base_parameter().re;
    let g = |a: f64| singular_potential(family, s, a, tol).map(|p| p - t);
    let mut lo = a0 + 1e-12;
    let mut hi = a0 + 0.5;
    while g(hi)? < 0.0 {
        lo = hi;
        hi = a0 + 2.0 * (hi - a0);
        if hi - a0 > family.domain_radius() {
            return Err(Error::NoZeroInTrustRegion { seed: Complex64::new(hi, 0.0) });
        }
    }
    if g(lo)? >= 0.0 {
        return Err(Error::NoZeroInTrustRegion { seed: Complex64::new(lo, 0.0) });
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid)? < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Complex64::new(0.5 * (lo + hi), 0.0))
}

/// Continuation of `Gamma` from `t_start` down to `t_end`; a failing step is
/// halved until it drops below `min_step`.
pub fn trace_parameter_ray(
    family: FamilyId,
    comb: &Combinatorics,
    t_start: f64,
    t_end: f64,
    step: f64,
    tol: &Tolerances,
) -> Result<ParameterRay> {
    if !(t_start > t_end) || !(step > 0.0) {
        return Err(Error::InvalidInput(format!("need t_start > t_end and step > 0, got {t_start}, {t_end}, {step}")));
    }
    let first = solve_at_potential(family, comb, t_start, real_seed(family, comb, t_start, tol)?, tol)?;
    let sample = |t: f64, sol: Solution| ParamSample {
        t,
        a: sol.a,
        residual: sol.residual,
        method: sol.method,
        phase_re: FamilyMember::new(family, sol.a).and_then(|m| phase_b(&m, tol)).ok().map(|p| p.value.re),
    };
    let mut samples = vec![sample(t_start, first)];
    let grid = ((t_start - t_end) / step - 1e-9).ceil() as usize;
    for k in 1..=grid {
        let target = (t_start - k as f64 * step).max(t_end);
        let mut h = samples[samples.len() - 1].t - target;
        while samples[samples.len() - 1].t > target {
            let last = samples[samples.len() - 1];
            let t = (last.t - h).max(target);
            let seed = match samples.len() {
                1 => last.a,
                n => {
                    let prev = samples[n - 2];
                    last.a + (last.a - prev.a) * ((t - last.t) / (last.t - prev.t))
                }
            };
            match solve_at_potential(family, comb, t, seed, tol) {
                Ok(sol) => samples.push(sample(t, sol)),
                Err(e) => {
                    h *= 0.5;
                    if h < tol.param_ray.min_step {
                        return Err(match e {
                            Error::MultipleZeros { .. } | Error::NoZeroInTrustRegion { .. } => e,
                            _ => Error::ContinuationStalled { t: last.t, step: h },
                        });
                    }
                }
            }
        }
    }
    let landing = parameter_landing(&samples).ok();
    Ok(ParameterRay { family, comb: comb.clone(), samples, landing })
}

fn parameter_landing(samples: &[ParamSample]) -> Result<Landing> {
    let as_ray: Vec<RaySample> = samples.iter().map(|s| RaySample { t: s.t, z: s.a }).collect();
    let chain = unit_chain(&as_ray);
    let a: Vec<Complex64> = chain.iter().map(|s| s.z).collect();
    extrapolate(&a)
}

/// Distances to `a0`, approach monotonicity and the extrapolated limit.
pub fn landing_report(pr: &ParameterRay, a0: Complex64) -> Result<LandingReport> {
    const TAIL: usize = 10;
    if pr.samples.len() < TAIL {
        return Err(Error::TooFewSamples { needed: TAIL, have: pr.samples.len() });
    }
    let distances: Vec<f64> = pr.samples.iter().map(|s| (s.a - a0).norm()).collect();
    let monotone = distances[distances.len() - TAIL..].windows(2).all(|w| w[1] <= w[0]);
    let landing = match pr.landing {
        Some(l) => l,
        None => parameter_landing(&pr.samples)?,
    };
    Ok(LandingReport {
        a0,
        distances,
        monotone,
        limit: landing.point,
        uncertainty: landing.uncertainty,
        limit_error: (landing.point - a0).norm(),
    })
}

impl ParameterRay {
    /// CSV with header `t,a_re,a_im,residual,method`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,a_re,a_im,residual,method\n");
        for s in &self.samples {
            out.push_str(&format!("{},{},{},{},{}\n", s.t, s.a.re, s.a.im, s.residual, s.method.as_str()));
        }
        out
    }
}

/// Parses the CSV written by [`ParameterRay::to_csv`].
pub fn samples_from_csv(text: &str) -> Result<Vec<ParamSample>> {
    let mut lines = text.lines();
    if lines.next().map(str::trim) != Some("t,a_re,a_im,residual,method") {
        return Err(Error::InvalidInput("parameter-ray CSV must start with t,a_re,a_im,residual,method".into()));
    }
    lines
        .filter(|l| !l.trim().is_empty())
        .enumerate()
        .map(|(k, line)| {
            let bad = |what: &str| Error::InvalidInput(format!("parameter-ray CSV line {}: {what}", k + 2));
            let f: Vec<&str> = line.split(',').map(str::trim).collect();
            if f.len() != 5 {
                return Err(bad("needs 5 fields"));
            }
            let num = |s: &str| s.parse::<f64>().map_err(|_| bad(&format!("bad number '{s}'")));
            let method = match f[4] {
                "newton" => Method::Newton,
                "winding" => Method::Winding,
                other => return Err(bad(&format!("unknown method '{other}'"))),
            };
            Ok(ParamSample {
                t: num(f[0])?,
                a: Complex64::new(num(f[1])?, num(f[2])?),
                residual: num(f[3])?,
                method,
                phase_re: None,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn angle0() -> Combinatorics {
        Combinatorics::angle(0, 1).unwrap()
    }

    #[test]
    fn solution_point_has_zero_defect() {
        let tol = Tolerances::default();
        let seed = real_seed(FamilyId::QuadraticC, &angle0(), 1.0, &tol).unwrap();
        let sol = solve_at_potential(FamilyId::QuadraticC, &angle0(), 1.0, seed, &tol).unwrap();
        assert!(sol.residual <= 1e-8);
        assert!(sol.a.im.abs() <= 1e-8);
        assert!(defect(FamilyId::QuadraticC, &angle0(), sol.a, 1.0, &tol).unwrap().norm() <= 1e-8);
        let above = defect(FamilyId::QuadraticC, &angle0(), sol.a + 0.01, 1.0, &tol).unwrap();
        assert!(above.norm() > 1e-6 && above.im.abs() < 1e-12);
    }

    #[test]
    fn winding_fallback_agrees_with_newton() {
        let tol = Tolerances::default();
        let fam = FamilyId::QuadraticC;
        let newton_sol =
            solve_at_potential(fam, &angle0(), 0.5, real_seed(fam, &angle0(), 0.5, &tol).unwrap(), &tol).unwrap();
        let seed = newton_sol.a + Complex64::new(0.003, 0.002);
        let wind = winding_solve(fam, &angle0(), 0.5, seed, 0.02, &tol).unwrap();
        assert_eq!(wind.method, Method::Winding);
        assert!((wind.a - newton_sol.a).norm() <= 1e-8);
    }

    #[test]
    fn constant_ray_lands_on_itself() {
        let a0 = Complex64::new(0.25, 0.0);
        let samples = (0..12)
            .map(|k| ParamSample { t: -(k as f64), a: a0, residual: 0.0, method: Method::Newton, phase_re: None })
            .collect();
        let pr = ParameterRay { family: FamilyId::QuadraticC, comb: angle0(), samples, landing: None };
        let rep = landing_report(&pr, a0).unwrap();
        assert!(rep.monotone);
        assert_eq!(rep.limit_error, 0.0);
        assert!(rep.distances.iter().all(|&d| d == 0.0));
    }

    #[test]
    fn too_few_samples() {
        let pr = ParameterRay { family: FamilyId::QuadraticC, comb: angle0(), samples: vec![], landing: None };
        assert!(matches!(landing_report(&pr, Complex64::new(0.25, 0.0)), Err(Error::TooFewSamples { .. })));
    }
}
