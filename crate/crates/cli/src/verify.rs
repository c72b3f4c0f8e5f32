use std::f64::consts::PI;
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use petal::family::{FamilyId, FamilyMember};
use petal::fatou::phase_b;
use petal::param_ray::{self, defect, ParamSample};
use petal::rays::{self, invariance_residual, ray_point, Combinatorics, RayCurve, RaySample};
use petal::{Error, Result};

use crate::commands::Outcome;
use crate::config::RunConfig;
use crate::output::{to_json, write_atomic};

/// Allowed `|exp(-2 pi i / B) - (1 + 2 lambda)|` on the multiplier grid.
pub const MULTIPLIER_TOL: f64 = 1e-3;
/// A replayed ray sample must be reproduced to this relative accuracy.
pub const REPLAY_TOL: f64 = 1e-9;

#[derive(Debug, Serialize)]
pub struct GridPoint {
    pub r: f64,
    pub theta: f64,
    pub lambda: Complex64,
    pub b: Option<Complex64>,
    pub error: Option<f64>,
    pub failure: Option<String>,
    pub pass: bool,
}

/// `lambda = r e^{i theta}` for the radii and angles of the multiplier suite.
pub fn multiplier_grid() -> Vec<(f64, f64)> {
    let mut grid = Vec::new();
    for r in [0.02, 0.05, 0.1] {
        for theta in [PI / 6.0, PI / 4.0, PI / 3.0] {
            grid.push((r, theta));
        }
    }
    grid
}

pub fn multiplier_point(r: f64, theta: f64, rc: &RunConfig) -> GridPoint {
    let lambda = Complex64::from_polar(r, theta);
    let result =
        FamilyMember::new(FamilyId::NormalizedParabolic { n: 1 }, lambda).and_then(|m| phase_b(&m, &rc.tolerances));
    match result {
        Ok(p) => {
            let error = (p.mu_check - (1.0 + 2.0 * lambda)).norm();
            GridPoint {
                r,
                theta,
                lambda,
                b: Some(p.value),
                error: Some(error),
                failure: None,
                pass: error <= MULTIPLIER_TOL && p.value.re < 0.0,
            }
        }
        Err(e) => GridPoint { r, theta, lambda, b: None, error: None, failure: Some(e.to_string()), pass: false },
    }
}

pub fn suite_multiplier_phase(rc: &RunConfig) -> Result<Outcome> {
    let points: Vec<GridPoint> = multiplier_grid().into_iter().map(|(r, th)| multiplier_point(r, th, rc)).collect();
    let mut out = Outcome::default();
    for p in points.iter().filter(|p| !p.pass) {
        out.violations.push(match (&p.failure, p.error) {
            (Some(f), _) => format!("lambda = {}: {f}", p.lambda),
            (None, Some(e)) => format!("lambda = {}: multiplier error {e:e} (limit {MULTIPLIER_TOL:e})", p.lambda),
            (None, None) => format!("lambda = {}: no result", p.lambda),
        });
    }
    write_atomic(&rc.output_dir, "verify_multiplier_phase.json", &to_json(&points))?;
    Ok(out)
}

#[derive(Deserialize)]
struct RaySidecar {
    member: FamilyMember,
    comb: Combinatorics,
}

#[derive(Deserialize)]
struct ParamSidecar {
    ray: ParamSidecarRay,
}

#[derive(Deserialize)]
struct ParamSidecarRay {
    family: FamilyId,
    comb: Combinatorics,
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))
}

fn sidecar<T: for<'de> Deserialize<'de>>(csv: &Path) -> Result<T> {
    let json = csv.with_extension("json");
    serde_json::from_str(&read(&json)?).map_err(|e| Error::InvalidInput(format!("sidecar {}: {e}", json.display())))
}

/// Re-parses an emitted CSV and rechecks the invariants of its module.
pub fn replay(path: &Path, rc: &RunConfig) -> Result<Outcome> {
    let text = read(path)?;
    let header = text.lines().next().unwrap_or("").trim();
    match header {
        "t,re,im" => {
            let samples = rays::samples_from_csv(&text)?;
            let car: RaySidecar = sidecar(path)?;
            Ok(check_ray(car.member, &car.comb, samples, rc))
        }
        "t,a_re,a_im,residual,method" => {
            let samples = param_ray::samples_from_csv(&text)?;
            let car: ParamSidecar = sidecar(path)?;
            Ok(check_param_ray(car.ray.family, &car.ray.comb, &samples, rc))
        }
        other => Err(Error::InvalidInput(format!("unrecognized CSV header '{other}'"))),
    }
}

fn strictly_decreasing(ts: impl Iterator<Item = f64>) -> bool {
    let ts: Vec<f64> = ts.collect();
    ts.windows(2).all(|w| w[1] < w[0])
}

pub fn check_ray(member: FamilyMember, comb: &Combinatorics, samples: Vec<RaySample>, rc: &RunConfig) -> Outcome {
    let mut out = Outcome::default();
    out.check(!samples.is_empty(), || "ray CSV has no samples".into());
    out.check(strictly_decreasing(samples.iter().map(|s| s.t)), || "ray potentials are not strictly decreasing".into());
    let member = member.with_overflow_guard(rc.tolerances.family.overflow_re);
    for s in &samples {
        match ray_point(&member, comb, s.t, &rc.tolerances.rays) {
            Ok(z) => {
                let gap = (z - s.z).norm();
                out.check(gap <= REPLAY_TOL * (1.0 + s.z.norm()), || {
                    format!("ray sample at t = {} is {gap:e} from the recomputed point", s.t)
                });
            }
            Err(e) => out.violations.push(format!("ray sample at t = {}: {e}", s.t)),
        }
    }
    let curve = RayCurve { member, comb: comb.clone(), samples, invariance_residual: None };
    match invariance_residual(&curve) {
        Ok(r) => {
            let limit = rc.tolerances.rays.invariance_tol;
            out.check(r <= limit, || format!("ray invariance residual {r:e} (limit {limit:e})"));
        }
        Err(Error::NoUnitPairs) => {}
        Err(e) => out.violations.push(format!("ray invariance: {e}")),
    }
    out
}

fn cross(a: Complex64, b: Complex64) -> f64 {
    a.re * b.im - a.im * b.re
}

/// Closed segments `[p1, p2]` and `[q1, q2]` share a point.
fn segments_meet(p1: Complex64, p2: Complex64, q1: Complex64, q2: Complex64) -> bool {
    let d1 = cross(q2 - q1, p1 - q1);
    let d2 = cross(q2 - q1, p2 - q1);
    let d3 = cross(p2 - p1, q1 - p1);
    let d4 = cross(p2 - p1, q2 - p1);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0)) {
        return true;
    }
    let on = |a: Complex64, b: Complex64, c: Complex64, d: f64| {
        d == 0.0 && c.re >= a.re.min(b.re) && c.re <= a.re.max(b.re) && c.im >= a.im.min(b.im) && c.im <= a.im.max(b.im)
    };
    on(q1, q2, p1, d1) || on(q1, q2, p2, d2) || on(p1, p2, q1, d3) || on(p1, p2, q2, d4)
}

/// The polyline through `a` has no self-intersection other than shared
/// endpoints of consecutive segments.
pub fn is_simple(a: &[Complex64]) -> bool {
    if a.windows(2).any(|w| w[0] == w[1]) {
        return false;
    }
    let n = a.len();
    for i in 0..n.saturating_sub(1) {
        for j in i + 2..n - 1 {
            if segments_meet(a[i], a[i + 1], a[j], a[j + 1]) {
                return false;
            }
        }
    }
    true
}

pub fn check_param_ray(family: FamilyId, comb: &Combinatorics, samples: &[ParamSample], rc: &RunConfig) -> Outcome {
    const TAIL: usize = 10;
    let mut out = Outcome::default();
    let limit = rc.tolerances.param_ray.defect_tol;
    out.check(!samples.is_empty(), || "parameter-ray CSV has no samples".into());
    out.check(strictly_decreasing(samples.iter().map(|s| s.t)), || {
        "parameter-ray potentials are not strictly decreasing".into()
    });
    for s in samples {
        out.check(s.residual <= limit, || format!("recorded residual {:e} at t = {}", s.residual, s.t));
        match defect(family, comb, s.a, s.t, &rc.tolerances) {
            Ok(d) => out.check(d.norm() <= limit, || format!("recomputed defect {:e} at t = {}", d.norm(), s.t)),
            Err(e) => out.violations.push(format!("defect at t = {}: {e}", s.t)),
        }
    }
    let a: Vec<Complex64> = samples.iter().map(|s| s.a).collect();
    out.check(is_simple(&a), || "parameter curve is not simple".into());
    if samples.len() >= TAIL {
        let a0 = family.base_parameter();
        let d: Vec<f64> = a[a.len() - TAIL..].iter().map(|x| (x - a0).norm()).collect();
        out.check(d.windows(2).all(|w| w[1] <= w[0]), || {
            "distance to the parabolic parameter is not monotone over the last ten samples".into()
        });
    }
    out
}
