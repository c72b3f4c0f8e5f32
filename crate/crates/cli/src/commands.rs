use num_complex::Complex64;
use serde::Serialize;

use petal::contour::sum_fixed_points;
use petal::family::{FamilyId, FamilyMember};
use petal::fatou::phase::{pair_disk, prepare_phase};
use petal::fatou::{horn_normalize, phase_b, ChartReport, FatouChart, HornFit, PhaseB, Side};
use petal::fixed_points::{find_pair, FixedPair};
use petal::param_ray::{landing_report, trace_parameter_ray, LandingReport, ParameterRay};
use petal::rays::{landing_estimate, trace_ray, Combinatorics, Landing, RayCurve};
use petal::Result;

use crate::config::RunConfig;
use crate::output::{curve_svg, to_json, write_atomic};

/// Tolerance on the fixed-point sum against its closed form.
pub const SIGMA_TOL: f64 = 1e-10;
/// Spread of `phi_minus - phi_plus` over the gate.
pub const CONSTANCY_TOL: f64 = 1e-6;
pub const GATE_SAMPLES: usize = 20;
pub const PETAL_SAMPLES: usize = 50;

/// What a command found, beyond module errors.
#[derive(Debug, Default)]
pub struct Outcome {
    pub violations: Vec<String>,
}

impl Outcome {
    pub fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.violations.push(what());
        }
    }
}

#[derive(Serialize)]
struct FixedPointsArtifact {
    family: FamilyId,
    param: Complex64,
    pair: FixedPair,
    sigma: Complex64,
    sigma_expected: Option<Complex64>,
    sigma_error: Option<f64>,
}

fn expected_sigma(m: &FamilyMember) -> Option<Complex64> {
    match m.id {
        FamilyId::NormalizedParabolic { n } => Some(-2.0 * m.a.powu(n)),
        FamilyId::QuadraticC => Some(Complex64::new(1.0, 0.0)),
        FamilyId::ExponentialLambda => None,
    }
}

pub fn fixed_points(rc: &RunConfig) -> Result<Outcome> {
    let m = rc.member()?;
    let disk = pair_disk(&m)?;
    let pair = find_pair(&m, &disk, false, &rc.tolerances)?;
    let sigma = sum_fixed_points(&m, &disk, &rc.tolerances.contour)?;
    let sigma_expected = expected_sigma(&m);
    let sigma_error = sigma_expected.map(|e| (sigma - e).norm());
    let mut out = Outcome::default();
    if let Some(err) = sigma_error {
        out.check(err <= SIGMA_TOL, || format!("fixed-point sum off by {err:e} (limit {SIGMA_TOL:e})"));
    }
    let art = FixedPointsArtifact { family: m.id, param: m.a, pair, sigma, sigma_expected, sigma_error };
    write_atomic(&rc.output_dir, "fixed_points.json", &to_json(&art))?;
    Ok(out)
}

#[derive(Serialize)]
struct FatouArtifact {
    family: FamilyId,
    param: Complex64,
    charts: Vec<ChartReport>,
    horn: HornFit,
    /// Largest `|phi_minus - phi_plus - mean|` over the gate, perturbed members only.
    gate_spread: Option<f64>,
}

pub fn fatou(rc: &RunConfig) -> Result<Outcome> {
    let m = rc.member()?;
    let cfg = &rc.tolerances.fatou;
    let mut out = Outcome::default();
    let art = if m.a == m.id.base_parameter() {
        let mut inc = FatouChart::for_member(&m, Side::Incoming, cfg)?;
        let mut outg = FatouChart::for_member(&m, Side::Outgoing, cfg)?;
        let pts = inc.petal_samples(PETAL_SAMPLES);
        inc.certify(&pts, cfg.abel_tol)?;
        let pts = outg.petal_samples(PETAL_SAMPLES);
        outg.certify(&pts, cfg.abel_tol)?;
        let (z0, alpha) = (inc.fixed_point(), inc.alpha());
        let horn = horn_normalize(&mut inc, &mut outg, z0, alpha, m.singular_value(), cfg)?;
        FatouArtifact { family: m.id, param: m.a, charts: vec![inc.report(), outg.report()], horn, gate_spread: None }
    } else {
        let mut setup = prepare_phase(&m, &rc.tolerances)?;
        let gate = setup.gate(GATE_SAMPLES);
        setup.plus.certify(&gate, cfg.abel_tol)?;
        setup.minus.certify(&gate, cfg.abel_tol)?;
        let diffs = setup.differences(&gate)?;
        let mean = diffs.iter().sum::<Complex64>() / diffs.len() as f64;
        let spread = diffs.iter().map(|d| (d - mean).norm()).fold(0.0, f64::max);
        out.check(spread <= CONSTANCY_TOL, || {
            format!("phi_minus - phi_plus varies by {spread:e} over the gate (limit {CONSTANCY_TOL:e})")
        });
        FatouArtifact {
            family: m.id,
            param: m.a,
            charts: vec![setup.plus.report(), setup.minus.report()],
            horn: setup.horn.clone(),
            gate_spread: Some(spread),
        }
    };
    for c in &art.charts {
        out.check(c.residual <= cfg.abel_tol, || format!("{:?} chart residual {:e}", c.side, c.residual));
    }
    write_atomic(&rc.output_dir, "fatou.json", &to_json(&art))?;
    Ok(out)
}

#[derive(Serialize)]
struct PhaseArtifact {
    family: FamilyId,
    param: Complex64,
    phase: PhaseB,
    multiplier_error: f64,
}

pub fn phase(rc: &RunConfig) -> Result<Outcome> {
    let m = rc.member()?;
    let phase = phase_b(&m, &rc.tolerances)?;
    let err = phase.multiplier_error();
    let mut out = Outcome::default();
    let limit = rc.tolerances.fatou.mu_tolerance;
    out.check(err <= limit, || format!("multiplier check off by {err:e} (limit {limit:e})"));
    let art = PhaseArtifact { family: m.id, param: m.a, phase, multiplier_error: err };
    write_atomic(&rc.output_dir, "phase_b.json", &to_json(&art))?;
    Ok(out)
}

#[derive(Serialize)]
struct RayArtifact<'a> {
    member: FamilyMember,
    comb: &'a Combinatorics,
    t_start: f64,
    t_end: f64,
    step: f64,
    samples: usize,
    invariance_residual: Option<f64>,
    landing: Option<Landing>,
}

pub fn ray(rc: &RunConfig) -> Result<Outcome> {
    let m = rc.member()?;
    let comb = rc.comb()?;
    let (hi, lo, step) = rc.range()?;
    let curve: RayCurve = trace_ray(&m, comb, hi, lo, step, &rc.tolerances.rays)?;
    let mut out = Outcome::default();
    let limit = rc.tolerances.rays.invariance_tol;
    if let Some(r) = curve.invariance_residual {
        out.check(r <= limit, || format!("ray invariance residual {r:e} (limit {limit:e})"));
    }
    let art = RayArtifact {
        member: m,
        comb,
        t_start: hi,
        t_end: lo,
        step,
        samples: curve.samples.len(),
        invariance_residual: curve.invariance_residual,
        landing: landing_estimate(&curve).ok(),
    };
    let pts: Vec<(f64, Complex64)> = curve.samples.iter().map(|s| (s.t, s.z)).collect();
    write_atomic(&rc.output_dir, "ray.csv", &curve.to_csv())?;
    write_atomic(&rc.output_dir, "ray.json", &to_json(&art))?;
    write_atomic(&rc.output_dir, "ray.svg", &curve_svg(&pts, &format!("ray {comb} of {}", m.id)))?;
    Ok(out)
}

#[derive(Serialize)]
struct ParamRayArtifact<'a> {
    ray: &'a ParameterRay,
    landing_report: Option<LandingReport>,
    max_residual: f64,
}

pub fn param_ray(rc: &RunConfig) -> Result<Outcome> {
    let comb = rc.comb()?;
    let (hi, lo, step) = rc.range()?;
    let pr = trace_parameter_ray(rc.family, comb, hi, lo, step, &rc.tolerances)?;
    let mut out = Outcome::default();
    let limit = rc.tolerances.param_ray.defect_tol;
    let max_residual = pr.samples.iter().map(|s| s.residual).fold(0.0, f64::max);
    out.check(max_residual <= limit, || format!("defect residual {max_residual:e} (limit {limit:e})"));
    let report = landing_report(&pr, rc.family.base_parameter()).ok();
    let art = ParamRayArtifact { ray: &pr, landing_report: report, max_residual };
    let pts: Vec<(f64, Complex64)> = pr.samples.iter().map(|s| (s.t, s.a)).collect();
    write_atomic(&rc.output_dir, "param_ray.csv", &pr.to_csv())?;
    write_atomic(&rc.output_dir, "param_ray.json", &to_json(&art))?;
    write_atomic(&rc.output_dir, "param_ray.svg", &curve_svg(&pts, &format!("parameter ray {comb} of {}", rc.family)))?;
    Ok(out)
}
