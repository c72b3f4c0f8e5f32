mod common;

use std::f64::consts::PI;

use common::c;
use num_complex::Complex64;
use petal::config::Tolerances;
use petal::family::{FamilyId, FamilyMember};
use petal::fatou::douady::gate_samples;
use petal::fatou::models::Mobius;
use petal::fatou::phase::prepare_phase;
use petal::fatou::{horn_normalize, phase_b, AbelChart, FatouChart, Side};

const ABEL_TOL: f64 = 1e-7;

fn normalized(l: Complex64) -> FamilyMember {
    FamilyMember::new(FamilyId::normalized(1).unwrap(), l).unwrap()
}

fn grid() -> Vec<Complex64> {
    let mut out = Vec::new();
    for r in [0.02, 0.05, 0.1] {
        for th in [PI / 6.0, PI / 4.0, PI / 3.0] {
            out.push(Complex64::from_polar(r, th));
        }
    }
    out
}

#[test]
fn parabolic_charts_certify_on_fifty_samples() {
    let cfg = Tolerances::default().fatou;
    for id in [FamilyId::normalized(1).unwrap(), FamilyId::QuadraticC, FamilyId::ExponentialLambda] {
        for side in [Side::Incoming, Side::Outgoing] {
            let mut chart = FatouChart::for_member(&FamilyMember::base(id), side, &cfg).unwrap();
            let pts = chart.petal_samples(50);
            let r = chart.certify(&pts, ABEL_TOL).unwrap();
            assert!(r <= ABEL_TOL, "{id} {side:?}: {r:e}");
            assert_eq!(chart.report().samples.len(), 50);
        }
    }
}

#[test]
fn douady_charts_certify_on_fifty_gate_samples() {
    let tol = Tolerances::default();
    for l in [c(0.02, 0.03), c(0.05, 0.05), c(0.06, 0.04)] {
        let mut setup = prepare_phase(&normalized(l), &tol).unwrap();
        let pts = gate_samples(&setup.pair, 50);
        assert!(setup.plus.certify(&pts, ABEL_TOL).unwrap() <= ABEL_TOL);
        assert!(setup.minus.certify(&pts, ABEL_TOL).unwrap() <= ABEL_TOL);
    }
}

#[test]
fn mobius_charts_are_exact() {
    let cfg = Tolerances::default().fatou;
    let inc = FatouChart::new(Mobius, c(0.0, 0.0), c(1.0, 0.0), Side::Incoming, &cfg).unwrap();
    let out = FatouChart::new(Mobius, c(0.0, 0.0), c(1.0, 0.0), Side::Outgoing, &cfg).unwrap();
    for w in [c(-0.5, 0.0), c(-0.2, 0.1), c(-0.05, -0.02), c(-0.3, -0.25)] {
        let exact = -1.0 / w;
        assert!((inc.eval(w).unwrap() - exact).norm() <= 1e-10, "incoming at {w}");
        assert!((out.eval(-w).unwrap() + exact).norm() <= 1e-10, "outgoing at {}", -w);
    }
}

#[test]
fn chart_difference_is_constant_across_the_gate() {
    let tol = Tolerances::default();
    for l in grid() {
        let setup = prepare_phase(&normalized(l), &tol).unwrap();
        let d = setup.differences(&setup.gate(20)).unwrap();
        let spread = d.iter().map(|x| (x - d[0]).norm()).fold(0.0, f64::max);
        assert!(spread <= 1e-6, "lambda {l}: spread {spread:e}");
    }
}

#[test]
fn multiplier_identity_holds_for_small_lambda() {
    let tol = Tolerances::default();
    for l in grid().into_iter().filter(|l| l.norm() <= 0.05 + 1e-12) {
        let b = phase_b(&normalized(l), &tol).unwrap();
        assert!(b.value.re < 0.0);
        let err = (b.mu_check - (1.0 + 2.0 * l)).norm();
        assert!(err <= 1e-3, "lambda {l}: {err:e}");
    }
}

/// The multiplier error is quadratic in lambda with a constant near 0.103,
/// which takes it past 1e-3 once |lambda| reaches 0.1.
#[test]
fn multiplier_error_scales_quadratically() {
    let tol = Tolerances::default();
    for l in grid() {
        let b = phase_b(&normalized(l), &tol).unwrap();
        let ratio = (b.mu_check - (1.0 + 2.0 * l)).norm() / l.norm_sqr();
        assert!((0.09..0.12).contains(&ratio), "lambda {l}: ratio {ratio}");
    }
}

#[test]
fn outgoing_douady_chart_converges_to_fatou_chart() {
    let tol = Tolerances::default();
    let cfg = &tol.fatou;
    let base = FamilyMember::base(FamilyId::normalized(1).unwrap());
    let mut inc = FatouChart::for_member(&base, Side::Incoming, cfg).unwrap();
    let mut out = FatouChart::for_member(&base, Side::Outgoing, cfg).unwrap();
    let (z0, alpha) = (inc.fixed_point(), inc.alpha());
    horn_normalize(&mut inc, &mut out, z0, alpha, base.singular_value(), cfg).unwrap();
    let z = c(0.3, 0.0);
    let target = out.eval(z).unwrap();
    let mut last = f64::INFINITY;
    for k in 0..=14 {
        let l = Complex64::from_polar(0.1 * 0.5f64.powi(k), PI / 4.0);
        let setup = prepare_phase(&normalized(l), &tol).unwrap();
        let err = (setup.minus.eval(z).unwrap() - target).norm();
        assert!(err < last, "k = {k}: {err:e} did not shrink");
        last = err;
    }
    assert!(last <= 1e-4, "final error {last:e}");
}

#[test]
fn phase_is_injective_on_a_sector_grid() {
    let tol = Tolerances::default();
    let n: usize = 15;
    let mut pts = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let r = 0.005 + 0.035 * i as f64 / (n - 1) as f64;
            let th = PI / 12.0 + (PI / 3.0) * j as f64 / (n - 1) as f64;
            let b = phase_b(&normalized(Complex64::from_polar(r, th)), &tol).unwrap().value;
            pts.push((i, j, b));
        }
    }
    for (a, &(i1, j1, b1)) in pts.iter().enumerate() {
        for &(i2, j2, b2) in &pts[a + 1..] {
            let adjacent = i1.abs_diff(i2) <= 1 && j1.abs_diff(j2) <= 1;
            assert!(adjacent || (b1 - b2).norm() >= 1e-6, "B({i1},{j1}) = B({i2},{j2})");
        }
    }
}

#[test]
fn real_part_of_phase_is_negative() {
    let tol = Tolerances::default();
    for l in [c(0.01, 0.01), c(0.0, 0.05), c(0.08, 0.02)] {
        assert!(phase_b(&normalized(l), &tol).unwrap().value.re < 0.0);
    }
}
