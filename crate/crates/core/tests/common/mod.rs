#![allow(dead_code)]

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use petal::config::Tolerances;
use petal::family::{FamilyId, FamilyMember};
use petal::rays::{boettcher_potential, exponential_potential};
use petal::Error;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// A monic polynomial with known roots.
#[derive(Debug, Clone)]
pub struct RootedPoly {
    pub roots: Vec<Complex64>,
}

impl RootedPoly {
    pub fn eval(&self, w: Complex64) -> Complex64 {
        self.roots.iter().fold(c(1.0, 0.0), |acc, r| acc * (w - r))
    }

    pub fn deriv(&self, w: Complex64) -> Complex64 {
        let p = self.eval(w);
        p * self.roots.iter().map(|r| 1.0 / (w - r)).sum::<Complex64>()
    }
}

/// Polynomials of degree 3..=8 with roots in the disk of radius 2, none
/// within `margin` of the unit circle.
pub fn random_polynomials(count: usize, seed: u64, margin: f64) -> Vec<RootedPoly> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let degree = rng.gen_range(3..=8);
            let roots = (0..degree)
                .map(|_| loop {
                    let r: f64 = rng.gen_range(0.0..2.0);
                    let th: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
                    if (r - 1.0).abs() > margin {
                        break Complex64::from_polar(r, th);
                    }
                })
                .collect();
            RootedPoly { roots }
        })
        .collect()
}

/// Potential of the real critical value on the angle-0 ray, as
/// `1 + log2 G_c(c)`; `None` when the critical orbit stays bounded.
fn quadratic_critical_potential(cr: f64, tol: &Tolerances) -> Option<f64> {
    let m = FamilyMember::new(FamilyId::QuadraticC, c(cr, 0.0)).ok()?;
    match boettcher_potential(&m, c(cr, 0.0), &tol.rays) {
        Ok(g) => Some(1.0 + g.log2()),
        Err(Error::NonEscaping { .. }) => None,
        Err(e) => panic!("oracle potential at c = {cr}: {e}"),
    }
}

fn exponential_singular_potential(l: f64, tol: &Tolerances) -> Option<f64> {
    let m = FamilyMember::new(FamilyId::ExponentialLambda, c(l, 0.0)).ok()?;
    match exponential_potential(&m, c(0.0, 0.0), 0, &tol.rays) {
        Ok(t) => Some(t),
        Err(Error::NonEscaping { .. }) => None,
        Err(e) => panic!("oracle potential at lambda = {l}: {e}"),
    }
}

/// Real parameter whose singular value sits at potential `t` on the fixed
/// ray, by plain bisection on the escape potential of the singular value.
pub fn bisection_oracle(family: FamilyId, t: f64, tol: &Tolerances) -> f64 {
    let (mut lo, mut hi) = match family {
        FamilyId::QuadraticC => (0.25, 8.0),
        FamilyId::ExponentialLambda => (std::f64::consts::E.recip(), 64.0),
        _ => panic!("no real oracle for {family}"),
    };
    let potential = |x: f64| match family {
        FamilyId::QuadraticC => quadratic_critical_potential(x, tol),
        _ => exponential_singular_potential(x, tol),
    };
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        match potential(mid) {
            Some(p) if p > t => hi = mid,
            _ => lo = mid,
        }
        if hi - lo <= 1e-15 * hi {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Closed segments `[p1, p2]` and `[q1, q2]` cross or touch.
fn segments_meet(p1: Complex64, p2: Complex64, q1: Complex64, q2: Complex64) -> bool {
    let cross = |a: Complex64, b: Complex64| a.re * b.im - a.im * b.re;
    let d1 = cross(q2 - q1, p1 - q1);
    let d2 = cross(q2 - q1, p2 - q1);
    let d3 = cross(p2 - p1, q1 - p1);
    let d4 = cross(p2 - p1, q2 - p1);
    let strict = |a: f64, b: f64| (a > 0.0 && b < 0.0) || (a < 0.0 && b > 0.0);
    if strict(d1, d2) && strict(d3, d4) {
        return true;
    }
    let within = |a: Complex64, b: Complex64, p: Complex64| {
        p.re >= a.re.min(b.re) && p.re <= a.re.max(b.re) && p.im >= a.im.min(b.im) && p.im <= a.im.max(b.im)
    };
    (d1 == 0.0 && within(q1, q2, p1))
        || (d2 == 0.0 && within(q1, q2, p2))
        || (d3 == 0.0 && within(p1, p2, q1))
        || (d4 == 0.0 && within(p1, p2, q2))
}

pub fn polyline_is_simple(a: &[Complex64]) -> bool {
    if a.windows(2).any(|w| w[0] == w[1]) {
        return false;
    }
    let n = a.len();
    (0..n.saturating_sub(1))
        .all(|i| (i + 2..n.saturating_sub(1)).all(|j| !segments_meet(a[i], a[i + 1], a[j], a[j + 1])))
}
