//! Argument-principle numerics on circles.
//!
//! All integrals are normalized by `1/(2 pi i)` and evaluated with the
//! trapezoid rule on equispaced nodes, which converges geometrically for
//! integrands analytic in an annulus around the circle. The adaptive entry
//! points double the node count until two successive values agree.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::config::ContourConfig;
use crate::family::HoloMap;
use crate::{Error, Result};

/// Below this node count evaluations stay on the calling thread.
const PARALLEL_THRESHOLD: usize = 256;

/// A positively oriented circle sampled at `nodes` equispaced points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Circle {
    pub center: Complex64,
    pub radius: f64,
    pub nodes: usize,
}

impl Circle {
    pub fn new(center: Complex64, radius: f64, nodes: usize) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidInput(format!("circle radius must be positive, got {radius}")));
        }
        if nodes < 16 || !nodes.is_power_of_two() {
            return Err(Error::InvalidInput(format!("circle nodes must be a power of two >= 16, got {nodes}")));
        }
        Ok(Self { center, radius, nodes })
    }

    /// Node `k` of a discretization with `n` nodes.
    fn point(&self, k: usize, n: usize) -> Complex64 {
        self.center + Complex64::from_polar(self.radius, 2.0 * PI * k as f64 / n as f64)
    }

    pub fn points(&self) -> impl Iterator<Item = Complex64> + '_ {
        (0..self.nodes).map(move |k| self.point(k, self.nodes))
    }

    pub fn contains(&self, z: Complex64) -> bool {
        (z - self.center).norm() < self.radius
    }

    pub fn with_nodes(&self, nodes: usize) -> Result<Self> {
        Self::new(self.center, self.radius, nodes)
    }
}

/// How the derivative of a function is obtained on the contour.
#[derive(Clone, Copy)]
pub enum Derivative<'a> {
    Analytic(&'a (dyn Fn(Complex64) -> Result<Complex64> + Sync)),
    /// Central differences with step `radius * fd_step_ratio`.
    CentralDifference,
}

/// Evaluates `g(w) (w - center)` at nodes `k = offset, offset + stride, ...`
/// of an `n`-node discretization and returns the plain sum.
fn partial_sum<G>(g: &G, c: &Circle, n: usize, offset: usize, stride: usize) -> Result<Complex64>
where
    G: Fn(Complex64) -> Result<Complex64> + Sync,
{
    let idx: Vec<usize> = (offset..n).step_by(stride).collect();
    let eval = |k: &usize| -> Result<Complex64> {
        let w = c.point(*k, n);
        let v = g(w)?;
        if !(v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::NonFiniteSample { at: w });
        }
        Ok(v * (w - c.center))
    };
    let values: Vec<Complex64> = if idx.len() >= PARALLEL_THRESHOLD {
        idx.par_iter().map(eval).collect::<Result<_>>()?
    } else {
        idx.iter().map(eval).collect::<Result<_>>()?
    };
    // fixed summation order keeps results independent of the thread count
    Ok(values.into_iter().fold(Complex64::new(0.0, 0.0), |acc, v| acc + v))
}

/// `(1/2 pi i) \oint_C g(w) dw` with exactly `c.nodes` trapezoid nodes.
pub fn integrate_circle<G>(g: G, c: &Circle) -> Result<Complex64>
where
    G: Fn(Complex64) -> Result<Complex64> + Sync,
{
    Ok(partial_sum(&g, c, c.nodes, 0, 1)? / c.nodes as f64)
}

/// Result of an adaptive contour integral.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: Complex64,
    pub nodes: usize,
    /// |I_N - I_{N/2}| at the last doubling.
    pub change: f64,
    pub converged: bool,
}

/// Trapezoid integral with node doubling from `c.nodes` up to the configured
/// cap. Previously computed nodes are reused at each doubling.
pub fn integrate_adaptive<G>(g: G, c: &Circle, cfg: &ContourConfig) -> Result<Quadrature>
where
    G: Fn(Complex64) -> Result<Complex64> + Sync,
{
    let mut n = c.nodes;
    let mut sum = partial_sum(&g, c, n, 0, 1)?;
    let mut value = sum / n as f64;
    let mut change = f64::INFINITY;
    while n < cfg.max_nodes.max(c.nodes) {
        let m = 2 * n;
        sum += partial_sum(&g, c, m, 1, 2)?;
        let next = sum / m as f64;
        change = (next - value).norm();
        value = next;
        n = m;
        if change < cfg.convergence_tol {
            return Ok(Quadrature { value, nodes: n, change, converged: true });
        }
    }
    Ok(Quadrature { value, nodes: n, change, converged: change < cfg.convergence_tol })
}

fn central_difference<F>(f: &F, w: Complex64, h: f64) -> Result<Complex64>
where
    F: Fn(Complex64) -> Result<Complex64> + Sync,
{
    let hx = Complex64::new(h, 0.0);
    let hy = Complex64::new(0.0, h);
    // average of the two axis directions halves the rounding error
    let dx = (f(w + hx)? - f(w - hx)?) / (2.0 * h);
    let dy = (f(w + hy)? - f(w - hy)?) / Complex64::new(0.0, 2.0 * h);
    Ok((dx + dy) / 2.0)
}

/// Builds `w^power f'(w)/f(w)` with the floor check on |f|.
fn log_derivative<'a, F>(
    f: &'a F,
    fprime: Derivative<'a>,
    c: &Circle,
    cfg: &'a ContourConfig,
    power: i32,
) -> impl Fn(Complex64) -> Result<Complex64> + Sync + 'a
where
    F: Fn(Complex64) -> Result<Complex64> + Sync,
{
    let h = c.radius * cfg.fd_step_ratio;
    move |w| {
        let fw = f(w)?;
        if !(fw.re.is_finite() && fw.im.is_finite()) {
            return Err(Error::NonFiniteSample { at: w });
        }
        if fw.norm() < cfg.zero_floor {
            return Err(Error::ZeroOnContour { at: w, modulus: fw.norm() });
        }
        let d = match fprime {
            Derivative::Analytic(df) => df(w)?,
            Derivative::CentralDifference => central_difference(f, w, h)?,
        };
        Ok(w.powi(power) * d / fw)
    }
}

/// The raw winding integral `(1/2 pi i) \oint f'/f` before rounding.
pub fn winding_integral<F>(f: &F, fprime: Derivative<'_>, c: &Circle, cfg: &ContourConfig) -> Result<Complex64>
where
    F: Fn(Complex64) -> Result<Complex64> + Sync,
{
    Ok(integrate_adaptive(log_derivative(f, fprime, c, cfg, 0), c, cfg)?.value)
}

/// Number of zeros (with multiplicity) of `f` inside `c`.
pub fn count_zeros<F>(f: &F, fprime: Derivative<'_>, c: &Circle, cfg: &ContourConfig) -> Result<i64>
where
    F: Fn(Complex64) -> Result<Complex64> + Sync,
{
    let value = winding_integral(f, fprime, c, cfg)?;
    let rounded = value.re.round();
    let residual = Complex64::new(value.re - rounded, value.im).norm();
    if residual > cfg.winding_tolerance {
        return Err(Error::NonIntegerWinding { value: value.re, residual });
    }
    Ok(rounded as i64)
}

/// The unique zero of `f` inside `c`, as `(1/2 pi i) \oint w f'(w)/f(w) dw`.
pub fn locate_single_zero<F>(f: &F, fprime: Derivative<'_>, c: &Circle, cfg: &ContourConfig) -> Result<Complex64>
where
    F: Fn(Complex64) -> Result<Complex64> + Sync,
{
    let count = count_zeros(f, fprime, c, cfg)?;
    if count != 1 {
        return Err(Error::WrongZeroCount { expected: 1, found: count });
    }
    Ok(integrate_adaptive(log_derivative(f, fprime, c, cfg, 1), c, cfg)?.value)
}

/// `(1/2 pi i) \oint w^k (f'(w) - 1)/(f(w) - w) dw`: the k-th power sum of
/// the fixed points of `m` inside `c`, counted with multiplicity.
pub fn fixed_point_power_sum<M: HoloMap>(m: &M, c: &Circle, k: i32, cfg: &ContourConfig) -> Result<Complex64> {
    let g = |w: Complex64| -> Result<Complex64> {
        let d = m.eval(w)? - w;
        if d.norm() < cfg.zero_floor {
            return Err(Error::ZeroOnContour { at: w, modulus: d.norm() });
        }
        Ok(w.powi(k) * (m.deriv(w)? - 1.0) / d)
    };
    Ok(integrate_adaptive(g, c, cfg)?.value)
}

/// Sum of the fixed points of `m` inside `c`.
pub fn sum_fixed_points<M: HoloMap>(m: &M, c: &Circle, cfg: &ContourConfig) -> Result<Complex64> {
    fixed_point_power_sum(m, c, 1, cfg)
}

/// Number of fixed points of `m` inside `c`.
pub fn count_fixed_points<M: HoloMap>(m: &M, c: &Circle, cfg: &ContourConfig) -> Result<i64> {
    let value = fixed_point_power_sum(m, c, 0, cfg)?;
    let rounded = value.re.round();
    let residual = Complex64::new(value.re - rounded, value.im).norm();
    if residual > cfg.winding_tolerance {
        return Err(Error::NonIntegerWinding { value: value.re, residual });
    }
    Ok(rounded as i64)
}

/// Sampled Rouche condition: `max |f - g| < min |g|` over the nodes.
pub fn rouche_check<F, G>(f: F, g: G, c: &Circle) -> bool
where
    F: Fn(Complex64) -> Result<Complex64>,
    G: Fn(Complex64) -> Result<Complex64>,
{
    let mut max_diff = 0.0_f64;
    let mut min_g = f64::INFINITY;
    for w in c.points() {
        let (fw, gw) = match (f(w), g(w)) {
            (Ok(a), Ok(b)) => (a, b),
            _ => return false,
        };
        let d = (fw - gw).norm();
        if !d.is_finite() || !gw.norm().is_finite() {
            return false;
        }
        max_diff = max_diff.max(d);
        min_g = min_g.min(gw.norm());
    }
    max_diff < min_g
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::{FamilyId, FamilyMember};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn cfg() -> ContourConfig {
        ContourConfig::default()
    }

    #[test]
    fn circle_validation() {
        assert!(Circle::new(c(0.0, 0.0), 0.0, 64).is_err());
        assert!(Circle::new(c(0.0, 0.0), 1.0, 8).is_err());
        assert!(Circle::new(c(0.0, 0.0), 1.0, 100).is_err());
        assert!(Circle::new(c(0.0, 0.0), 1.0, 16).is_ok());
    }

    #[test]
    fn integrate_examples() {
        let unit64 = Circle::new(c(0.0, 0.0), 1.0, 64).unwrap();
        let v = integrate_circle(|w| Ok(1.0 / w), &unit64).unwrap();
        assert!((v - 1.0).norm() < 1e-14);
        let v = integrate_circle(|_| Ok(c(1.0, 0.0)), &unit64).unwrap();
        assert!(v.norm() < 1e-14);
        let unit128 = Circle::new(c(0.0, 0.0), 1.0, 128).unwrap();
        let v = integrate_circle(|w| Ok(1.0 / (w - 0.3)), &unit128).unwrap();
        assert!((v - 1.0).norm() < 1e-14);
    }

    #[test]
    fn non_finite_sample_is_reported() {
        let unit = Circle::new(c(0.0, 0.0), 1.0, 16).unwrap();
        let err = integrate_circle(|_| Ok(c(f64::NAN, 0.0)), &unit).unwrap_err();
        assert!(matches!(err, Error::NonFiniteSample { .. }));
    }

    #[test]
    fn count_examples() {
        let unit = Circle::new(c(0.0, 0.0), 1.0, 256).unwrap();
        let sq = |z: Complex64| Ok(z * z);
        let dsq = |z: Complex64| Ok(2.0 * z);
        assert_eq!(count_zeros(&sq, Derivative::Analytic(&dsq), &unit, &cfg()).unwrap(), 2);
        let lin = |z: Complex64| Ok(z - 2.0);
        assert_eq!(count_zeros(&lin, Derivative::CentralDifference, &unit, &cfg()).unwrap(), 0);
        let two = |z: Complex64| Ok((z - 0.3) * (z - c(0.0, 0.7)));
        assert_eq!(count_zeros(&two, Derivative::CentralDifference, &unit, &cfg()).unwrap(), 2);
    }

    #[test]
    fn zero_on_contour() {
        let unit = Circle::new(c(0.0, 0.0), 1.0, 64).unwrap();
        let f = |z: Complex64| Ok(z - 1.0);
        let err = count_zeros(&f, Derivative::CentralDifference, &unit, &cfg()).unwrap_err();
        assert!(matches!(err, Error::ZeroOnContour { .. }));
    }

    #[test]
    fn coarse_grid_near_contour_zero_is_not_rounded() {
        // zero at distance 1e-3 outside; 16 nodes cannot resolve it
        let unit = Circle::new(c(0.0, 0.0), 1.0, 16).unwrap();
        let f = |z: Complex64| Ok(z - 1.001);
        let tight = ContourConfig { max_nodes: 16, ..cfg() };
        let err = count_zeros(&f, Derivative::CentralDifference, &unit, &tight).unwrap_err();
        assert!(matches!(err, Error::NonIntegerWinding { .. }));
    }

    #[test]
    fn locate_examples() {
        let unit = Circle::new(c(0.0, 0.0), 1.0, 256).unwrap();
        let root = c(0.3, 0.1);
        let f = move |z: Complex64| Ok(z - root);
        let z = locate_single_zero(&f, Derivative::CentralDifference, &unit, &cfg()).unwrap();
        assert!((z - root).norm() < 1e-10);

        let g = |z: Complex64| Ok(z.exp() - 1.0);
        let dg = |z: Complex64| Ok(z.exp());
        let z = locate_single_zero(&g, Derivative::Analytic(&dg), &unit, &cfg()).unwrap();
        assert!(z.norm() < 1e-10);

        // fixed point -2 lambda of the normalized family, z (z + 2 lambda) = 0
        let m = FamilyMember::new(FamilyId::normalized(1).unwrap(), c(0.0, 0.05)).unwrap();
        let h = |z: Complex64| Ok(m.eval(z)? - z);
        let dh = |z: Complex64| Ok(m.deriv(z)? - 1.0);
        let small = Circle::new(c(0.0, -0.1), 0.05, 256).unwrap();
        let z = locate_single_zero(&h, Derivative::Analytic(&dh), &small, &cfg()).unwrap();
        assert!((z - c(0.0, -0.1)).norm() < 1e-8);
    }

    #[test]
    fn locate_requires_exactly_one_zero() {
        let unit = Circle::new(c(0.0, 0.0), 1.0, 64).unwrap();
        let f = |z: Complex64| Ok(z * z - 0.25);
        let err = locate_single_zero(&f, Derivative::CentralDifference, &unit, &cfg()).unwrap_err();
        assert_eq!(err, Error::WrongZeroCount { expected: 1, found: 2 });
    }

    #[test]
    fn fixed_point_sums() {
        let norm = |l: f64| FamilyMember::new(FamilyId::normalized(1).unwrap(), c(l, 0.0)).unwrap();
        let disk = Circle::new(c(0.0, 0.0), 0.5, 256).unwrap();
        let s = sum_fixed_points(&norm(0.1), &disk, &cfg()).unwrap();
        assert!((s - (-0.2)).norm() < 1e-10);
        let s = sum_fixed_points(&norm(0.0), &disk, &cfg()).unwrap();
        assert!(s.norm() < 1e-10);
        let q = FamilyMember::new(FamilyId::QuadraticC, c(0.2, 0.0)).unwrap();
        let s = sum_fixed_points(&q, &Circle::new(c(0.5, 0.0), 0.6, 256).unwrap(), &cfg()).unwrap();
        assert!((s - 1.0).norm() < 1e-10);
        assert_eq!(count_fixed_points(&q, &Circle::new(c(0.5, 0.0), 0.6, 256).unwrap(), &cfg()).unwrap(), 2);
    }

    #[test]
    fn rouche_examples() {
        let unit = Circle::new(c(0.0, 0.0), 1.0, 64).unwrap();
        assert!(rouche_check(|z| Ok(z + 0.01), Ok, &unit));
        assert!(!rouche_check(|z| Ok(z + 2.0), Ok, &unit));
        assert!(!rouche_check(|_| Ok(c(f64::NAN, 0.0)), Ok, &unit));
    }

    #[test]
    fn adaptive_reuses_nodes_consistently() {
        let circle = Circle::new(c(0.1, 0.0), 0.7, 16).unwrap();
        let g = |w: Complex64| Ok(1.0 / (w - 0.5) + w.exp());
        let q = integrate_adaptive(g, &circle, &cfg()).unwrap();
        assert!(q.converged);
        let direct = integrate_circle(g, &circle.with_nodes(q.nodes).unwrap()).unwrap();
        assert!((q.value - direct).norm() < 1e-13);
        assert!((q.value - 1.0).norm() < 1e-10);
    }
}
