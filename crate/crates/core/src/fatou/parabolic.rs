//! Incoming and outgoing Fatou coordinates at a parabolic fixed point.
//!
//! An orbit is followed (forward for the incoming side, along the local
//! inverse branch for the outgoing side) until `Z = -1/w` is large and inside
//! the petal, where the truncated asymptotic series is evaluated and the
//! number of steps is subtracted or added back.

use num_complex::Complex64;

use super::series::AbelSeries;
use super::{abel_defects, max_defect, AbelChart, ChartReport, ChartSample, Side};
use crate::config::FatouConfig;
use crate::family::{FamilyMember, HoloMap};
use crate::fixed_points::{normalize_to_parabolic_form, FixedPair};
use crate::{Error, Result};

/// Orbits leaving this normalized radius are treated as escaping.
const ESCAPE: f64 = 1e6;

#[derive(Debug, Clone)]
pub struct FatouChart<M: HoloMap> {
    map: M,
    z0: Complex64,
    alpha: Complex64,
    side: Side,
    series: AbelSeries,
    pub offset: Complex64,
    pub petal_scale: f64,
    pub series_radius: f64,
    pub max_iterations: usize,
    pub residual: f64,
    pub samples: Vec<ChartSample>,
}

impl<M: HoloMap> FatouChart<M> {
    /// Chart at the parabolic point `z0` of `map`, in the normalized
    /// coordinate `w = alpha (z - z0)` where the germ reads `w + w^2 + ...`.
    pub fn new(map: M, z0: Complex64, alpha: Complex64, side: Side, cfg: &FatouConfig) -> Result<Self> {
        let t = map.taylor(z0, cfg.series_order + 3)?;
        let mut g: Vec<Complex64> = t.iter().enumerate().map(|(k, &c)| c * alpha.powi(1 - k as i32)).collect();
        g[0] = alpha * (t[0] - z0);
        let series = AbelSeries::from_germ(&g, cfg.series_order)?;
        Ok(Self {
            map,
            z0,
            alpha,
            side,
            series,
            offset: Complex64::new(0.0, 0.0),
            petal_scale: cfg.petal_scale,
            series_radius: cfg.series_radius,
            max_iterations: cfg.max_iterations,
            residual: 0.0,
            samples: Vec::new(),
        })
    }

    pub fn a_star(&self) -> Complex64 {
        self.series.a_star
    }

    pub fn fixed_point(&self) -> Complex64 {
        self.z0
    }

    pub fn alpha(&self) -> Complex64 {
        self.alpha
    }

    pub fn map(&self) -> &M {
        &self.map
    }

    pub fn normalized(&self, z: Complex64) -> Complex64 {
        self.alpha * (z - self.z0)
    }

    pub fn denormalized(&self, w: Complex64) -> Complex64 {
        self.z0 + w / self.alpha
    }

    /// Petal test in the coordinate `Z = -1/w`.
    pub fn in_petal(&self, big: Complex64) -> bool {
        match self.side {
            Side::Incoming => big.re > self.petal_scale - big.im.abs(),
            Side::Outgoing => big.re < -self.petal_scale + big.im.abs(),
        }
    }

    fn ready(&self, big: Complex64) -> bool {
        big.norm() >= self.series_radius && self.in_petal(big)
    }

    fn eval_incoming(&self, start: Complex64) -> Result<Complex64> {
        let mut z = start;
        for n in 0..=self.max_iterations {
            let w = self.normalized(z);
            if !(w.norm() < ESCAPE) || w.norm() == 0.0 {
                return Err(Error::NotInPetal { z: start });
            }
            let big = -1.0 / w;
            if self.ready(big) {
                return Ok(self.series.eval(big, big.ln()) - n as f64 + self.offset);
            }
            z = match self.map.eval(z) {
                Ok(v) => v,
                Err(Error::OverflowGuard { .. }) => return Err(Error::NotInPetal { z: start }),
                Err(e) => return Err(e),
            };
        }
        Err(Error::NoConvergence {
            what: "incoming orbit did not reach the petal".into(),
            iterations: self.max_iterations,
        })
    }

    fn eval_outgoing(&self, start: Complex64) -> Result<Complex64> {
        let mut z = start;
        for n in 0..=self.max_iterations {
            let w = self.normalized(z);
            if !(w.norm() < ESCAPE) || w.norm() == 0.0 {
                return Err(Error::NotInPetal { z: start });
            }
            let big = -1.0 / w;
            if self.ready(big) {
                return Ok(self.series.eval(big, (-big).ln()) + n as f64 + self.offset);
            }
            let seed_w = w - w * w;
            let prev = self.map.branch_preimage(z, self.z0)?;
            let w_prev = self.normalized(prev);
            if w.norm() < 0.05 && (w_prev - seed_w).norm() > w.norm_sqr() {
                return Err(Error::BranchLoss(format!("inverse branch left the petal at {z}")));
            }
            z = prev;
        }
        Err(Error::NoConvergence {
            what: "outgoing orbit did not reach the petal".into(),
            iterations: self.max_iterations,
        })
    }

    /// Abel certification at `points`; the petal scale doubles (up to three
    /// times) while the residual exceeds `abel_tol`.
    pub fn certify(&mut self, points: &[Complex64], abel_tol: f64) -> Result<f64> {
        let mut residual = f64::INFINITY;
        for _ in 0..4 {
            let samples = abel_defects(&self.map, &*self, points)?;
            residual = max_defect(&samples);
            self.samples = samples;
            self.residual = residual;
            if residual <= abel_tol {
                return Ok(residual);
            }
            self.petal_scale *= 2.0;
            self.series_radius *= 2.0;
        }
        Err(Error::NoConvergence { what: format!("Abel residual {residual:e} above {abel_tol:e}"), iterations: 4 })
    }

    /// `count` points of the petal on a small arc around the petal axis.
    pub fn petal_samples(&self, count: usize) -> Vec<Complex64> {
        let dir = match self.side {
            Side::Incoming => -1.0,
            Side::Outgoing => 1.0,
        };
        (0..count)
            .map(|k| {
                let s = k as f64 / (count.max(2) - 1) as f64;
                let r = 0.02 + 0.13 * ((7 * k) % count) as f64 / count as f64;
                let th = (s - 0.5) * 2.0 * std::f64::consts::FRAC_PI_3;
                self.denormalized(Complex64::from_polar(r, th) * dir)
            })
            .collect()
    }

    pub fn report(&self) -> ChartReport {
        ChartReport {
            side: self.side,
            a_star: Some(self.series.a_star),
            offset: self.offset,
            residual: self.residual,
            petal_scale: self.petal_scale,
            samples: self.samples.clone(),
        }
    }
}

impl FatouChart<FamilyMember> {
    /// Chart for the parabolic base member of a family.
    pub fn for_member(m: &FamilyMember, side: Side, cfg: &FatouConfig) -> Result<Self> {
        let z0 = m.id.base_fixed_point();
        let mu = m.deriv(z0)?;
        if (mu - 1.0).norm() > 1e-12 || (m.eval(z0)? - z0).norm() > 1e-12 {
            return Err(Error::NotNormalized { c1: mu, c2: Complex64::new(f64::NAN, f64::NAN) });
        }
        let one = Complex64::new(1.0, 0.0);
        let pair = FixedPair { z1: z0, z2: z0, mu1: one, mu2: one, disk: None };
        let affine = normalize_to_parabolic_form(m, &pair)?;
        Self::new(*m, z0, affine.alpha, side, cfg)
    }
}

impl<M: HoloMap> AbelChart for FatouChart<M> {
    fn eval(&self, z: Complex64) -> Result<Complex64> {
        match self.side {
            Side::Incoming => self.eval_incoming(z),
            Side::Outgoing => self.eval_outgoing(z),
        }
    }

    fn side(&self) -> Side {
        self.side
    }

    fn offset(&self) -> Complex64 {
        self.offset
    }

    fn set_offset(&mut self, offset: Complex64) {
        self.offset = offset;
    }
}

/// Incoming chart evaluation with a fresh chart built from `cfg`.
pub fn incoming_fatou<M: HoloMap>(
    map: M,
    z0: Complex64,
    alpha: Complex64,
    z: Complex64,
    cfg: &FatouConfig,
) -> Result<Complex64> {
    FatouChart::new(map, z0, alpha, Side::Incoming, cfg)?.eval(z)
}

/// Outgoing chart evaluation with a fresh chart built from `cfg`.
pub fn outgoing_fatou<M: HoloMap>(
    map: M,
    z0: Complex64,
    alpha: Complex64,
    z: Complex64,
    cfg: &FatouConfig,
) -> Result<Complex64> {
    FatouChart::new(map, z0, alpha, Side::Outgoing, cfg)?.eval(z)
}
