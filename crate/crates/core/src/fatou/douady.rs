//! Douady-Fatou coordinates `phi = log kappa / Log mu + offset` for a
//! member with two nearby fixed points.

use num_complex::Complex64;

use super::koenigs::LinearizerChart;
use super::{abel_defects, max_defect, AbelChart, ChartReport, ChartSample, Side};
use crate::config::FatouConfig;
use crate::family::HoloMap;
use crate::fixed_points::FixedPair;
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct DouadyChart<M: HoloMap> {
    lin: LinearizerChart<M>,
    /// Direction of the branch cut of `log (z - fp)`, as a unit vector.
    pub cut: Complex64,
    log_mu: Complex64,
    side: Side,
    pub offset: Complex64,
    pub residual: f64,
    pub samples: Vec<ChartSample>,
}

impl<M: HoloMap> DouadyChart<M> {
    pub fn new(lin: LinearizerChart<M>, cut: Complex64, side: Side, cfg: &FatouConfig) -> Result<Self> {
        let log_mu = lin.multiplier.ln();
        if log_mu.norm() < cfg.log_mu_floor {
            return Err(Error::IndifferentMultiplier { mu: lin.multiplier });
        }
        Ok(Self {
            lin,
            cut: cut / cut.norm(),
            log_mu,
            side,
            offset: Complex64::new(0.0, 0.0),
            residual: 0.0,
            samples: Vec::new(),
        })
    }

    /// Chart from the repelling point `z1`, cut along the attracting
    /// direction `-1` of the normalized coordinate `w = alpha (z - z1)`.
    pub fn outgoing(map: M, pair: &FixedPair, alpha: Complex64, cfg: &FatouConfig) -> Result<Self> {
        if pair.mu1.norm() <= 1.0 {
            return Err(Error::SectorViolation(format!("z1 = {} is not repelling (mu1 = {})", pair.z1, pair.mu1)));
        }
        let gap = (pair.z1 - pair.z2).norm();
        let lin = LinearizerChart::new(map, pair.z1, pair.mu1, cfg)?.with_radius(cfg.koenigs_radius_ratio * gap);
        Self::new(lin, -1.0 / alpha, Side::Outgoing, cfg)
    }

    /// Chart from the attracting point `z2` (cut pointing away from `z1`);
    /// when `z2` repels too, the linearizer at `z1` with the cut along `+1`.
    pub fn incoming(map: M, pair: &FixedPair, alpha: Complex64, cfg: &FatouConfig) -> Result<Self> {
        let gap = (pair.z1 - pair.z2).norm();
        if pair.mu2.norm() < 1.0 {
            let lin = LinearizerChart::new(map, pair.z2, pair.mu2, cfg)?.with_radius(cfg.koenigs_radius_ratio * gap);
            Self::new(lin, pair.z2 - pair.z1, Side::Incoming, cfg)
        } else {
            let lin = LinearizerChart::new(map, pair.z1, pair.mu1, cfg)?.with_radius(cfg.koenigs_radius_ratio * gap);
            Self::new(lin, 1.0 / alpha, Side::Incoming, cfg)
        }
    }

    pub fn linearizer(&self) -> &LinearizerChart<M> {
        &self.lin
    }

    pub fn log_multiplier(&self) -> Complex64 {
        self.log_mu
    }

    pub fn certify(&mut self, points: &[Complex64], abel_tol: f64) -> Result<f64> {
        let samples = abel_defects(self.lin.map(), &*self, points)?;
        self.residual = max_defect(&samples);
        self.samples = samples;
        if self.residual > abel_tol {
            return Err(Error::NoConvergence {
                what: format!("Abel residual {:e} above {abel_tol:e}", self.residual),
                iterations: 0,
            });
        }
        Ok(self.residual)
    }

    pub fn report(&self) -> ChartReport {
        ChartReport {
            side: self.side,
            a_star: None,
            offset: self.offset,
            residual: self.residual,
            petal_scale: self.lin.domain_radius,
            samples: self.samples.clone(),
        }
    }
}

impl<M: HoloMap> AbelChart for DouadyChart<M> {
    fn eval(&self, z: Complex64) -> Result<Complex64> {
        Ok(self.lin.log_kappa(z, self.cut)? / self.log_mu + self.offset)
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

/// `count` points in the gate: the middle of the segment `[z1, z2]`
/// with small offsets across it.
pub fn gate_samples(pair: &FixedPair, count: usize) -> Vec<Complex64> {
    let d = pair.z2 - pair.z1;
    let normal = d * Complex64::new(0.0, 1.0);
    (0..count)
        .map(|k| {
            let s = (k as f64 + 0.5) / count as f64;
            let along = 0.3 + 0.4 * s;
            let across = 0.1 * ((k * 7 % count) as f64 / count as f64 - 0.5);
            pair.z1 + d * along + normal * across
        })
        .collect()
}
