//! The phase `B(a) = phi_minus(s(a)) - phi_plus(s(a))` and the multiplier
//! identity `mu1 = exp(-2 pi i / B)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::douady::{gate_samples, DouadyChart};
use super::horn::{horn_normalize, HornFit};
use super::AbelChart;
use crate::config::Tolerances;
use crate::contour::Circle;
use crate::family::{FamilyMember, HoloMap};
use crate::fixed_points::{find_pair, normalize_to_parabolic_form, FixedPair};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseB {
    pub value: Complex64,
    pub mu_check: Complex64,
    pub mu_direct: Complex64,
    pub horn_residual: f64,
}

impl PhaseB {
    pub fn multiplier_error(&self) -> f64 {
        (self.mu_check - self.mu_direct).norm()
    }
}

/// Everything built on the way to `B`, kept for diagnostics.
#[derive(Debug, Clone)]
pub struct PhaseSetup {
    pub pair: FixedPair,
    pub alpha: Complex64,
    pub plus: DouadyChart<FamilyMember>,
    pub minus: DouadyChart<FamilyMember>,
    pub horn: HornFit,
}

impl PhaseSetup {
    /// `phi_minus - phi_plus` at each point.
    pub fn differences(&self, points: &[Complex64]) -> Result<Vec<Complex64>> {
        points.iter().map(|&z| Ok(self.minus.eval(z)? - self.plus.eval(z)?)).collect()
    }

    pub fn gate(&self, count: usize) -> Vec<Complex64> {
        gate_samples(&self.pair, count)
    }
}

/// The disk used to isolate the bifurcating pair of `m`.
pub fn pair_disk(m: &FamilyMember) -> Result<Circle> {
    Circle::new(m.id.base_fixed_point(), 0.5, 256)
}

/// The bifurcating pair, searched on disks of radius 0.5, 1 and 2 around
/// the base fixed point.
fn locate_pair(m: &FamilyMember, tol: &Tolerances) -> Result<FixedPair> {
    let mut disk = pair_disk(m)?;
    let mut last = None;
    for _ in 0..3 {
        match find_pair(m, &disk, true, tol) {
            Ok(pair) => return Ok(pair),
            Err(e @ Error::WrongZeroCount { found: 0 | 1, .. }) => last = Some(e),
            Err(e) => return Err(e),
        }
        disk = Circle::new(disk.center, 2.0 * disk.radius, disk.nodes)?;
    }
    Err(last.expect("at least one disk was tried"))
}

/// Builds and horn-normalizes both Douady-Fatou charts of `m`.
pub fn prepare_phase(m: &FamilyMember, tol: &Tolerances) -> Result<PhaseSetup> {
    let cfg = &tol.fatou;
    let pair = locate_pair(m, tol)?;
    if (pair.mu1.norm() - 1.0).abs() <= cfg.indifferent_band {
        return Err(Error::IndifferentMultiplier { mu: pair.mu1 });
    }
    let log_mu = pair.mu1.ln();
    if pair.mu1.norm() < 1.0 || log_mu.im <= 0.0 {
        return Err(Error::SectorViolation(format!("mu1 = {} must be repelling with Im Log mu1 > 0", pair.mu1)));
    }
    let alpha = normalize_to_parabolic_form(m, &pair)?.alpha;
    let mut minus = DouadyChart::outgoing(*m, &pair, alpha, cfg)?;
    let mut plus = DouadyChart::incoming(*m, &pair, alpha, cfg)?;
    let horn = horn_normalize(&mut plus, &mut minus, pair.z1, alpha, m.singular_value(), cfg)?;
    Ok(PhaseSetup { pair, alpha, plus, minus, horn })
}

/// `B(a)` under the horn normalization, with the multiplier check.
pub fn phase_b(m: &FamilyMember, tol: &Tolerances) -> Result<PhaseB> {
    let setup = prepare_phase(m, tol)?;
    let s = m.singular_value();
    let value = setup.minus.eval(s)? - setup.plus.eval(s)?;
    if value.re >= 1e-12 * value.norm() {
        return Err(Error::SectorViolation(format!("Re B = {} is not negative", value.re)));
    }
    let mu_check = (Complex64::new(0.0, -2.0 * PI) / value).exp();
    let mu_direct = m.deriv(setup.pair.z1)?;
    Ok(PhaseB { value, mu_check, mu_direct, horn_residual: setup.horn.residual })
}
