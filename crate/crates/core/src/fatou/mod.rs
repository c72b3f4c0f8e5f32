//! Fatou coordinates at the parabolic parameter, Douady-Fatou coordinates
//! for perturbed members, horn-map normalization and the phase `B(a)`.

pub mod douady;
pub mod horn;
pub mod koenigs;
pub mod models;
pub mod parabolic;
pub mod phase;
pub mod series;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::family::HoloMap;
use crate::Result;

pub use douady::DouadyChart;
pub use horn::{horn_normalize, HornFit};
pub use koenigs::{koenigs, LinearizerChart};
pub use parabolic::FatouChart;
pub use phase::{phase_b, PhaseB};
pub use series::{a_star_coefficient, AbelSeries};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Incoming,
    Outgoing,
}

/// A solution of the Abel equation `phi(f(z)) = phi(z) + 1` on some domain.
pub trait AbelChart {
    fn eval(&self, z: Complex64) -> Result<Complex64>;
    fn side(&self) -> Side;
    fn offset(&self) -> Complex64;
    fn set_offset(&mut self, offset: Complex64);
}

/// One certified evaluation point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChartSample {
    pub z: Complex64,
    pub phi: Complex64,
    pub defect: f64,
}

/// JSON diagnostics of a chart.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChartReport {
    pub side: Side,
    pub a_star: Option<Complex64>,
    pub offset: Complex64,
    pub residual: f64,
    pub petal_scale: f64,
    pub samples: Vec<ChartSample>,
}

/// Abel defects `|phi(f(z)) - phi(z) - 1|` at each sample.
pub fn abel_defects<M: HoloMap + ?Sized, A: AbelChart + ?Sized>(
    map: &M,
    chart: &A,
    points: &[Complex64],
) -> Result<Vec<ChartSample>> {
    points
        .iter()
        .map(|&z| {
            let phi = chart.eval(z)?;
            let next = chart.eval(map.eval(z)?)?;
            Ok(ChartSample { z, phi, defect: (next - phi - 1.0).norm() })
        })
        .collect()
}

pub(crate) fn max_defect(samples: &[ChartSample]) -> f64 {
    samples.iter().map(|s| s.defect).fold(0.0, f64::max)
}

/// `Log v` with the branch cut along the ray `{t e_cut : t > 0}`.
pub fn log_cut(v: Complex64, e_cut: Complex64) -> Complex64 {
    let r = -e_cut / e_cut.norm();
    // adding 0.0 turns a negative zero into +0 so that ln(-1) = i pi
    let r = Complex64::new(r.re + 0.0, r.im + 0.0);
    (v / r).ln() + r.ln()
}
