use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LandingModel {
    /// `x_k - L ~ C q^k`.
    Geometric,
    /// `x_k - L ~ C (m + k)^-p` with `m` and `p` fitted.
    Algebraic,
}

/// Extrapolated limit of a unit-spaced sequence.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Landing {
    pub point: Complex64,
    /// Discrepancy between the two deepest extrapolants of the chosen model.
    pub uncertainty: f64,
    pub model: LandingModel,
}

fn aitken(x: &[Complex64]) -> Vec<Complex64> {
    x.windows(3)
        .map(|w| {
            let (d0, d1) = (w[1] - w[0], w[2] - w[1]);
            w[2] - d1 * d1 / (d1 - d0)
        })
        .collect()
}

/// Power-law extrapolants from four consecutive terms: the ratios of
/// successive differences give the offset `m` and order `p`, then the tail
/// sum of an exact power law is added to the last term.
fn algebraic(x: &[Complex64]) -> Vec<Complex64> {
    x.windows(4)
        .map(|w| {
            let d: Vec<Complex64> = w.windows(2).map(|p| p[1] - p[0]).collect();
            let l0 = (d[1] / d[0]).ln();
            let l1 = (d[2] / d[1]).ln();
            // ln(d_{k+1}/d_k) ~ -(p+1)/(m_k + 1) with m_k the index of w[k]
            // measured from the power-law origin
            let m1 = 1.0 / (l0 / l1 - 1.0);
            let p = -l0 * m1 - 1.0;
            let m = m1 + 1.0;
            let tail = d[2] / (1.0 - ((m + 1.0) / m).powc(p));
            w[3] - tail
        })
        .collect()
}

fn settle(ext: &[Complex64]) -> Option<(Complex64, f64)> {
    let n = ext.len();
    if n < 2 {
        return None;
    }
    let (last, prev) = (ext[n - 1], ext[n - 2]);
    let gap = (last - prev).norm();
    (gap.is_finite() && last.re.is_finite() && last.im.is_finite()).then_some((last, gap))
}

/// Limit of `x` (deepest term last), fitting both models and keeping the one
/// whose two deepest extrapolants agree best.
pub fn extrapolate(x: &[Complex64]) -> Result<Landing> {
    if x.len() < 5 {
        return Err(Error::TooFewSamples { needed: 5, have: x.len() });
    }
    let first = (x[1] - x[0]).norm();
    let last = (x[x.len() - 1] - x[x.len() - 2]).norm();
    if first == 0.0 && last == 0.0 {
        return Ok(Landing { point: x[x.len() - 1], uncertainty: 0.0, model: LandingModel::Geometric });
    }
    if !(last < first) {
        return Err(Error::Diverging(format!("last step {last:e} does not shrink below first step {first:e}")));
    }
    let geo = settle(&aitken(x)).map(|(p, u)| Landing { point: p, uncertainty: u, model: LandingModel::Geometric });
    let alg = settle(&algebraic(x)).map(|(p, u)| Landing { point: p, uncertainty: u, model: LandingModel::Algebraic });
    match (geo, alg) {
        (Some(g), Some(a)) => Ok(if a.uncertainty < g.uncertainty { a } else { g }),
        (Some(one), None) | (None, Some(one)) => Ok(one),
        (None, None) => Err(Error::Diverging("no extrapolant is finite".into())),
    }
}
