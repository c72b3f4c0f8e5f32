//! Fitting the lifted horn map at the upper end of the cylinder.
//!
//! Points are placed near the outgoing fixed point in the directions
//! `e^{i theta} / alpha` with `theta` in `[pi/3, 2 pi/3]`. Heights are read
//! off the leading term `-1/w` of the outgoing coordinate, so a height in
//! `[h, 2h]` means a normalized radius `|w|` in `[1/(2h), 1/h]`; this keeps the
//! placement independent of the additive constants being fitted. There
//! `H(zeta) = phi_plus(psi_minus(zeta))` is compared with `zeta + c`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::AbelChart;
use crate::config::FatouConfig;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HornFit {
    /// Mean of `phi_plus - phi_minus` over the samples, before the shift.
    pub constant: Complex64,
    /// Largest deviation of a sample from `constant`.
    pub residual: f64,
    /// `|c(h) - c(2h)|`.
    pub consistency: f64,
    pub height: f64,
    pub points: Vec<Complex64>,
    pub offset_plus: Complex64,
    pub offset_minus: Complex64,
}

/// Fits `phi_plus - phi_minus` on `count` points at heights in `[h, 2h]`.
pub fn horn_fit<P: AbelChart, Q: AbelChart>(
    plus: &P,
    minus: &Q,
    center: Complex64,
    alpha: Complex64,
    height: f64,
    count: usize,
) -> Result<(Complex64, f64, Vec<Complex64>)> {
    let count = count.max(2);
    let mut diffs = Vec::with_capacity(count);
    let mut points = Vec::with_capacity(count);
    for j in 0..count {
        let s = j as f64 / (count - 1) as f64;
        let theta = PI / 3.0 + s * PI / 3.0;
        let target = height * (1.0 + (j * 5 % count) as f64 / count as f64);
        let w = Complex64::from_polar(1.0 / target, theta);
        let z = center + w / alpha;
        let miss = |_| Error::HornDomainMiss { w };
        let pm = minus.eval(z).map_err(miss)?;
        let pp = plus.eval(z).map_err(miss)?;
        diffs.push(pp - pm);
        points.push(z);
    }
    let mean = diffs.iter().sum::<Complex64>() / count as f64;
    let residual = diffs.iter().map(|d| (d - mean).norm()).fold(0.0, f64::max);
    Ok((mean, residual, points))
}

/// Shifts the offsets so that the horn map is `zeta + o(1)` at the upper end
/// and `phi_plus(anchor) = 0`.
type PairFit = (Complex64, f64, f64, f64, Vec<Complex64>);

fn fit_pair<P: AbelChart, Q: AbelChart>(
    plus: &P,
    minus: &Q,
    center: Complex64,
    alpha: Complex64,
    h: f64,
    cfg: &FatouConfig,
) -> Result<PairFit> {
    let (c1, residual, points) = horn_fit(plus, minus, center, alpha, h, cfg.horn_samples)?;
    let (c2, _, _) = horn_fit(plus, minus, center, alpha, 2.0 * h, cfg.horn_samples)?;
    let consistency = (c1 - c2).norm();
    if consistency > cfg.horn_consistency {
        return Err(Error::NoConvergence {
            what: format!("horn constant moves by {consistency:e} between heights {h} and {}", 2.0 * h),
            iterations: 0,
        });
    }
    Ok((c1, residual, consistency, h, points))
}

pub fn horn_normalize<P: AbelChart, Q: AbelChart>(
    plus: &mut P,
    minus: &mut Q,
    center: Complex64,
    alpha: Complex64,
    anchor: Complex64,
    cfg: &FatouConfig,
) -> Result<HornFit> {
    let mut last = None;
    let mut fitted = None;
    for h in [cfg.horn_height, 0.5 * cfg.horn_height] {
        match fit_pair(plus, minus, center, alpha, h, cfg) {
            Ok(fit) => {
                fitted = Some(fit);
                break;
            }
            Err(e @ (Error::NoConvergence { .. } | Error::HornDomainMiss { .. })) => last = Some(e),
            Err(e) => return Err(e),
        }
    }
    let Some((c1, residual, consistency, h, points)) = fitted else {
        return Err(last.expect("at least one height was tried"));
    };
    plus.set_offset(plus.offset() - c1);
    let at_anchor = plus.eval(anchor)?;
    plus.set_offset(plus.offset() - at_anchor);
    minus.set_offset(minus.offset() - at_anchor);
    Ok(HornFit {
        constant: c1,
        residual,
        consistency,
        height: h,
        points,
        offset_plus: plus.offset(),
        offset_minus: minus.offset(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fatou::models::{Mobius, Polynomial};
    use crate::fatou::{FatouChart, Side};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn mobius_horn_map_is_identity() {
        let cfg = FatouConfig::default();
        let one = c(1.0, 0.0);
        let mut plus = FatouChart::new(Mobius, c(0.0, 0.0), one, Side::Incoming, &cfg).unwrap();
        let mut minus = FatouChart::new(Mobius, c(0.0, 0.0), one, Side::Outgoing, &cfg).unwrap();
        let fit = horn_normalize(&mut plus, &mut minus, c(0.0, 0.0), one, c(-0.5, 0.0), &cfg).unwrap();
        assert!(fit.constant.norm() < 1e-10);
        assert!(fit.residual < 1e-10);
        assert!((fit.offset_plus - fit.offset_minus).norm() < 1e-10);
    }

    #[test]
    fn quadratic_germ_horn_fit() {
        let cfg = FatouConfig::default();
        let one = c(1.0, 0.0);
        let g = Polynomial::new(&[0.0, 1.0, 1.0]);
        let mut plus = FatouChart::new(g.clone(), c(0.0, 0.0), one, Side::Incoming, &cfg).unwrap();
        let mut minus = FatouChart::new(g, c(0.0, 0.0), one, Side::Outgoing, &cfg).unwrap();
        let fit = horn_normalize(&mut plus, &mut minus, c(0.0, 0.0), one, c(-0.25, 0.0), &cfg).unwrap();
        assert!(fit.constant.re.is_finite() && fit.constant.im.is_finite());
        assert!(fit.residual < 1e-5, "residual {}", fit.residual);
        // the leading logarithms differ by a* i pi in the upper half plane
        assert!((fit.constant - c(0.0, -PI)).norm() < 1e-3, "{}", fit.constant);
        assert!(plus.eval(c(-0.25, 0.0)).unwrap().norm() < 1e-12);
    }
}
