//! The closed catalog of one-parameter families.
//!
//! Every member exposes its map, the analytic derivative, exact Taylor
//! coefficients at any point and its single singular value, so downstream
//! code never differentiates numerically in z.

use std::f64::consts::{E, PI};
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Default guard on Re z for the exponential family.
pub const DEFAULT_OVERFLOW_RE: f64 = 700.0;

/// A holomorphic self-map of (part of) the plane with closed-form local data.
///
/// Implemented by [`FamilyMember`] and by the model germs in
/// [`crate::fatou::models`].
pub trait HoloMap: Send + Sync {
    fn eval(&self, z: Complex64) -> Result<Complex64>;

    fn deriv(&self, z: Complex64) -> Result<Complex64>;

    /// Taylor coefficients `c_0..=c_order` of the map at `center`.
    fn taylor(&self, center: Complex64, order: usize) -> Result<Vec<Complex64>>;

    /// The preimage of `w` closest to `near`.
    ///
    /// The default runs Newton from the linearization at `near`; families
    /// with explicit inverses override it.
    fn preimage_near(&self, w: Complex64, near: Complex64) -> Result<Complex64> {
        let mut y = near;
        let d = self.deriv(near)?;
        if d.norm() > 0.0 {
            y = near + (w - self.eval(near)?) / d;
        }
        let mut best = (f64::INFINITY, y);
        for _ in 0..60 {
            let r = self.eval(y)? - w;
            if r.norm() < best.0 {
                best = (r.norm(), y);
            }
            let d = self.deriv(y)?;
            if d.norm() == 0.0 {
                return Err(Error::NoConvergence { what: "inverse branch hit a critical point".into(), iterations: 0 });
            }
            let step = r / d;
            y -= step;
            if step.norm() <= 1e-15 * (1.0 + y.norm()) {
                return Ok(y);
            }
        }
        if best.0 <= 1e-14 * (1.0 + w.norm()) {
            return Ok(best.1);
        }
        Err(Error::NoConvergence { what: "inverse branch Newton".into(), iterations: 60 })
    }

    /// The inverse branch fixing `fixed`, continued along the segment from
    /// `fixed` to `w`.
    ///
    /// Unlike [`HoloMap::preimage_near`], the result does not jump between
    /// roots that are nearly equidistant from a seed.
    fn branch_preimage(&self, w: Complex64, fixed: Complex64) -> Result<Complex64> {
        let span = w - fixed;
        if span.norm() == 0.0 {
            return Ok(fixed);
        }
        let (mut t, mut y, mut dt) = (0.0_f64, fixed, 1.0_f64);
        while t < 1.0 {
            let step = dt.min(1.0 - t);
            let d = self.deriv(y)?;
            let pred = if d.norm() > 0.0 { y + span * step / d } else { y };
            let accepted = match self.preimage_near(fixed + span * (t + step), pred) {
                Ok(next) if (next - pred).norm() <= 0.25 * (pred - y).norm() + 1e-14 * (1.0 + y.norm()) => Some(next),
                _ => None,
            };
            match accepted {
                Some(next) => {
                    y = next;
                    t += step;
                    dt = 2.0 * step;
                }
                None if 1.0 - t < 1e-6 => return self.preimage_near(w, y),
                None => {
                    dt = 0.5 * step;
                    if dt < 1e-12 {
                        return Err(Error::BranchLoss(format!("inverse branch continuation stalled towards {w}")));
                    }
                }
            }
        }
        Ok(y)
    }
}

/// Family identifiers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FamilyId {
    /// `(1 + 2 lambda^n) z + z^2`, parabolic at `lambda = 0`, `z = 0`.
    NormalizedParabolic { n: u32 },
    /// `z^2 + c`, parabolic at `c = 1/4`, `z = 1/2`.
    QuadraticC,
    /// `lambda e^z`, parabolic at `lambda = 1/e`, `z = 1`.
    ExponentialLambda,
}

impl FamilyId {
    pub fn normalized(n: u32) -> Result<Self> {
        if n != 1 {
            return Err(Error::InvalidInput(format!("normalized family only supported for n = 1, got n = {n}")));
        }
        Ok(FamilyId::NormalizedParabolic { n })
    }

    /// Parabolic base parameter.
    pub fn base_parameter(&self) -> Complex64 {
        match self {
            FamilyId::NormalizedParabolic { .. } => Complex64::new(0.0, 0.0),
            FamilyId::QuadraticC => Complex64::new(0.25, 0.0),
            FamilyId::ExponentialLambda => Complex64::new(1.0 / E, 0.0),
        }
    }

    /// Parabolic fixed point of the base member.
    pub fn base_fixed_point(&self) -> Complex64 {
        match self {
            FamilyId::NormalizedParabolic { .. } => Complex64::new(0.0, 0.0),
            FamilyId::QuadraticC => Complex64::new(0.5, 0.0),
            FamilyId::ExponentialLambda => Complex64::new(1.0, 0.0),
        }
    }

    /// Radius of the admissible parameter disk around the base.
    pub fn domain_radius(&self) -> f64 {
        match self {
            FamilyId::NormalizedParabolic { .. } => 1.0,
            FamilyId::QuadraticC => 8.0,
            FamilyId::ExponentialLambda => 64.0,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            FamilyId::NormalizedParabolic { .. } => "normalized",
            FamilyId::QuadraticC => "quadratic",
            FamilyId::ExponentialLambda => "exponential",
        }
    }

    pub fn from_name(name: &str, n: u32) -> Result<Self> {
        match name {
            "normalized" => Self::normalized(n),
            "quadratic" => Ok(FamilyId::QuadraticC),
            "exponential" => Ok(FamilyId::ExponentialLambda),
            other => Err(Error::InvalidInput(format!("unknown family '{other}'"))),
        }
    }

    pub fn n(&self) -> u32 {
        match self {
            FamilyId::NormalizedParabolic { n } => *n,
            _ => 1,
        }
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A concrete map `f_a` of one of the catalog families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FamilyMember {
    pub id: FamilyId,
    pub a: Complex64,
    pub overflow_re: f64,
}

impl FamilyMember {
    pub fn new(id: FamilyId, a: Complex64) -> Result<Self> {
        if !a.re.is_finite() || !a.im.is_finite() {
            return Err(Error::InvalidInput(format!("non-finite parameter {a}")));
        }
        let dist = (a - id.base_parameter()).norm();
        if dist > id.domain_radius() {
            return Err(Error::InvalidInput(format!(
                "parameter {a} outside the {} domain (|a - a0| = {dist} > {})",
                id.name(),
                id.domain_radius()
            )));
        }
        if id == FamilyId::ExponentialLambda && a.norm() == 0.0 {
            return Err(Error::InvalidInput("lambda = 0 is degenerate".into()));
        }
        Ok(Self { id, a, overflow_re: DEFAULT_OVERFLOW_RE })
    }

    pub fn with_overflow_guard(mut self, overflow_re: f64) -> Self {
        self.overflow_re = overflow_re;
        self
    }

    /// The same family at another parameter, keeping the overflow guard.
    pub fn at(&self, a: Complex64) -> Result<Self> {
        Ok(Self::new(self.id, a)?.with_overflow_guard(self.overflow_re))
    }

    /// The parabolic base member of the family.
    pub fn base(id: FamilyId) -> Self {
        Self { id, a: id.base_parameter(), overflow_re: DEFAULT_OVERFLOW_RE }
    }

    fn linear_coeff(&self) -> Complex64 {
        match self.id {
            FamilyId::NormalizedParabolic { n } => 1.0 + 2.0 * self.a.powu(n),
            _ => unreachable!("linear coefficient only defined for the normalized family"),
        }
    }

    fn exp_guarded(&self, z: Complex64) -> Result<Complex64> {
        if !(z.re <= self.overflow_re) {
            return Err(Error::OverflowGuard { z, limit: self.overflow_re });
        }
        Ok(self.a * z.exp())
    }

    /// The singular value: critical value for the polynomials, the omitted
    /// asymptotic value 0 for the exponential.
    pub fn singular_value(&self) -> Complex64 {
        match self.id {
            FamilyId::NormalizedParabolic { .. } => {
                let c = self.linear_coeff();
                -(c * c) / 4.0
            }
            FamilyId::QuadraticC => self.a,
            FamilyId::ExponentialLambda => Complex64::new(0.0, 0.0),
        }
    }

    /// Critical points of the map (none for the exponential).
    pub fn critical_points(&self) -> Vec<Complex64> {
        match self.id {
            FamilyId::NormalizedParabolic { .. } => vec![-self.linear_coeff() / 2.0],
            FamilyId::QuadraticC => vec![Complex64::new(0.0, 0.0)],
            FamilyId::ExponentialLambda => vec![],
        }
    }

    /// Both preimages of `w` for the polynomial families.
    pub(crate) fn quadratic_preimages(&self, w: Complex64) -> [Complex64; 2] {
        match self.id {
            FamilyId::QuadraticC => {
                let r = (w - self.a).sqrt();
                [r, -r]
            }
            FamilyId::NormalizedParabolic { .. } => {
                // y^2 + c y - w = 0; take the large root first, the other from
                // the product y1 y2 = -w so that neither cancels.
                let c = self.linear_coeff();
                let d = (c * c / 4.0 + w).sqrt();
                let p = -c / 2.0 + d;
                let m = -c / 2.0 - d;
                let big = if p.norm() >= m.norm() { p } else { m };
                if big.norm() == 0.0 {
                    return [big, big];
                }
                [big, -w / big]
            }
            FamilyId::ExponentialLambda => unreachable!(),
        }
    }

    /// Preimage of `w` on the logarithm branch `Log w - Log lambda + 2 pi i k`.
    pub fn exp_preimage(&self, w: Complex64, k: i64) -> Result<Complex64> {
        if w.norm() == 0.0 {
            return Err(Error::SingularHit { z: w, distance: 0.0 });
        }
        Ok(w.ln() - self.a.ln() + Complex64::new(0.0, 2.0 * PI * k as f64))
    }
}

impl HoloMap for FamilyMember {
    fn eval(&self, z: Complex64) -> Result<Complex64> {
        match self.id {
            FamilyId::NormalizedParabolic { .. } => Ok(self.linear_coeff() * z + z * z),
            FamilyId::QuadraticC => Ok(z * z + self.a),
            FamilyId::ExponentialLambda => self.exp_guarded(z),
        }
    }

    fn deriv(&self, z: Complex64) -> Result<Complex64> {
        match self.id {
            FamilyId::NormalizedParabolic { .. } => Ok(self.linear_coeff() + 2.0 * z),
            FamilyId::QuadraticC => Ok(2.0 * z),
            FamilyId::ExponentialLambda => self.exp_guarded(z),
        }
    }

    fn taylor(&self, center: Complex64, order: usize) -> Result<Vec<Complex64>> {
        let mut c = vec![Complex64::new(0.0, 0.0); order + 1];
        match self.id {
            FamilyId::NormalizedParabolic { .. } | FamilyId::QuadraticC => {
                c[0] = self.eval(center)?;
                if order >= 1 {
                    c[1] = self.deriv(center)?;
                }
                if order >= 2 {
                    c[2] = Complex64::new(1.0, 0.0);
                }
            }
            FamilyId::ExponentialLambda => {
                let mut term = self.exp_guarded(center)?;
                for (k, slot) in c.iter_mut().enumerate() {
                    if k > 0 {
                        term /= k as f64;
                    }
                    *slot = term;
                }
            }
        }
        Ok(c)
    }

    fn preimage_near(&self, w: Complex64, near: Complex64) -> Result<Complex64> {
        match self.id {
            FamilyId::ExponentialLambda => {
                let y0 = self.exp_preimage(w, 0)?;
                let k = ((near.im - y0.im) / (2.0 * PI)).round();
                Ok(y0 + Complex64::new(0.0, 2.0 * PI * k))
            }
            _ => {
                let [y1, y2] = self.quadratic_preimages(w);
                Ok(if (y1 - near).norm() <= (y2 - near).norm() { y1 } else { y2 })
            }
        }
    }
}

#[derive(Serialize, Deserialize)]
struct MemberRepr {
    family: String,
    #[serde(default = "one")]
    n: u32,
    a_re: f64,
    a_im: f64,
}

fn one() -> u32 {
    1
}

impl Serialize for FamilyId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl<'de> Deserialize<'de> for FamilyId {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let name = String::deserialize(d)?;
        FamilyId::from_name(&name, 1).map_err(serde::de::Error::custom)
    }
}

impl Serialize for FamilyMember {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MemberRepr { family: self.id.name().to_string(), n: self.id.n(), a_re: self.a.re, a_im: self.a.im }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for FamilyMember {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = MemberRepr::deserialize(d)?;
        let id = FamilyId::from_name(&r.family, r.n).map_err(serde::de::Error::custom)?;
        FamilyMember::new(id, Complex64::new(r.a_re, r.a_im)).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn normalized(l: Complex64) -> FamilyMember {
        FamilyMember::new(FamilyId::normalized(1).unwrap(), l).unwrap()
    }

    #[test]
    fn eval_examples() {
        let m = normalized(c(0.0, 0.0));
        assert_eq!(m.eval(c(0.5, 0.0)).unwrap(), c(0.75, 0.0));
        let q = FamilyMember::new(FamilyId::QuadraticC, c(0.25, 0.0)).unwrap();
        assert_eq!(q.eval(c(0.5, 0.0)).unwrap(), c(0.5, 0.0));
        let e = FamilyMember::base(FamilyId::ExponentialLambda);
        assert!((e.eval(c(1.0, 0.0)).unwrap() - 1.0).norm() < 1e-15);
    }

    #[test]
    fn deriv_examples() {
        let m = normalized(c(0.05, 0.0));
        assert!((m.deriv(c(0.0, 0.0)).unwrap() - 1.1).norm() < 1e-15);
        let q = FamilyMember::new(FamilyId::QuadraticC, c(0.25, 0.0)).unwrap();
        assert_eq!(q.deriv(c(0.5, 0.0)).unwrap(), c(1.0, 0.0));
        let e = FamilyMember::base(FamilyId::ExponentialLambda);
        assert!((e.deriv(c(1.0, 0.0)).unwrap() - 1.0).norm() < 1e-15);
    }

    #[test]
    fn singular_value_examples() {
        let q = FamilyMember::new(FamilyId::QuadraticC, c(0.25, 0.0)).unwrap();
        assert_eq!(q.singular_value(), c(0.25, 0.0));
        let e = FamilyMember::new(FamilyId::ExponentialLambda, c(0.2, 0.0)).unwrap();
        assert_eq!(e.singular_value(), c(0.0, 0.0));
        assert_eq!(normalized(c(0.0, 0.0)).singular_value(), c(-0.25, 0.0));
    }

    #[test]
    fn overflow_guard() {
        let e = FamilyMember::new(FamilyId::ExponentialLambda, c(0.2, 0.0)).unwrap();
        assert!(matches!(e.eval(c(701.0, 0.0)), Err(Error::OverflowGuard { .. })));
        assert!(e.eval(c(699.0, 0.0)).is_ok());
        let tight = e.with_overflow_guard(10.0);
        assert!(matches!(tight.deriv(c(11.0, 0.0)), Err(Error::OverflowGuard { .. })));
    }

    #[test]
    fn domain_and_variant_checks() {
        assert!(FamilyId::normalized(2).is_err());
        assert!(FamilyMember::new(FamilyId::QuadraticC, c(100.0, 0.0)).is_err());
        assert!(FamilyMember::new(FamilyId::ExponentialLambda, c(0.0, 0.0)).is_err());
    }

    fn members() -> Vec<FamilyMember> {
        vec![
            normalized(c(0.05, 0.03)),
            FamilyMember::new(FamilyId::QuadraticC, c(0.3, -0.1)).unwrap(),
            FamilyMember::new(FamilyId::ExponentialLambda, c(0.4, 0.1)).unwrap(),
        ]
    }

    #[test]
    fn derivative_matches_first_order_expansion() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let h = c(1e-6, 0.0);
        for m in members() {
            for _ in 0..10 {
                let z = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                let lhs = m.eval(z + h).unwrap() - m.eval(z).unwrap() - m.deriv(z).unwrap() * h;
                assert!(lhs.norm() <= 1e-8, "{:?} at {z}: {}", m.id, lhs.norm());
            }
        }
    }

    #[test]
    fn singular_value_satisfies_cauchy_riemann() {
        for m in members() {
            let h = 1e-6;
            let s = |a: Complex64| m.at(a).unwrap().singular_value();
            let dx = (s(m.a + c(h, 0.0)) - s(m.a - c(h, 0.0))) / (2.0 * h);
            let dy = (s(m.a + c(0.0, h)) - s(m.a - c(0.0, h))) / (2.0 * h);
            // holomorphic iff d/dy = i d/dx
            assert!((dy - Complex64::i() * dx).norm() <= 1e-8, "{:?}", m.id);
        }
    }

    #[test]
    fn base_fixed_points_are_parabolic() {
        for id in [FamilyId::normalized(1).unwrap(), FamilyId::QuadraticC, FamilyId::ExponentialLambda] {
            let m = FamilyMember::base(id);
            let z0 = id.base_fixed_point();
            assert!((m.eval(z0).unwrap() - z0).norm() < 1e-15);
            assert!((m.deriv(z0).unwrap() - 1.0).norm() < 1e-15);
        }
    }

    #[test]
    fn taylor_reproduces_values() {
        for m in members() {
            let z0 = c(0.2, 0.1);
            let coeffs = m.taylor(z0, 20).unwrap();
            let h = c(0.01, -0.02);
            let series: Complex64 = coeffs.iter().rev().fold(c(0.0, 0.0), |acc, &a| acc * h + a);
            assert!((series - m.eval(z0 + h).unwrap()).norm() < 1e-14);
        }
    }

    #[test]
    fn preimages_invert() {
        for m in members() {
            let near = c(0.3, 0.2);
            let w = m.eval(near).unwrap();
            let y = m.preimage_near(w, near + c(0.01, 0.0)).unwrap();
            assert!((y - near).norm() < 1e-12, "{:?}", m.id);
        }
        // small preimage stays accurate
        let m = normalized(c(0.0, 0.1));
        let tiny = c(1e-12, 3e-13);
        let y = m.preimage_near(m.eval(tiny).unwrap(), c(0.0, 0.0)).unwrap();
        assert!(((y - tiny) / tiny).norm() < 1e-12);
    }

    #[test]
    fn json_round_trip() {
        let m = FamilyMember::new(FamilyId::QuadraticC, c(0.3, -0.1)).unwrap();
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(s, r#"{"family":"quadratic","n":1,"a_re":0.3,"a_im":-0.1}"#);
        let back: FamilyMember = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);
        assert!(serde_json::from_str::<FamilyMember>(r#"{"family":"cubic","a_re":0,"a_im":0}"#).is_err());
    }
}
