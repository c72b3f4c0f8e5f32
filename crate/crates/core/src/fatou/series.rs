//! Formal solution of the Abel equation at infinity.
//!
//! For a germ `g(w) = w + w^2 + g_3 w^3 + ...` and `Z = -1/w`, the
//! transported map is `F(Z) = Z + 1 + b_1/Z + ...`. With `L` a logarithm of
//! `Z` the Abel equation `Phi(F(Z)) = Phi(Z) + 1` has the formal solution
//! `Phi(Z) = Z - a* L + sum_k Q_k(L) / Z^k` where `a* = b_1` and each `Q_k` is
//! a polynomial of degree below `k`.

use num_complex::Complex64;

use crate::{Error, Result};

type Poly = Vec<Complex64>;

fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

/// `a* = 1 - a3` for `w + w^2 + a3 w^3 + ...`, given `[c1, c2, a3]`.
pub fn a_star_coefficient(coeffs: [Complex64; 3]) -> Result<Complex64> {
    let [c1, c2, a3] = coeffs;
    if (c1 - 1.0).norm() > 1e-12 || (c2 - 1.0).norm() > 1e-12 {
        return Err(Error::NotNormalized { c1, c2 });
    }
    Ok(1.0 - a3)
}

fn mul(a: &[Complex64], b: &[Complex64], n: usize) -> Vec<Complex64> {
    let mut out = vec![zero(); n + 1];
    for (i, &x) in a.iter().enumerate().take(n + 1) {
        if x == zero() {
            continue;
        }
        for (j, &y) in b.iter().enumerate().take(n + 1 - i) {
            out[i + j] += x * y;
        }
    }
    out
}

fn reciprocal(h: &[Complex64], n: usize) -> Vec<Complex64> {
    let mut r = vec![zero(); n + 1];
    r[0] = 1.0 / h[0];
    for m in 1..=n {
        let mut s = zero();
        for j in 1..=m.min(h.len() - 1) {
            s += h[j] * r[m - j];
        }
        r[m] = -s / h[0];
    }
    r
}

/// `log h` for a series with `h_0 = 1`.
fn log_series(h: &[Complex64], n: usize) -> Vec<Complex64> {
    // y' = h'/h, integrated termwise
    let dh: Vec<Complex64> = (1..=n).map(|k| h.get(k).copied().unwrap_or_default() * k as f64).collect();
    let q = mul(&dh, &reciprocal(h, n), n);
    let mut y = vec![zero(); n + 1];
    for k in 1..=n {
        y[k] = q[k - 1] / k as f64;
    }
    y
}

fn poly_eval(p: &[Complex64], x: Complex64) -> Complex64 {
    p.iter().rev().fold(zero(), |acc, &c| acc * x + c)
}

fn poly_derivative(p: &[Complex64]) -> Poly {
    p.iter().enumerate().skip(1).map(|(j, &c)| c * j as f64).collect()
}

fn add_into(dst: &mut Poly, src: &[Complex64], scale: Complex64) {
    if dst.len() < src.len() {
        dst.resize(src.len(), zero());
    }
    for (d, &s) in dst.iter_mut().zip(src) {
        *d += s * scale;
    }
}

/// Bivariate truncated series: index = power of `u`, entry = polynomial in `L`.
type Bi = Vec<Poly>;

/// The truncated asymptotic Fatou coordinate.
#[derive(Debug, Clone, PartialEq)]
pub struct AbelSeries {
    pub a_star: Complex64,
    /// `q[k]` holds `Q_k` for `k >= 1`; `q[0]` is empty.
    pub q: Vec<Poly>,
}

impl AbelSeries {
    /// Builds the series from Taylor coefficients `g[0..]` of the germ at 0
    /// (`g[0] = 0`, `g[1] = g[2] = 1`), keeping terms up to `Z^-order`.
    pub fn from_germ(g: &[Complex64], order: usize) -> Result<Self> {
        let at = |k: usize| g.get(k).copied().unwrap_or_default();
        if at(0).norm() > 1e-12 {
            return Err(Error::InvalidInput(format!("germ does not fix 0 (g(0) = {})", at(0))));
        }
        a_star_coefficient([at(1), at(2), at(3)])?;
        let n = order + 1;
        // g(-u) = -u h(u), so F/Z = 1/h and (F/Z)^-k = h^k
        let h: Vec<Complex64> = (0..=n + 1).map(|j| at(j + 1) * if j % 2 == 0 { 1.0 } else { -1.0 }).collect();
        let inv_h = reciprocal(&h, n + 1);
        let ell: Vec<Complex64> = log_series(&h, n).into_iter().map(|c| -c).collect();
        let a_star = inv_h[2];

        // F - Z - 1 - a* ell, as a bivariate series with constant L-polys
        let mut known: Bi = vec![Vec::new(); n + 1];
        for j in 1..=n {
            known[j] = vec![inv_h[j + 1] - a_star * ell[j]];
        }

        let mut q: Vec<Poly> = vec![Vec::new()];
        let mut h_pow = h.clone();
        for m in 1..=order {
            let k_poly = known[m + 1].clone();
            let deg = k_poly.len();
            let mut c = vec![zero(); deg];
            for d in (0..deg).rev() {
                let next = if d + 1 < deg { c[d + 1] * (d + 1) as f64 } else { zero() };
                c[d] = (k_poly[d] + next) / m as f64;
            }
            while c.last().is_some_and(|x| *x == zero()) {
                c.pop();
            }

            if m < order {
                // contribution u^m [Q_m(L + ell) h^m - Q_m(L)] to higher orders
                let room = n - m;
                let mut shifted: Bi = vec![Vec::new(); room + 1];
                let mut deriv = c.clone();
                let mut ell_pow = vec![zero(); room + 1];
                ell_pow[0] = Complex64::new(1.0, 0.0);
                let mut factorial = 1.0;
                let mut i = 0;
                while !deriv.is_empty() {
                    for (p, &e) in ell_pow.iter().enumerate() {
                        if e != zero() {
                            add_into(&mut shifted[p], &deriv, e / factorial);
                        }
                    }
                    i += 1;
                    factorial *= i as f64;
                    deriv = poly_derivative(&deriv);
                    ell_pow = mul(&ell_pow, &ell, room);
                }
                for p in 0..=room {
                    let mut term: Poly = Vec::new();
                    for (s, hs) in h_pow.iter().enumerate().take(p + 1) {
                        add_into(&mut term, &shifted[p - s], *hs);
                    }
                    if p == 0 {
                        add_into(&mut term, &c, Complex64::new(-1.0, 0.0));
                    }
                    add_into(&mut known[p + m], &term, Complex64::new(1.0, 0.0));
                }
                h_pow = mul(&h_pow, &h, n);
            }
            q.push(c);
        }
        Ok(Self { a_star, q })
    }

    /// `Z - a* L + sum Q_k(L) Z^-k`.
    pub fn eval(&self, z: Complex64, log: Complex64) -> Complex64 {
        let u = 1.0 / z;
        let mut tail = zero();
        for qk in self.q.iter().skip(1).rev() {
            tail = (tail + poly_eval(qk, log)) * u;
        }
        z - self.a_star * log + tail
    }

    pub fn order(&self) -> usize {
        self.q.len() - 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn a_star_examples() {
        assert_eq!(a_star_coefficient([c(1.0), c(1.0), c(0.0)]).unwrap(), c(1.0));
        assert_eq!(a_star_coefficient([c(1.0), c(1.0), c(1.0)]).unwrap(), c(0.0));
        assert_eq!(a_star_coefficient([c(1.0), c(1.0), c(0.5)]).unwrap(), c(0.5));
        assert!(matches!(a_star_coefficient([c(1.1), c(1.0), c(0.0)]), Err(Error::NotNormalized { .. })));
    }

    /// Oracle: `-1/f(-1/z)` expanded by direct evaluation at large z.
    #[test]
    fn a_star_matches_direct_expansion() {
        for a3 in [0.0, 1.0, 0.5, -0.3] {
            let f = |w: Complex64| w + w * w + a3 * w * w * w;
            let z = c(1e4);
            let fz = -1.0 / f(-1.0 / z);
            let b1 = (fz - z - 1.0) * z;
            assert!((b1 - (1.0 - a3)).norm() < 1e-3, "a3 {a3} b1 {b1}");
        }
    }

    #[test]
    fn mobius_series_is_identity() {
        let g: Vec<Complex64> = (0..12).map(|k| if k == 0 { c(0.0) } else { c(1.0) }).collect();
        let s = AbelSeries::from_germ(&g, 8).unwrap();
        assert!(s.a_star.norm() < 1e-15);
        for qk in &s.q {
            assert!(qk.iter().all(|x| x.norm() < 1e-13), "{qk:?}");
        }
    }

    #[test]
    fn series_solves_abel_equation() {
        let g = [c(0.0), c(1.0), c(1.0), c(0.3), c(-0.2)];
        let f = |w: Complex64| g.iter().rev().fold(c(0.0), |acc, &x| acc * w + x);
        let s = AbelSeries::from_germ(&g, 8).unwrap();
        assert!((s.a_star - 0.7).norm() < 1e-15);
        for k in 1..s.q.len() {
            assert!(s.q[k].len() <= k, "deg Q_{k} = {}", s.q[k].len());
        }
        let phi = |z: Complex64| s.eval(z, z.ln());
        let defect = |r: f64| {
            let z = Complex64::from_polar(r, 0.4);
            let fz = -1.0 / f(-1.0 / z);
            (phi(fz) - phi(z) - 1.0).norm()
        };
        // truncation error decays like r^-(order + 2) until rounding takes over
        assert!(defect(4.0) > 10.0 * defect(8.0));
        assert!(defect(8.0) > 10.0 * defect(16.0));
        let prev = defect(100.0);
        assert!(prev < 1e-12, "defect {prev}");
    }
}
