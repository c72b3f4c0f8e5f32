//! Closed-form germs used as test models and oracles.

use num_complex::Complex64;

use crate::family::HoloMap;
use crate::Result;

/// `w -> w / (1 - w)`, conjugate to `Z -> Z + 1` by `Z = -1/w`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Mobius;

impl HoloMap for Mobius {
    fn eval(&self, w: Complex64) -> Result<Complex64> {
        Ok(w / (1.0 - w))
    }

    fn deriv(&self, w: Complex64) -> Result<Complex64> {
        let d = 1.0 - w;
        Ok(1.0 / (d * d))
    }

    fn taylor(&self, center: Complex64, order: usize) -> Result<Vec<Complex64>> {
        // w/(1-w) = -1 + 1/(1-w); the k-th coefficient at c is (1-c)^-(k+1)
        let r = 1.0 / (1.0 - center);
        let mut out = Vec::with_capacity(order + 1);
        let mut p = r;
        for k in 0..=order {
            out.push(if k == 0 { p - 1.0 } else { p });
            p *= r;
        }
        Ok(out)
    }

    fn preimage_near(&self, w: Complex64, _near: Complex64) -> Result<Complex64> {
        Ok(w / (1.0 + w))
    }
}

/// A polynomial map given by its coefficients at 0.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    pub coeffs: Vec<Complex64>,
}

impl Polynomial {
    pub fn new(coeffs: &[f64]) -> Self {
        Self { coeffs: coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect() }
    }

    pub fn complex(coeffs: Vec<Complex64>) -> Self {
        Self { coeffs }
    }

    /// `mu w + w^2`.
    pub fn quadratic(mu: Complex64) -> Self {
        Self::complex(vec![Complex64::new(0.0, 0.0), mu, Complex64::new(1.0, 0.0)])
    }
}

impl HoloMap for Polynomial {
    fn eval(&self, w: Complex64) -> Result<Complex64> {
        Ok(self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * w + c))
    }

    fn deriv(&self, w: Complex64) -> Result<Complex64> {
        Ok(self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, (k, &c)| acc * w + c * k as f64))
    }

    fn taylor(&self, center: Complex64, order: usize) -> Result<Vec<Complex64>> {
        // repeated synthetic division by (w - center)
        let mut work = self.coeffs.clone();
        let mut out = Vec::with_capacity(order + 1);
        for _ in 0..=order {
            if work.is_empty() {
                out.push(Complex64::new(0.0, 0.0));
                continue;
            }
            let mut carry = Complex64::new(0.0, 0.0);
            let mut quotient = vec![Complex64::new(0.0, 0.0); work.len() - 1];
            for i in (0..work.len()).rev() {
                carry = carry * center + work[i];
                if i > 0 {
                    quotient[i - 1] = carry;
                }
            }
            out.push(carry);
            work = quotient;
        }
        Ok(out)
    }
}

/// `z -> mu z`.
#[derive(Debug, Clone, Copy)]
pub struct Linear {
    pub mu: Complex64,
}

impl HoloMap for Linear {
    fn eval(&self, z: Complex64) -> Result<Complex64> {
        Ok(self.mu * z)
    }

    fn deriv(&self, _z: Complex64) -> Result<Complex64> {
        Ok(self.mu)
    }

    fn taylor(&self, center: Complex64, order: usize) -> Result<Vec<Complex64>> {
        let mut out = vec![Complex64::new(0.0, 0.0); order + 1];
        out[0] = self.mu * center;
        if order >= 1 {
            out[1] = self.mu;
        }
        Ok(out)
    }

    fn preimage_near(&self, w: Complex64, _near: Complex64) -> Result<Complex64> {
        Ok(w / self.mu)
    }
}
