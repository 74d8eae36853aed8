//! Truncated Taylor series about the origin with complex coefficients.

use std::ops::{Add, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Default truncation order for the series representation of maps.
pub const DEFAULT_ORDER: usize = 64;

/// Coefficients `c_0, …, c_N`; every operation truncates at `N`.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerSeries {
    coeffs: Vec<Complex64>,
}

impl PowerSeries {
    /// Builds a series of order `coeffs.len() - 1`. Panics on an empty vector.
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        assert!(!coeffs.is_empty(), "a power series needs at least c_0");
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn zero(order: usize) -> Self {
        Self::new(vec![Complex64::new(0.0, 0.0); order + 1])
    }

    /// `1 + 0z + …`
    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = Complex64::new(1.0, 0.0);
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient of `z^n`, zero beyond the truncation.
    pub fn coeff(&self, n: usize) -> Complex64 {
        self.coeffs.get(n).copied().unwrap_or_default()
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::new((0..=order).map(|n| self.coeff(n)).collect())
    }

    pub fn scale(&self, k: Complex64) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * k).collect())
    }

    /// Cauchy product truncated at the smaller of the two orders.
    pub fn mul(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        let mut out = vec![Complex64::new(0.0, 0.0); order + 1];
        for (i, &a) in self.coeffs.iter().take(order + 1).enumerate() {
            for (j, &b) in other.coeffs.iter().take(order + 1 - i).enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    /// Quotient `self / other`; requires `other.c_0 != 0`.
    pub fn div(&self, other: &Self) -> Result<Self> {
        let d0 = other.coeffs[0];
        if d0.norm() == 0.0 {
            return Err(Error::Division);
        }
        let order = self.order().min(other.order());
        let mut q = vec![Complex64::new(0.0, 0.0); order + 1];
        for n in 0..=order {
            let mut acc = self.coeffs[n];
            for k in 1..=n {
                acc -= other.coeffs[k] * q[n - k];
            }
            q[n] = acc / d0;
        }
        Ok(Self::new(q))
    }

    /// Term-by-term derivative; the order drops by one (a constant stays order 0).
    pub fn derivative(&self) -> Self {
        if self.order() == 0 {
            return Self::zero(0);
        }
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(n, &c)| c * n as f64)
                .collect(),
        )
    }

    /// Antiderivative with zero constant term; the order grows by one.
    pub fn antiderivative(&self) -> Self {
        let mut out = Vec::with_capacity(self.coeffs.len() + 1);
        out.push(Complex64::new(0.0, 0.0));
        out.extend(self.coeffs.iter().enumerate().map(|(n, &c)| c / (n + 1) as f64));
        Self::new(out)
    }

    /// Horner evaluation of the partial sum.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }
}

impl Add for &PowerSeries {
    type Output = PowerSeries;
    fn add(self, rhs: &PowerSeries) -> PowerSeries {
        let order = self.order().min(rhs.order());
        PowerSeries::new((0..=order).map(|n| self.coeffs[n] + rhs.coeffs[n]).collect())
    }
}

impl Sub for &PowerSeries {
    type Output = PowerSeries;
    fn sub(self, rhs: &PowerSeries) -> PowerSeries {
        let order = self.order().min(rhs.order());
        PowerSeries::new((0..=order).map(|n| self.coeffs[n] - rhs.coeffs[n]).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn geometric_times_koebe_prime() {
        // (1 + z + z^2 + z^3)(1 + 4z + 9z^2 + 16z^3)
        let a = PowerSeries::from_real(&[1.0, 1.0, 1.0, 1.0]);
        let b = PowerSeries::from_real(&[1.0, 4.0, 9.0, 16.0]);
        assert_eq!(a.mul(&b).coeffs(), PowerSeries::from_real(&[1.0, 5.0, 14.0, 30.0]).coeffs());
    }

    #[test]
    fn antiderivative_has_zero_constant() {
        let s = PowerSeries::from_real(&[2.0, 3.0]).antiderivative();
        assert_eq!(s.coeffs(), &[c(0.0), c(2.0), c(1.5)]);
        assert_eq!(s.derivative().coeffs(), &[c(2.0), c(3.0)]);
    }

    #[test]
    fn division_inverts_multiplication() {
        let a = PowerSeries::new(vec![Complex64::new(1.0, 1.0), c(2.0), Complex64::new(0.0, -3.0), c(0.5)]);
        let b = PowerSeries::from_real(&[2.0, -1.0, 0.25, 4.0]);
        let q = a.mul(&b).div(&b).unwrap();
        for n in 0..=3 {
            assert!((q.coeff(n) - a.coeff(n)).norm() < 1e-14);
        }
        assert_eq!(a.div(&PowerSeries::from_real(&[0.0, 1.0])), Err(Error::Division));
    }

    #[test]
    fn horner_matches_direct_sum() {
        let s = PowerSeries::from_real(&[1.0, -2.0, 3.0]);
        let z = Complex64::new(0.3, -0.2);
        assert!((s.eval(z) - (c(1.0) - z * 2.0 + z * z * 3.0)).norm() < 1e-15);
    }
}
