//! Truncated power series with exact coefficients.

use num_bigint::BigUint;
use num_traits::Zero;

/// `sum_{n <= bound} a_n z^n` with `a_n` exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoeffSeries {
    coeffs: Vec<BigUint>,
}

impl CoeffSeries {
    pub fn new(coeffs: Vec<BigUint>) -> Self {
        CoeffSeries { coeffs }
    }

    pub fn coeffs(&self) -> &[BigUint] {
        &self.coeffs
    }

    /// Coefficient of `z^n`, zero past the truncation.
    pub fn coeff(&self, n: usize) -> BigUint {
        self.coeffs.get(n).cloned().unwrap_or_else(BigUint::zero)
    }

    /// Index of the last stored coefficient.
    pub fn bound(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn into_inner(self) -> Vec<BigUint> {
        self.coeffs
    }
}
