use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use super::{BigIntMatrix, Result};

/// Dense univariate polynomial with integer coefficients, lowest degree
/// first. Trailing zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| c.into()).collect())
    }

    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    /// `x^d`.
    pub fn monomial(d: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); d + 1];
        coeffs[d] = BigInt::one();
        IntPolynomial { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Coefficient of `x^i` (zero past the degree).
    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(One::is_one)
    }

    /// For a degree-`n` polynomial `x^n + c_1 x^{n-1} + ... + c_n`, the
    /// coefficient `c_i` (so `c_0` is the leading coefficient).
    pub fn char_coeff(&self, i: usize) -> BigInt {
        match self.degree() {
            Some(n) if i <= n => self.coeffs[n - i].clone(),
            _ => BigInt::zero(),
        }
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    /// Horner evaluation at a square matrix.
    pub fn eval_matrix(&self, m: &BigIntMatrix) -> Result<BigIntMatrix> {
        let n = m.require_square()?;
        let mut acc = BigIntMatrix::zeros(n, n);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(m)?;
            for i in 0..n {
                acc[(i, i)] += c;
            }
        }
        Ok(acc)
    }
}

impl fmt::Display for IntPolynomial {
    /// Human-readable form such as `x^3 - 3x - 2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (d, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let show_mag = d == 0 || !mag.is_one();
            if show_mag {
                write!(f, "{mag}")?;
            }
            match d {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{d}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPolynomial({self})")
    }
}

impl Serialize for IntPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.coeffs.iter().map(ToString::to_string))
    }
}
