use std::fmt;

use serde::{Serialize, Serializer};

use super::{F2Error, Result};
use crate::exact::IntPolynomial;

/// Polynomial over GF(2); bit `i` is the coefficient of `x^i`. No trailing
/// zero words are stored, so the zero polynomial has an empty bit set.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct F2Polynomial {
    words: Vec<u64>,
}

impl F2Polynomial {
    fn normalized(mut words: Vec<u64>) -> Self {
        while words.last() == Some(&0) {
            words.pop();
        }
        F2Polynomial { words }
    }

    pub fn zero() -> Self {
        F2Polynomial::default()
    }

    pub fn one() -> Self {
        Self::monomial(0)
    }

    pub fn x() -> Self {
        Self::monomial(1)
    }

    pub fn monomial(d: usize) -> Self {
        let mut p = F2Polynomial { words: vec![0; d / 64 + 1] };
        p.words[d / 64] = 1 << (d % 64);
        p
    }

    /// Sum of `x^e` over the given exponents (repeats cancel).
    pub fn from_exponents(exps: &[usize]) -> Self {
        let mut p = Self::zero();
        for &e in exps {
            p.flip(e);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.words.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        let last = *self.words.last()?;
        Some((self.words.len() - 1) * 64 + 63 - last.leading_zeros() as usize)
    }

    pub fn coeff(&self, i: usize) -> bool {
        self.words.get(i / 64).is_some_and(|w| (w >> (i % 64)) & 1 == 1)
    }

    fn flip(&mut self, i: usize) {
        if self.words.len() <= i / 64 {
            self.words.resize(i / 64 + 1, 0);
        }
        self.words[i / 64] ^= 1 << (i % 64);
        let normalized = Self::normalized(std::mem::take(&mut self.words));
        *self = normalized;
    }

    /// Exponents with a nonzero coefficient, ascending.
    pub fn exponents(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                (w != 0).then(|| {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    wi * 64 + b
                })
            })
        })
    }

    /// Largest `k` with `x^k` dividing `self`; zero for the zero polynomial.
    pub fn trailing_zeros(&self) -> usize {
        self.exponents().next().unwrap_or(0)
    }

    pub fn add(&self, other: &Self) -> Self {
        let len = self.words.len().max(other.words.len());
        let words = (0..len)
            .map(|i| self.words.get(i).copied().unwrap_or(0) ^ other.words.get(i).copied().unwrap_or(0))
            .collect();
        Self::normalized(words)
    }

    /// Carry-less product.
    pub fn mul(&self, other: &Self) -> Self {
        let (Some(da), Some(db)) = (self.degree(), other.degree()) else {
            return Self::zero();
        };
        let mut words = vec![0u64; (da + db) / 64 + 1];
        for e in self.exponents() {
            let (ws, bs) = (e / 64, e % 64);
            for (i, &w) in other.words.iter().enumerate() {
                words[i + ws] ^= w << bs;
                if bs > 0 && i + ws + 1 < words.len() {
                    words[i + ws + 1] ^= w >> (64 - bs);
                }
            }
        }
        Self::normalized(words)
    }

    pub fn square(&self) -> Self {
        Self::from_exponents(&self.exponents().map(|e| 2 * e).collect::<Vec<_>>())
    }

    /// Multiplication by `x^k`.
    pub fn shl(&self, k: usize) -> Self {
        self.mul(&Self::monomial(k))
    }

    /// Division with remainder; `divisor` must be nonzero.
    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self)> {
        let db = divisor.degree().ok_or(F2Error::DivisionByZero)?;
        let mut rem = self.clone();
        let mut quot = Self::zero();
        while let Some(dr) = rem.degree() {
            if dr < db {
                break;
            }
            quot.flip(dr - db);
            rem = rem.add(&divisor.shl(dr - db));
        }
        Ok((quot, rem))
    }

    pub fn divides(&self, other: &Self) -> Result<bool> {
        Ok(other.div_rem(self)?.1.is_zero())
    }

    pub fn eval(&self, x: bool) -> bool {
        if x {
            self.exponents().count() % 2 == 1
        } else {
            self.coeff(0)
        }
    }
}

impl fmt::Display for F2Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .exponents()
            .collect::<Vec<_>>()
            .into_iter()
            .rev()
            .map(|e| match e {
                0 => "1".to_string(),
                1 => "x".to_string(),
                _ => format!("x^{e}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

impl fmt::Debug for F2Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F2Polynomial({self})")
    }
}

impl Serialize for F2Polynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Coefficientwise parity.
pub fn poly_mod2(p: &IntPolynomial) -> F2Polynomial {
    let exps: Vec<usize> = p.coeffs().iter().enumerate().filter(|(_, c)| c.bit(0)).map(|(i, _)| i).collect();
    F2Polynomial::from_exponents(&exps)
}

/// Square root over GF(2): squaring doubles every exponent, so the root
/// keeps the even-exponent terms at half the exponent.
pub fn f2_poly_sqrt(p: &F2Polynomial) -> Result<F2Polynomial> {
    let mut exps = Vec::new();
    for e in p.exponents() {
        if e % 2 == 1 {
            return Err(F2Error::NotASquare { exponent: e });
        }
        exps.push(e / 2);
    }
    Ok(F2Polynomial::from_exponents(&exps))
}

/// Splits `p = x^k * phi1^2` with `phi1(0) = 1`.
pub fn decompose_phi_mod2(p: &F2Polynomial) -> Result<(usize, F2Polynomial)> {
    if p.is_zero() {
        return Err(F2Error::ZeroPolynomial);
    }
    let k = p.trailing_zeros();
    let shifted = F2Polynomial::from_exponents(&p.exponents().map(|e| e - k).collect::<Vec<_>>());
    let phi1 = f2_poly_sqrt(&shifted).map_err(|e| match e {
        F2Error::NotASquare { exponent } => F2Error::NotASquare { exponent: exponent + k },
        other => other,
    })?;
    Ok((k, phi1))
}

/// The square-root polynomial of a characteristic polynomial
/// `x^n + c_1 x^{n-1} + ... + c_n`, reduced mod 2:
///
/// - even `n`: `x^{n/2} + c_2 x^{n/2-1} + ... + c_{n-2} x + c_n`
/// - odd `n`: `x^{(n+1)/2} + c_2 x^{(n-1)/2} + ... + c_{n-1} x`
///
/// Its square is `phi mod 2` (even `n`) or `x * phi mod 2` (odd `n`)
/// provided every odd-index `c_i` is even.
pub fn varphi_from_charpoly(phi: &IntPolynomial, n: usize) -> Result<F2Polynomial> {
    if phi.degree() != Some(n) || !phi.is_monic() {
        return Err(F2Error::NotMonicOfDegree { n });
    }
    let top = n.div_ceil(2);
    let mut exps = vec![top];
    for i in 1..=n {
        let c = phi.char_coeff(i);
        if i % 2 == 1 {
            if c.bit(0) {
                return Err(F2Error::OddIndexCoefficientOdd { index: i });
            }
            continue;
        }
        if c.bit(0) {
            exps.push(top - i / 2);
        }
    }
    Ok(F2Polynomial::from_exponents(&exps))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(exps: &[usize]) -> F2Polynomial {
        F2Polynomial::from_exponents(exps)
    }

    #[test]
    fn arithmetic() {
        assert_eq!(p(&[1, 0]).square(), p(&[2, 0]));
        assert_eq!(p(&[1, 0]).mul(&p(&[1, 0])), p(&[2, 0]));
        assert_eq!(p(&[70, 3]).mul(&p(&[65, 1])), p(&[135, 71, 68, 4]));
        let (q, r) = p(&[5, 1]).div_rem(&p(&[2, 0])).unwrap();
        assert_eq!(q.mul(&p(&[2, 0])).add(&r), p(&[5, 1]));
        assert!(r.degree().is_none_or(|d| d < 2));
        assert!(p(&[1, 0]).divides(&p(&[2, 0])).unwrap());
        assert!(F2Polynomial::zero().divides(&p(&[1])).is_err());
        assert_eq!(p(&[5, 4, 3]).to_string(), "x^5 + x^4 + x^3");
        assert_eq!(p(&[0, 1]).to_string(), "x + 1");
    }

    #[test]
    fn parity_reduction() {
        assert_eq!(poly_mod2(&IntPolynomial::from_i64(&[-2, -3, 0, 1])), p(&[3, 1]));
        let phi = IntPolynomial::from_i64(&crate::fixtures::EXAMPLE1_CHARPOLY);
        assert_eq!(poly_mod2(&phi), p(&[10, 8, 6]));
    }

    #[test]
    fn sqrt_cases() {
        // (x^5 + x^4 + x^3)^2 = x^10 + x^8 + x^6
        assert_eq!(p(&[5, 4, 3]).square(), p(&[10, 8, 6]));
        assert_eq!(f2_poly_sqrt(&p(&[10, 8, 6])).unwrap(), p(&[5, 4, 3]));
        assert_eq!(f2_poly_sqrt(&F2Polynomial::one()).unwrap(), F2Polynomial::one());
        assert_eq!(f2_poly_sqrt(&p(&[2])).unwrap(), F2Polynomial::x());
        assert_eq!(f2_poly_sqrt(&p(&[3, 0])), Err(F2Error::NotASquare { exponent: 3 }));
    }

    #[test]
    fn decompose_cases() {
        // x^6 (x^2 + x + 1)^2 = x^6 (x^4 + x^2 + 1)
        assert_eq!(decompose_phi_mod2(&p(&[10, 8, 6])).unwrap(), (6, p(&[2, 1, 0])));
        assert_eq!(decompose_phi_mod2(&F2Polynomial::x()).unwrap(), (1, F2Polynomial::one()));
        // x (x + 1)^2 = x^3 + x
        assert_eq!(decompose_phi_mod2(&p(&[3, 1])).unwrap(), (1, p(&[1, 0])));
        assert!(decompose_phi_mod2(&F2Polynomial::zero()).is_err());
        assert_eq!(decompose_phi_mod2(&p(&[4, 3])), Err(F2Error::NotASquare { exponent: 4 }));
    }

    #[test]
    fn varphi_cases() {
        let phi = IntPolynomial::from_i64(&crate::fixtures::EXAMPLE1_CHARPOLY);
        assert_eq!(varphi_from_charpoly(&phi, 10).unwrap(), p(&[5, 4, 3]));
        let k3 = IntPolynomial::from_i64(&[-2, -3, 0, 1]);
        assert_eq!(varphi_from_charpoly(&k3, 3).unwrap(), p(&[2, 1]));
        let c4 = IntPolynomial::from_i64(&[0, 0, -4, 0, 1]);
        assert_eq!(varphi_from_charpoly(&c4, 4).unwrap(), p(&[2]));
        assert_eq!(varphi_from_charpoly(&c4, 5), Err(F2Error::NotMonicOfDegree { n: 5 }));
        let bad = IntPolynomial::from_i64(&[0, 0, 0, 1, 1]);
        assert_eq!(varphi_from_charpoly(&bad, 4), Err(F2Error::OddIndexCoefficientOdd { index: 1 }));
    }
}
