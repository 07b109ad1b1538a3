use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{BigIntMatrix, Result};

/// Invariant factors `d_1 | d_2 | ... | d_n` of a square integer matrix.
///
/// Rank-deficient input yields trailing zeros. `det_sign` is the sign of
/// the determinant when it is nonzero.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmithNormalForm {
    #[serde(with = "crate::serde_bigint::vec")]
    pub invariant_factors: Vec<BigInt>,
    pub det_sign: Option<i8>,
}

impl SmithNormalForm {
    pub fn rank(&self) -> usize {
        self.invariant_factors.iter().take_while(|d| !d.is_zero()).count()
    }

    /// The last invariant factor `d_n`.
    pub fn last(&self) -> Option<&BigInt> {
        self.invariant_factors.last()
    }

    pub fn product(&self) -> BigInt {
        self.invariant_factors.iter().product()
    }

    pub fn is_divisibility_chain(&self) -> bool {
        self.invariant_factors
            .windows(2)
            .all(|w| w[1].is_zero() || (!w[0].is_zero() && (&w[1] % &w[0]).is_zero()))
    }

    /// The determinant reconstructed as `sign * prod d_i`.
    pub fn determinant(&self) -> BigInt {
        match self.det_sign {
            Some(s) => self.product() * s,
            None => BigInt::zero(),
        }
    }

    pub fn matches<T: Into<BigInt> + Copy>(&self, expected: &[T]) -> bool {
        self.invariant_factors.len() == expected.len()
            && self.invariant_factors.iter().zip(expected).all(|(a, &b)| *a == b.into())
    }
}

/// Smith normal form by unimodular row and column operations.
///
/// Each round moves a nonzero entry of least absolute value into pivot
/// position, reduces its row and column by division with remainder and
/// repeats until both are clear. If some remaining entry is not divisible
/// by the pivot its row is added to the pivot row and the round restarts.
pub fn smith_normal_form(m: &BigIntMatrix) -> Result<SmithNormalForm> {
    let n = m.require_square()?;
    let mut a = m.to_rows();
    let mut sign: i8 = 1;
    let mut t = 0;
    while t < n {
        let Some((pi, pj)) = smallest_nonzero(&a, t) else {
            break;
        };
        if pi != t {
            a.swap(pi, t);
            sign = -sign;
        }
        if pj != t {
            for row in a.iter_mut() {
                row.swap(pj, t);
            }
            sign = -sign;
        }
        let mut clean = true;
        let (top, rest) = a.split_at_mut(t + 1);
        let pivot_row = &mut top[t];
        for row in rest.iter_mut() {
            if row[t].is_zero() {
                continue;
            }
            let q = &row[t] / &pivot_row[t];
            for j in t..n {
                let d = &q * &pivot_row[j];
                row[j] -= d;
            }
            clean &= row[t].is_zero();
        }
        for j in t + 1..n {
            if a[t][j].is_zero() {
                continue;
            }
            let q = &a[t][j] / &a[t][t];
            for row in a[t..].iter_mut() {
                let d = &q * &row[t];
                row[j] -= d;
            }
            clean &= a[t][j].is_zero();
        }
        if !clean {
            continue;
        }
        let p = a[t][t].clone();
        let offender = (t + 1..n).find(|&i| a[i][t + 1..].iter().any(|x| !(x % &p).is_zero()));
        if let Some(i) = offender {
            let (top, rest) = a.split_at_mut(i);
            for (dst, src) in top[t][t..].iter_mut().zip(&rest[0][t..]) {
                *dst += src;
            }
            continue;
        }
        t += 1;
    }
    let mut factors = Vec::with_capacity(n);
    for (i, row) in a.iter().enumerate() {
        let d = &row[i];
        if d.is_negative() {
            sign = -sign;
        }
        factors.push(d.abs());
    }
    let singular = factors.iter().any(Zero::is_zero);
    debug_assert!(factors.iter().skip_while(|d| !d.is_zero()).all(Zero::is_zero));
    Ok(SmithNormalForm { invariant_factors: factors, det_sign: if singular { None } else { Some(sign) } })
}

fn smallest_nonzero(a: &[Vec<BigInt>], t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, BigInt)> = None;
    for (i, row) in a.iter().enumerate().skip(t) {
        for (j, x) in row.iter().enumerate().skip(t) {
            if x.is_zero() {
                continue;
            }
            let ax = x.abs();
            if best.as_ref().is_none_or(|(_, _, b)| ax < *b) {
                let unit = ax.is_one();
                best = Some((i, j, ax));
                if unit {
                    return best.map(|(i, j, _)| (i, j));
                }
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::determinant;

    #[test]
    fn diagonal_cases() {
        assert!(smith_normal_form(&BigIntMatrix::identity(4)).unwrap().matches(&[1, 1, 1, 1]));
        let s = smith_normal_form(&BigIntMatrix::diagonal(&[2, 3])).unwrap();
        assert!(s.matches(&[1, 6]));
        assert_eq!(s.det_sign, Some(1));
        let s = smith_normal_form(&BigIntMatrix::diagonal(&[4, -6, 0])).unwrap();
        assert!(s.matches(&[2, 12, 0]));
        assert_eq!(s.det_sign, None);
        assert_eq!(s.rank(), 2);
        assert!(smith_normal_form(&BigIntMatrix::zeros(3, 3)).unwrap().matches(&[0, 0, 0]));
    }

    #[test]
    fn sign_and_product() {
        let m = BigIntMatrix::from_rows(&[[2, 4, 4], [-6, 6, 12], [10, -4, -16]]).unwrap();
        let s = smith_normal_form(&m).unwrap();
        assert!(s.matches(&[2, 6, 12]));
        assert_eq!(s.determinant(), determinant(&m).unwrap());
        assert!(s.is_divisibility_chain());
    }
}
