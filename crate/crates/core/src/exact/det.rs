//! Fraction-free determinants and characteristic polynomials.
//!
//! [`char_poly`] runs Hessenberg reduction modulo word-sized primes and
//! lifts the coefficients by Chinese remaindering against an a-priori
//! coefficient bound. Two slower exact routes are kept alongside it:
//! evaluation of `det(kI - A)` at `k = 0..=n` followed by Newton
//! interpolation, and the Faddeev-LeVerrier recurrence.

use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::{factor, BigIntMatrix, IntPolynomial, Result};

/// Determinant by Bareiss elimination; every division is exact.
pub fn determinant(m: &BigIntMatrix) -> Result<BigInt> {
    let n = m.require_square()?;
    let mut a = m.to_rows();
    Ok(bareiss(&mut a, n))
}

fn bareiss(a: &mut [Vec<BigInt>], n: usize) -> BigInt {
    if n == 0 {
        return BigInt::one();
    }
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        let Some(p) = (k..n).filter(|&i| !a[i][k].is_zero()).min_by_key(|&i| a[i][k].bits()) else {
            return BigInt::zero();
        };
        if p != k {
            a.swap(p, k);
            negate = !negate;
        }
        let (top, rest) = a.split_at_mut(k + 1);
        let pivot_row = &top[k];
        for row in rest.iter_mut() {
            for j in k + 1..n {
                let t = &row[j] * &pivot_row[k] - &row[k] * &pivot_row[j];
                row[j] = if prev.is_one() { t } else { t / &prev };
            }
            row[k] = BigInt::zero();
        }
        prev = pivot_row[k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if negate {
        -d
    } else {
        d
    }
}

/// Rank over the rationals via fraction-free row reduction.
pub fn rank(m: &BigIntMatrix) -> usize {
    let mut a = m.to_rows();
    let (rows, cols) = (m.rows(), m.cols());
    let mut r = 0;
    let mut prev = BigInt::one();
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(p, r);
        let (top, rest) = a.split_at_mut(r + 1);
        let pivot_row = &top[r];
        for row in rest.iter_mut() {
            for j in c + 1..cols {
                let t = &row[j] * &pivot_row[c] - &row[c] * &pivot_row[j];
                row[j] = t / &prev;
            }
            row[c] = BigInt::zero();
        }
        prev = pivot_row[c].clone();
        r += 1;
    }
    r
}

/// Characteristic polynomial `det(xI - M)`, monic of degree `n`.
pub fn char_poly(m: &BigIntMatrix) -> Result<IntPolynomial> {
    let n = m.require_square()?;
    let p = char_poly_multimodular(m, n);
    #[cfg(debug_assertions)]
    if n <= 16 {
        debug_assert_eq!(p, char_poly_by_interpolation(m)?, "char_poly routes disagree");
    }
    Ok(p)
}

/// `det(xI - M)` from its values at `x = 0..=n` by Newton interpolation.
pub fn char_poly_by_interpolation(m: &BigIntMatrix) -> Result<IntPolynomial> {
    let n = m.require_square()?;
    let values: Vec<BigInt> = (0..=n)
        .map(|k| {
            let mut a = m.to_rows();
            for (i, row) in a.iter_mut().enumerate() {
                for x in row.iter_mut() {
                    *x = -&*x;
                }
                row[i] += k;
            }
            bareiss(&mut a, n)
        })
        .collect();
    // divided differences over the nodes 0..=n; with integer nodes and an
    // integer polynomial every quotient is exact
    let mut dd = values;
    for level in 1..=n {
        for i in (level..=n).rev() {
            let diff = &dd[i] - &dd[i - 1];
            debug_assert!((&diff % level).is_zero());
            dd[i] = diff / level;
        }
    }
    // expand sum dd[k] * prod_{i<k} (x - i) in Horner form
    let mut coeffs = vec![BigInt::zero(); n + 1];
    coeffs[0] = dd[n].clone();
    let mut deg = 0;
    for k in (0..n).rev() {
        // coeffs *= (x - k)
        deg += 1;
        for d in (0..=deg).rev() {
            let shifted = if d > 0 { coeffs[d - 1].clone() } else { BigInt::zero() };
            coeffs[d] = shifted - &coeffs[d] * k;
        }
        coeffs[0] += &dd[k];
    }
    Ok(IntPolynomial::new(coeffs))
}

/// Faddeev-LeVerrier: `M_1 = I`, `c_k = -tr(A M_k) / k`,
/// `M_{k+1} = A M_k + c_k I`, with exact integer division at every step.
pub fn char_poly_faddeev_leverrier(m: &BigIntMatrix) -> Result<IntPolynomial> {
    let n = m.require_square()?;
    let mut coeffs = vec![BigInt::zero(); n + 1];
    coeffs[n] = BigInt::one();
    let mut mk = BigIntMatrix::identity(n);
    for k in 1..=n {
        let am = m.mul(&mk)?;
        let trace: BigInt = (0..n).map(|i| am[(i, i)].clone()).sum();
        debug_assert!((&trace % k).is_zero());
        let c = -(trace / k);
        mk = am;
        for i in 0..n {
            mk[(i, i)] += &c;
        }
        coeffs[n - k] = c;
    }
    Ok(IntPolynomial::new(coeffs))
}

/// Faddeev-LeVerrier in machine integers for the exhaustive small-order
/// oracles. Returns `None` on overflow. Coefficients are lowest degree
/// first.
pub fn char_poly_i64(a: &[Vec<i64>]) -> Option<Vec<i64>> {
    let n = a.len();
    let mut coeffs = vec![0i64; n + 1];
    coeffs[n] = 1;
    let mut mk: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| (i == j) as i64).collect()).collect();
    let mut am = vec![vec![0i64; n]; n];
    for k in 1..=n {
        for i in 0..n {
            for j in 0..n {
                let mut s = 0i64;
                for (l, &x) in a[i].iter().enumerate() {
                    if x != 0 {
                        s = s.checked_add(x.checked_mul(mk[l][j])?)?;
                    }
                }
                am[i][j] = s;
            }
        }
        let trace = (0..n).try_fold(0i64, |t, i| t.checked_add(am[i][i]))?;
        let c = -(trace / k as i64);
        for i in 0..n {
            mk[i].copy_from_slice(&am[i]);
            mk[i][i] = mk[i][i].checked_add(c)?;
        }
        coeffs[n - k] = c;
    }
    Some(coeffs)
}

const MODULUS_BITS: u32 = 62;

fn moduli() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| primes_below(1 << MODULUS_BITS, 64))
}

fn primes_below(start: u64, count: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(count);
    let mut c = start - 1;
    if c % 2 == 0 {
        c -= 1;
    }
    while out.len() < count {
        if factor::is_prime_u64(c) {
            out.push(c);
        }
        c -= 2;
    }
    out
}

/// Squared bound `4^n * prod_i max(1, |row_i|^2)`; every coefficient of the
/// characteristic polynomial is at most its square root in absolute value
/// (binomial count of principal minors times Hadamard's inequality).
fn coefficient_bound_sq(m: &BigIntMatrix, n: usize) -> BigUint {
    let mut b = BigUint::one() << (2 * n);
    for i in 0..n {
        let norm: BigInt = m.row(i).iter().map(|x| x * x).sum();
        if norm > BigInt::one() {
            b *= norm.to_biguint().expect("norm is nonnegative");
        }
    }
    b
}

fn char_poly_multimodular(m: &BigIntMatrix, n: usize) -> IntPolynomial {
    let bound_sq = coefficient_bound_sq(m, n);
    // need modulus M > 2B, i.e. M^2 > 4 B^2
    let target = bound_sq << 2usize;
    let mut primes: Vec<u64> = Vec::new();
    let mut modulus = BigUint::one();
    let mut extra = moduli().iter().copied().chain({
        let mut next = *moduli().last().unwrap();
        std::iter::from_fn(move || {
            next = primes_below(next, 1)[0];
            Some(next)
        })
    });
    while &modulus * &modulus <= target {
        let p = extra.next().expect("unbounded prime supply");
        primes.push(p);
        modulus *= p;
    }
    let residues: Vec<Vec<u64>> = primes.iter().map(|&p| char_poly_mod_p(m, n, p)).collect();
    let half = &modulus >> 1;
    let coeffs = (0..=n)
        .map(|d| {
            let mut x = BigUint::zero();
            let mut prod = BigUint::one();
            for (r, &p) in residues.iter().zip(&primes) {
                // Garner step: x += prod * ((r - x) * prod^{-1} mod p)
                let xm = (&x % p).to_u64().unwrap();
                let pm = (&prod % p).to_u64().unwrap();
                let diff = sub_mod(r[d], xm, p);
                let t = mul_mod(diff, inv_mod(pm, p), p);
                x += &prod * t;
                prod *= p;
            }
            if x > half {
                BigInt::from_biguint(Sign::Minus, &modulus - x)
            } else {
                BigInt::from_biguint(Sign::Plus, x)
            }
        })
        .collect();
    IntPolynomial::new(coeffs)
}

#[inline]
fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

#[inline]
fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + (p - b)
    }
}

#[inline]
fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

fn inv_mod(a: u64, p: u64) -> u64 {
    factor::pow_mod_u64(a, p - 2, p)
}

/// Characteristic polynomial modulo `p` (< 2^62) via reduction to upper
/// Hessenberg form and the standard determinant recurrence.
fn char_poly_mod_p(m: &BigIntMatrix, n: usize, p: u64) -> Vec<u64> {
    let pb = BigInt::from(p);
    let mut h: Vec<Vec<u64>> = (0..n)
        .map(|i| m.row(i).iter().map(|x| x.mod_floor(&pb).to_u64().unwrap()).collect())
        .collect();
    for col in 0..n.saturating_sub(2) {
        let r = col + 1;
        let Some(piv) = (r..n).find(|&i| h[i][col] != 0) else {
            continue;
        };
        if piv != r {
            h.swap(piv, r);
            for row in h.iter_mut() {
                row.swap(piv, r);
            }
        }
        let inv = inv_mod(h[r][col], p);
        for i in r + 1..n {
            if h[i][col] == 0 {
                continue;
            }
            let u = mul_mod(h[i][col], inv, p);
            // row_i -= u * row_r, then col_r += u * col_i (similarity)
            let (top, bottom) = h.split_at_mut(i);
            let (src, dst) = (&top[r], &mut bottom[0]);
            for j in col..n {
                dst[j] = sub_mod(dst[j], mul_mod(u, src[j], p), p);
            }
            for row in h.iter_mut() {
                row[r] = add_mod(row[r], mul_mod(u, row[i], p), p);
            }
        }
    }
    // polys[k] = charpoly of the leading k x k block, lowest degree first
    let mut polys: Vec<Vec<u64>> = vec![vec![1]];
    for k in 1..=n {
        let prev = &polys[k - 1];
        let mut next = vec![0u64; k + 1];
        let diag = h[k - 1][k - 1];
        for (d, &c) in prev.iter().enumerate() {
            next[d + 1] = add_mod(next[d + 1], c, p);
            next[d] = sub_mod(next[d], mul_mod(diag, c, p), p);
        }
        let mut t = 1u64;
        for i in 1..k {
            t = mul_mod(t, h[k - i][k - i - 1], p);
            if t == 0 {
                break;
            }
            let f = mul_mod(t, h[k - i - 1][k - 1], p);
            if f != 0 {
                for (d, &c) in polys[k - i - 1].iter().enumerate() {
                    next[d] = sub_mod(next[d], mul_mod(f, c, p), p);
                }
            }
        }
        polys.push(next);
    }
    polys.pop().unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;

    #[test]
    fn determinant_basics() {
        assert_eq!(determinant(&BigIntMatrix::identity(5)).unwrap(), BigInt::from(1));
        assert_eq!(determinant(&BigIntMatrix::diagonal(&[2, 3])).unwrap(), BigInt::from(6));
        let swap = BigIntMatrix::from_rows(&[[0, 1], [1, 0]]).unwrap();
        assert_eq!(determinant(&swap).unwrap(), BigInt::from(-1));
        let sing = BigIntMatrix::from_rows(&[[1, 2], [2, 4]]).unwrap();
        assert!(determinant(&sing).unwrap().is_zero());
        assert!(determinant(&BigIntMatrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn rank_basics() {
        assert_eq!(rank(&BigIntMatrix::zeros(3, 3)), 0);
        assert_eq!(rank(&BigIntMatrix::identity(4)), 4);
        let m = BigIntMatrix::from_rows(&[[0, 2, 4], [0, 1, 2], [1, 0, 0]]).unwrap();
        assert_eq!(rank(&m), 2);
    }

    #[test]
    fn char_poly_small_cases() {
        let k3 = BigIntMatrix::adjacency(&Graph::complete(3).unwrap());
        let expected = IntPolynomial::from_i64(&[-2, -3, 0, 1]);
        assert_eq!(char_poly(&k3).unwrap(), expected);
        assert_eq!(char_poly_by_interpolation(&k3).unwrap(), expected);
        assert_eq!(char_poly_faddeev_leverrier(&k3).unwrap(), expected);
        let z = BigIntMatrix::zeros(4, 4);
        assert_eq!(char_poly(&z).unwrap(), IntPolynomial::monomial(4));
        assert_eq!(char_poly(&BigIntMatrix::zeros(0, 0)).unwrap(), IntPolynomial::monomial(0));
        let c4 = BigIntMatrix::adjacency(&Graph::cycle(4).unwrap());
        assert_eq!(char_poly(&c4).unwrap(), IntPolynomial::from_i64(&[0, 0, -4, 0, 1]));
    }

    #[test]
    fn char_poly_routes_agree_on_non_symmetric_input() {
        let m = BigIntMatrix::from_rows(&[[3, -7, 0, 2], [1, 0, 5, -1], [-4, 2, 2, 9], [0, 8, -3, 1]]).unwrap();
        let a = char_poly_multimodular(&m, 4);
        assert_eq!(a, char_poly_by_interpolation(&m).unwrap());
        assert_eq!(a, char_poly_faddeev_leverrier(&m).unwrap());
        let small: Vec<Vec<i64>> = m.to_rows().iter().map(|r| r.iter().map(|x| x.to_i64().unwrap()).collect()).collect();
        assert_eq!(IntPolynomial::from_i64(&char_poly_i64(&small).unwrap()), a);
    }

    #[test]
    fn large_entries_need_many_moduli() {
        let big = BigInt::from(1u64 << 60) * BigInt::from(1u64 << 60);
        let m = BigIntMatrix::new(2, 2, vec![big.clone(), BigInt::from(1), BigInt::from(-3), -big.clone()]).unwrap();
        let expected = IntPolynomial::new(vec![-&big * &big + 3, BigInt::zero(), BigInt::one()]);
        assert_eq!(char_poly(&m).unwrap(), expected);
    }
}
