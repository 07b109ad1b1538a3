//! Integer factorization utilities: 2-adic valuation, odd part and
//! square-freeness.
//!
//! Square-freeness is decided by factoring: a perfect-power check, trial
//! division by every prime below 10^6, then Pollard-Brent rho with
//! Miller-Rabin primality on the cofactor. Cofactors wider than the bit
//! budget, or that rho fails to split in its iteration allowance, yield
//! [`SquareFree::Unknown`].

use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::{ExactError, Result};

/// Default limit on the width of a cofactor handed to Pollard rho.
pub const DEFAULT_BIT_BUDGET: u64 = 256;

/// Trial division covers every prime below this bound.
pub const TRIAL_DIVISION_LIMIT: u32 = 1_000_000;

const RHO_ATTEMPTS: u64 = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SquareFree {
    True,
    False,
    Unknown,
}

impl From<bool> for SquareFree {
    fn from(b: bool) -> Self {
        if b {
            SquareFree::True
        } else {
            SquareFree::False
        }
    }
}

pub fn two_adic_valuation(z: &BigInt) -> Result<u64> {
    z.trailing_zeros().ok_or(ExactError::ZeroArgument)
}

/// `z / 2^v2(z)`, keeping the sign of `z`.
pub fn odd_part(z: &BigInt) -> Result<BigInt> {
    let v = two_adic_valuation(z)?;
    Ok(z / (BigInt::one() << v))
}

/// Square-freeness of `|z|` under the default bit budget; an undecided
/// input is an error rather than a guess.
pub fn is_squarefree(z: &BigInt) -> Result<bool> {
    match squarefree_status(z, DEFAULT_BIT_BUDGET)? {
        SquareFree::True => Ok(true),
        SquareFree::False => Ok(false),
        SquareFree::Unknown => Err(ExactError::FactorizationBudget { bits: z.bits() }),
    }
}

pub fn squarefree_status(z: &BigInt, budget_bits: u64) -> Result<SquareFree> {
    if z.is_zero() {
        return Err(ExactError::ZeroArgument);
    }
    let mut n = z.magnitude().clone();
    if perfect_power(&n).is_some() {
        return Ok(SquareFree::False);
    }
    // trial division
    for &p in small_primes() {
        let p = p as u64;
        if BigUint::from(p * p) > n {
            // what is left is 1 or a prime
            return Ok(SquareFree::True);
        }
        if (&n % p).is_zero() {
            n /= p;
            if (&n % p).is_zero() {
                return Ok(SquareFree::False);
            }
        }
    }
    if n.is_one() {
        return Ok(SquareFree::True);
    }
    if perfect_power(&n).is_some() {
        return Ok(SquareFree::False);
    }
    if is_probable_prime(&n) {
        return Ok(SquareFree::True);
    }
    // every prime factor exceeds the trial bound, so a composite below its
    // cube is a product of two primes, distinct since n is not a square
    let limit = BigUint::from(TRIAL_DIVISION_LIMIT);
    if n < &limit * &limit * &limit {
        return Ok(SquareFree::True);
    }
    if n.bits() > budget_bits {
        return Ok(SquareFree::Unknown);
    }
    let mut primes = Vec::new();
    if !prime_factors(n, &mut primes) {
        return Ok(SquareFree::Unknown);
    }
    primes.sort();
    Ok(primes.windows(2).all(|w| w[0] != w[1]).into())
}

/// Full factorization of `n` into `(prime, multiplicity)` pairs, ascending.
/// Cofactors past `budget_bits` that survive trial division are an error.
pub fn factorize(n: &BigUint, budget_bits: u64) -> Result<Vec<(BigUint, u32)>> {
    if n.is_zero() {
        return Err(ExactError::ZeroArgument);
    }
    let mut primes = Vec::new();
    let mut n = n.clone();
    for &p in small_primes() {
        let p = BigUint::from(p);
        if &p * &p > n {
            break;
        }
        while (&n % &p).is_zero() {
            n /= &p;
            primes.push(p.clone());
        }
    }
    if !n.is_one() {
        if n.bits() > budget_bits && !is_probable_prime(&n) {
            return Err(ExactError::FactorizationBudget { bits: n.bits() });
        }
        if !prime_factors(n.clone(), &mut primes) {
            return Err(ExactError::FactorizationBudget { bits: n.bits() });
        }
    }
    primes.sort();
    let mut out: Vec<(BigUint, u32)> = Vec::new();
    for p in primes {
        match out.last_mut() {
            Some((q, k)) if *q == p => *k += 1,
            _ => out.push((p, 1)),
        }
    }
    Ok(out)
}

fn small_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let limit = TRIAL_DIVISION_LIMIT as usize;
        let mut composite = vec![false; limit];
        let mut out = Vec::new();
        for i in 2..limit {
            if !composite[i] {
                out.push(i as u32);
                for j in (i * i..limit).step_by(i) {
                    composite[j] = true;
                }
            }
        }
        out
    })
}

/// `Some((root, k))` with `k >= 2` prime when `n = root^k`.
pub fn perfect_power(n: &BigUint) -> Option<(BigUint, u32)> {
    if n <= &BigUint::one() {
        return None;
    }
    let bits = n.bits() as u32;
    for k in 2..=bits {
        if !is_prime_u64(k as u64) {
            continue;
        }
        let r = n.nth_root(k);
        if r > BigUint::one() && r.pow(k) == *n {
            return Some((r, k));
        }
    }
    None
}

/// Appends the prime factors of `n > 1` (with repetition). Returns false
/// if rho gave up on some composite piece.
fn prime_factors(n: BigUint, out: &mut Vec<BigUint>) -> bool {
    if n.is_one() {
        return true;
    }
    if is_probable_prime(&n) {
        out.push(n);
        return true;
    }
    if let Some((root, k)) = perfect_power(&n) {
        let mut sub = Vec::new();
        if !prime_factors(root, &mut sub) {
            return false;
        }
        for _ in 0..k {
            out.extend(sub.iter().cloned());
        }
        return true;
    }
    let Some(d) = find_factor(&n) else {
        return false;
    };
    let rest = &n / &d;
    prime_factors(d, out) && prime_factors(rest, out)
}

fn find_factor(n: &BigUint) -> Option<BigUint> {
    if n.is_even() {
        return Some(BigUint::from(2u32));
    }
    if let Some(small) = n.to_u64() {
        return (1..=RHO_ATTEMPTS).find_map(|c| brent_u64(small, c, 1 << 26)).map(BigUint::from);
    }
    (1..=RHO_ATTEMPTS).find_map(|c| brent_big(n, c, 1 << 22))
}

/// Pollard-Brent on `x -> x^2 + c`, batching gcds over 128 steps.
fn brent_u64(n: u64, c: u64, max_iter: u64) -> Option<u64> {
    let f = |x: u64| add_mod_u64(mul_mod_u64(x, x, n), c % n, n);
    let (mut y, mut r, mut q) = (2u64, 1u64, 1u64);
    let mut g = 1;
    let (mut x, mut ys) = (0, 0);
    let mut iters = 0;
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0;
        while k < r && g == 1 {
            ys = y;
            for _ in 0..128.min(r - k) {
                y = f(y);
                q = mul_mod_u64(q, x.abs_diff(y), n);
            }
            g = q.gcd(&n);
            k += 128;
        }
        r *= 2;
        iters += r;
        if iters > max_iter {
            return None;
        }
    }
    if g == n {
        loop {
            ys = f(ys);
            g = x.abs_diff(ys).gcd(&n);
            if g > 1 {
                break;
            }
        }
    }
    (g != n).then_some(g)
}

fn brent_big(n: &BigUint, c: u64, max_iter: u64) -> Option<BigUint> {
    let c = BigUint::from(c);
    let f = |x: &BigUint| (x * x + &c) % n;
    let diff = |a: &BigUint, b: &BigUint| if a > b { a - b } else { b - a };
    let mut y = BigUint::from(2u32);
    let mut r = 1u64;
    let mut q = BigUint::one();
    let mut g = BigUint::one();
    let mut x = BigUint::zero();
    let mut ys = BigUint::zero();
    let mut iters = 0;
    while g.is_one() {
        x = y.clone();
        for _ in 0..r {
            y = f(&y);
        }
        let mut k = 0;
        while k < r && g.is_one() {
            ys = y.clone();
            for _ in 0..128.min(r - k) {
                y = f(&y);
                q = (q * diff(&x, &y)) % n;
            }
            g = q.gcd(n);
            k += 128;
        }
        r *= 2;
        iters += r;
        if iters > max_iter {
            return None;
        }
    }
    if &g == n {
        loop {
            ys = f(&ys);
            g = diff(&x, &ys).gcd(n);
            if !g.is_one() {
                break;
            }
        }
    }
    (&g != n).then_some(g)
}

#[inline]
fn mul_mod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

#[inline]
fn add_mod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 + b as u128) % m as u128) as u64
}

pub fn pow_mod_u64(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod_u64(r, b, m);
        }
        b = mul_mod_u64(b, b, m);
        e >>= 1;
    }
    r
}

const MR_BASES: [u64; 20] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71];

/// Deterministic Miller-Rabin for 64-bit inputs (bases 2..37 suffice).
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_BASES[..12] {
        if n % p == 0 {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'bases: for &a in &MR_BASES[..12] {
        let mut x = pow_mod_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod_u64(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// Miller-Rabin with the first twenty prime bases; exact below 2^64 and
/// probabilistic above.
pub fn is_probable_prime(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    for &p in &MR_BASES {
        if (n % p).is_zero() {
            return false;
        }
    }
    let one = BigUint::one();
    let nm1 = n - &one;
    let s = nm1.trailing_zeros().unwrap_or(0);
    let d = &nm1 >> s;
    'bases: for &a in &MR_BASES {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x == one || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == nm1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}
