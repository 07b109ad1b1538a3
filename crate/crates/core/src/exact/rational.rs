use std::fmt;
use std::ops::Index;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{BigIntMatrix, ExactError, Result};

/// Dense matrix of exact rationals. `BigRational` keeps every entry in
/// lowest terms with a positive denominator.
#[derive(Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigRational>,
}

impl RationalMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigRational>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(ExactError::DimensionMismatch { expected: (rows, cols), found: (entries.len(), 1) });
        }
        Ok(RationalMatrix { rows, cols, entries })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix { rows, cols, entries: vec![BigRational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = BigRational::one();
        }
        m
    }

    pub fn from_integer(m: &BigIntMatrix) -> Self {
        let entries = m.entries().iter().map(|x| BigRational::from_integer(x.clone())).collect();
        RationalMatrix { rows: m.rows(), cols: m.cols(), entries }
    }

    /// `numerators / denominator`, entrywise.
    pub fn scaled(numerators: &[&[i64]], denominator: i64) -> Result<Self> {
        let rows = numerators.len();
        let cols = numerators.first().map_or(0, |r| r.len());
        let mut entries = Vec::with_capacity(rows * cols);
        for r in numerators {
            if r.len() != cols {
                return Err(ExactError::DimensionMismatch { expected: (rows, cols), found: (rows, r.len()) });
            }
            if denominator == 0 {
                return Err(ExactError::ZeroDenominator);
            }
            entries.extend(r.iter().map(|&x| BigRational::new(x.into(), denominator.into())));
        }
        Ok(RationalMatrix { rows, cols, entries })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[BigRational] {
        &self.entries
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.entries[j * self.rows + i] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &RationalMatrix) -> Result<Self> {
        if self.cols != other.rows {
            return Err(ExactError::DimensionMismatch {
                expected: (self.cols, other.cols),
                found: (other.rows, other.cols),
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out.entries[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_int(&self, other: &BigIntMatrix) -> Result<Self> {
        self.mul(&RationalMatrix::from_integer(other))
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| if i == j { self[(i, j)].is_one() } else { self[(i, j)].is_zero() })
            })
    }

    /// The matrix as integers, if every entry is integral.
    pub fn to_integer(&self) -> Option<BigIntMatrix> {
        if !self.entries.iter().all(|x| x.is_integer()) {
            return None;
        }
        let entries = self.entries.iter().map(|x| x.numer().clone()).collect();
        BigIntMatrix::new(self.rows, self.cols, entries).ok()
    }

    pub fn scale_int(&self, k: &BigInt) -> Self {
        let k = BigRational::from_integer(k.clone());
        let entries = self.entries.iter().map(|x| x * &k).collect();
        RationalMatrix { rows: self.rows, cols: self.cols, entries }
    }
}

impl Index<(usize, usize)> for RationalMatrix {
    type Output = BigRational;

    fn index(&self, (i, j): (usize, usize)) -> &BigRational {
        &self.entries[i * self.cols + j]
    }
}

impl fmt::Display for RationalMatrix {
    /// One row per line, whitespace-separated `num/den` tokens.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> =
                (0..self.cols).map(|j| format!("{}/{}", self[(i, j)].numer(), self[(i, j)].denom())).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalMatrix {}x{}\n{}", self.rows, self.cols, self)
    }
}

/// Parses the rational-matrix text format: one row per line, whitespace
/// separated `num/den` tokens (a bare integer is accepted as `num/1`).
/// Blank lines and `#` comments are skipped.
pub fn parse_rational_matrix(text: &str) -> Result<RationalMatrix> {
    let mut rows: Vec<Vec<BigRational>> = Vec::new();
    for line in text.lines() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let row = line.split_whitespace().map(parse_rational_token).collect::<Result<Vec<_>>>()?;
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(ExactError::DimensionMismatch {
                    expected: (rows.len() + 1, first.len()),
                    found: (rows.len() + 1, row.len()),
                });
            }
        }
        rows.push(row);
    }
    let cols = rows.first().map_or(0, Vec::len);
    RationalMatrix::new(rows.len(), cols, rows.into_iter().flatten().collect())
}

fn parse_rational_token(tok: &str) -> Result<BigRational> {
    let bad = || ExactError::Parse(tok.to_string());
    let (num, den) = match tok.split_once('/') {
        Some((n, d)) => (n.parse::<BigInt>().map_err(|_| bad())?, d.parse::<BigInt>().map_err(|_| bad())?),
        None => (tok.parse::<BigInt>().map_err(|_| bad())?, BigInt::one()),
    };
    if den.is_zero() {
        return Err(ExactError::ZeroDenominator);
    }
    Ok(BigRational::new(num, den))
}

/// Exact inverse over the rationals by Gauss-Jordan elimination.
pub fn invert_rational(m: &BigIntMatrix) -> Result<RationalMatrix> {
    let n = m.require_square()?;
    let mut a = RationalMatrix::from_integer(m).entries;
    let mut inv = RationalMatrix::identity(n).entries;
    for col in 0..n {
        let Some(p) = (col..n).filter(|&r| !a[r * n + col].is_zero()).min_by_key(|&r| a[r * n + col].abs()) else {
            return Err(ExactError::Singular { rank: super::rank(m) });
        };
        if p != col {
            for j in 0..n {
                a.swap(p * n + j, col * n + j);
                inv.swap(p * n + j, col * n + j);
            }
        }
        let pivot_inv = a[col * n + col].recip();
        for j in 0..n {
            a[col * n + j] *= &pivot_inv;
            inv[col * n + j] *= &pivot_inv;
        }
        for r in 0..n {
            if r == col || a[r * n + col].is_zero() {
                continue;
            }
            let f = a[r * n + col].clone();
            for j in 0..n {
                let (x, y) = (&a[col * n + j] * &f, &inv[col * n + j] * &f);
                a[r * n + j] -= x;
                inv[r * n + j] -= y;
            }
        }
    }
    RationalMatrix::new(n, n, inv)
}
