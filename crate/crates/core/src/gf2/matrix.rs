use std::fmt;

use super::{F2Error, Result};
use crate::exact::BigIntMatrix;
use crate::graph::Graph;

/// Bit-packed matrix over GF(2). Rows occupy whole 64-bit words and the
/// padding bits past `cols` are always zero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct F2Matrix {
    rows: usize,
    cols: usize,
    words: usize,
    data: Vec<u64>,
}

impl F2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let words = cols.div_ceil(64);
        F2Matrix { rows, cols, words, data: vec![0; rows * words] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// The all-ones matrix.
    pub fn ones(rows: usize, cols: usize) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, true);
            }
        }
        m
    }

    /// Adjacency matrix of `g` over GF(2).
    pub fn from_graph(g: &Graph) -> Self {
        let n = g.n();
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.row_mut(i).copy_from_slice(g.row(i));
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        (self.data[i * self.words + j / 64] >> (j % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: bool) {
        let w = &mut self.data[i * self.words + j / 64];
        if v {
            *w |= 1 << (j % 64);
        } else {
            *w &= !(1 << (j % 64));
        }
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.words..(i + 1) * self.words]
    }

    fn row_mut(&mut self, i: usize) -> &mut [u64] {
        &mut self.data[i * self.words..(i + 1) * self.words]
    }

    /// All bits, row after row; the padding of each row is included.
    pub(crate) fn raw(&self) -> &[u64] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub(crate) fn require_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(F2Error::NotSquare { rows: self.rows, cols: self.cols })
        }
    }

    pub fn add(&self, other: &F2Matrix) -> Result<F2Matrix> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(F2Error::DimensionMismatch);
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a ^ b).collect();
        Ok(F2Matrix { data, ..*self })
    }

    /// Product by XOR-accumulating rows of `other` selected by the bits of
    /// each row of `self`.
    pub fn mul(&self, other: &F2Matrix) -> Result<F2Matrix> {
        if self.cols != other.rows {
            return Err(F2Error::DimensionMismatch);
        }
        let mut out = F2Matrix::zeros(self.rows, other.cols);
        let ow = other.words;
        for i in 0..self.rows {
            let dst = &mut out.data[i * ow..(i + 1) * ow];
            for (wi, &w) in self.row(i).iter().enumerate() {
                let mut w = w;
                while w != 0 {
                    let k = wi * 64 + w.trailing_zeros() as usize;
                    w &= w - 1;
                    for (d, s) in dst.iter_mut().zip(&other.data[k * ow..(k + 1) * ow]) {
                        *d ^= s;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> F2Matrix {
        let mut t = F2Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                if self.get(i, j) {
                    t.set(j, i, true);
                }
            }
        }
        t
    }

    pub fn is_symmetric(&self) -> bool {
        *self == self.transpose()
    }
}

impl fmt::Debug for F2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "F2Matrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            let line: String = (0..self.cols).map(|j| if self.get(i, j) { '1' } else { '0' }).collect();
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

/// Entrywise parity of an integer matrix.
pub fn reduce_mod2(m: &BigIntMatrix) -> F2Matrix {
    let mut out = F2Matrix::zeros(m.rows(), m.cols());
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            if m[(i, j)].bit(0) {
                out.set(i, j, true);
            }
        }
    }
    out
}

/// Rank by row reduction on the packed words.
pub fn f2_rank(m: &F2Matrix) -> usize {
    let mut rows: Vec<Vec<u64>> = (0..m.rows).map(|i| m.row(i).to_vec()).collect();
    let mut rank = 0;
    for col in 0..m.cols {
        let (wi, bit) = (col / 64, 1u64 << (col % 64));
        let Some(p) = (rank..rows.len()).find(|&r| rows[r][wi] & bit != 0) else {
            continue;
        };
        rows.swap(rank, p);
        let (top, rest) = rows.split_at_mut(rank + 1);
        let pivot = &top[rank];
        for r in rest.iter_mut() {
            if r[wi] & bit != 0 {
                for (a, b) in r[wi..].iter_mut().zip(&pivot[wi..]) {
                    *a ^= b;
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduction_and_rank() {
        let d = reduce_mod2(&BigIntMatrix::diagonal(&[2, 3]));
        let mut expected = F2Matrix::zeros(2, 2);
        expected.set(1, 1, true);
        assert_eq!(d, expected);
        for n in [1, 5, 64, 65, 130] {
            assert_eq!(f2_rank(&F2Matrix::identity(n)), n);
        }
        assert_eq!(f2_rank(&F2Matrix::ones(7, 9)), 1);
        assert_eq!(f2_rank(&F2Matrix::zeros(3, 3)), 0);
    }

    #[test]
    fn product_matches_naive() {
        let g = crate::graph::random_even_graph(70, 5, false).unwrap();
        let h = crate::graph::random_even_graph(70, 6, false).unwrap();
        let (a, b) = (F2Matrix::from_graph(&g), F2Matrix::from_graph(&h));
        let c = a.mul(&b).unwrap();
        for i in 0..70 {
            for j in 0..70 {
                let naive = (0..70).fold(false, |acc, k| acc ^ (a.get(i, k) & b.get(k, j)));
                assert_eq!(c.get(i, j), naive);
            }
        }
        assert!(F2Matrix::zeros(2, 3).mul(&F2Matrix::zeros(2, 3)).is_err());
    }
}
