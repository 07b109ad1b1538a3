//! Linear algebra and polynomial arithmetic over GF(2), and the
//! annihilation checks for adjacency matrices of even-degree graphs.

mod matrix;
mod poly;

pub use matrix::{f2_rank, reduce_mod2, F2Matrix};
pub use poly::{decompose_phi_mod2, f2_poly_sqrt, poly_mod2, varphi_from_charpoly, F2Polynomial};

use serde::Serialize;
use thiserror::Error;

use crate::exact::{char_poly, BigIntMatrix};
use crate::graph::Graph;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum F2Error {
    #[error("polynomial is not a square over GF(2): odd exponent {exponent}")]
    NotASquare { exponent: usize },
    #[error("the zero polynomial has no decomposition")]
    ZeroPolynomial,
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("characteristic polynomial must be monic of degree {n}")]
    NotMonicOfDegree { n: usize },
    #[error("coefficient c_{index} is odd; expected every odd-index coefficient to be even")]
    OddIndexCoefficientOdd { index: usize },
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix dimensions do not match")]
    DimensionMismatch,
    #[error("graph has odd-degree vertices {vertices:?}")]
    OddDegree { vertices: Vec<usize> },
}

pub type Result<T> = std::result::Result<T, F2Error>;

/// Adjacency matrix of `g` over GF(2).
pub fn adjacency_mod2(g: &Graph) -> F2Matrix {
    F2Matrix::from_graph(g)
}

/// `p(A)` by Horner's rule.
pub fn f2_eval_poly_at_matrix(p: &F2Polynomial, a: &F2Matrix) -> Result<F2Matrix> {
    let n = a.require_square()?;
    let Some(d) = p.degree() else {
        return Ok(F2Matrix::zeros(n, n));
    };
    let id = F2Matrix::identity(n);
    let mut acc = F2Matrix::zeros(n, n);
    for i in (0..=d).rev() {
        acc = acc.mul(a)?;
        if p.coeff(i) {
            acc = acc.add(&id)?;
        }
    }
    Ok(acc)
}

/// Minimal polynomial: the first linear dependence in `I, A, A^2, ...`,
/// each power flattened to a vector of `n^2` bits.
pub fn f2_min_poly(a: &F2Matrix) -> Result<F2Polynomial> {
    let n = a.require_square()?;
    if n == 0 {
        return Ok(F2Polynomial::one());
    }
    // Reduced basis rows with their pivot bit and the combination of powers
    // they represent.
    let mut basis: Vec<(usize, Vec<u64>, F2Polynomial)> = Vec::new();
    let mut power = F2Matrix::identity(n);
    for i in 0..=n {
        let mut v = power.raw().to_vec();
        let mut combo = F2Polynomial::monomial(i);
        for (pivot, row, c) in &basis {
            if (v[pivot / 64] >> (pivot % 64)) & 1 == 1 {
                for (x, y) in v.iter_mut().zip(row) {
                    *x ^= y;
                }
                combo = combo.add(c);
            }
        }
        match v.iter().position(|&w| w != 0) {
            None => return Ok(combo),
            Some(wi) => {
                let pivot = wi * 64 + v[wi].trailing_zeros() as usize;
                basis.push((pivot, v, combo));
            }
        }
        power = power.mul(a)?;
    }
    unreachable!("Cayley-Hamilton bounds the degree of the minimal polynomial by n")
}

/// Outcome of the GF(2) annihilation checks for one even-degree graph.
#[derive(Debug, Clone, Serialize)]
pub struct AnnihilationReport {
    pub n: usize,
    pub n_is_even: bool,
    pub is_eulerian: bool,
    pub varphi: F2Polynomial,
    /// Multiplicity of `x` in the characteristic polynomial mod 2.
    pub k: usize,
    pub phi1: F2Polynomial,
    pub varphi_at_a_is_zero: bool,
    pub minpoly: F2Polynomial,
    pub minpoly_divides_varphi: bool,
    /// Odd `n` with `k >= 3` odd.
    pub theorem9_applicable: bool,
    /// Whether `x^{(k-1)/2} phi1` annihilates `A`.
    pub theorem9_holds: Option<bool>,
    /// Odd `n` with `k = 1`: whether `phi1(A) = J` and `rank_2 A = n - 1`.
    pub remark2_holds: Option<bool>,
    pub phi1_at_a_is_all_ones: Option<bool>,
    pub rank2_a: Option<usize>,
}

impl AnnihilationReport {
    /// True when every check that applies came out as predicted.
    pub fn all_hold(&self) -> bool {
        self.varphi_at_a_is_zero
            && self.minpoly_divides_varphi
            && self.theorem9_holds != Some(false)
            && self.remark2_holds != Some(false)
    }
}

pub fn check_annihilation(g: &Graph) -> Result<AnnihilationReport> {
    if !g.all_degrees_even() {
        return Err(F2Error::OddDegree { vertices: g.odd_vertices() });
    }
    let n = g.n();
    let phi = char_poly(&BigIntMatrix::adjacency(g)).expect("adjacency matrix is square");
    let varphi = varphi_from_charpoly(&phi, n)?;
    let (k, phi1) = decompose_phi_mod2(&poly_mod2(&phi))?;
    let a = adjacency_mod2(g);
    let varphi_at_a_is_zero = f2_eval_poly_at_matrix(&varphi, &a)?.is_zero();
    let minpoly = f2_min_poly(&a)?;
    let minpoly_divides_varphi = minpoly.divides(&varphi)?;

    let odd_n = n % 2 == 1;
    let theorem9_applicable = odd_n && k >= 3 && k % 2 == 1;
    let theorem9_holds = if theorem9_applicable {
        let p = phi1.shl((k - 1) / 2);
        Some(f2_eval_poly_at_matrix(&p, &a)?.is_zero())
    } else {
        None
    };
    let (mut remark2_holds, mut phi1_at_a_is_all_ones, mut rank2_a) = (None, None, None);
    if odd_n && k == 1 {
        let is_j = f2_eval_poly_at_matrix(&phi1, &a)? == F2Matrix::ones(n, n);
        let rank = f2_rank(&a);
        phi1_at_a_is_all_ones = Some(is_j);
        rank2_a = Some(rank);
        remark2_holds = Some(is_j && rank + 1 == n);
    }

    Ok(AnnihilationReport {
        n,
        n_is_even: !odd_n,
        is_eulerian: g.is_eulerian(),
        varphi,
        k,
        phi1,
        varphi_at_a_is_zero,
        minpoly,
        minpoly_divides_varphi,
        theorem9_applicable,
        theorem9_holds,
        remark2_holds,
        phi1_at_a_is_all_ones,
        rank2_a,
    })
}
