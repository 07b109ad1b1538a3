//! Walk matrices `W = [e, Ae, ..., A^{n-1}e]`, the halved matrix `W̄` for
//! even-degree graphs, the compressed matrix `Ŵ` for even order, and the
//! mod-4 congruences that make `Ŵ` integral.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::exact::{char_poly, determinant, BigIntMatrix, IntPolynomial};
use crate::gf2::{decompose_phi_mod2, poly_mod2};
use crate::graph::Graph;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WalkError {
    #[error("graph has odd-degree vertices {vertices:?}")]
    OddDegree { vertices: Vec<usize> },
    #[error("compressed walk matrix needs even order, got n = {n}")]
    OddOrder { n: usize },
    #[error("column {column} of the compressed walk matrix is not integral")]
    NonIntegralColumn { column: usize },
    #[error("determinant relation failed: det W = {det_w}, det of derived matrix = {det_derived}")]
    DeterminantRelation { det_w: BigInt, det_derived: BigInt },
}

pub type Result<T> = std::result::Result<T, WalkError>;

/// The walk matrix and, where defined, its halved and compressed variants
/// with their determinants.
#[derive(Debug, Clone, Serialize)]
pub struct WalkMatrices {
    #[serde(skip)]
    pub w: BigIntMatrix,
    #[serde(skip)]
    pub wbar: Option<BigIntMatrix>,
    #[serde(skip)]
    pub what: Option<BigIntMatrix>,
    #[serde(rename = "detW", with = "crate::serde_bigint")]
    pub det_w: BigInt,
    #[serde(rename = "detWbar", with = "crate::serde_bigint::option")]
    pub det_wbar: Option<BigInt>,
    #[serde(rename = "detWhat", with = "crate::serde_bigint::option")]
    pub det_what: Option<BigInt>,
}

/// `e, Ae, ..., A^{len-1}e`.
pub fn walk_vectors(g: &Graph, len: usize) -> Vec<Vec<BigInt>> {
    let n = g.n();
    let mut out = Vec::with_capacity(len);
    let mut v = vec![BigInt::one(); n];
    for _ in 0..len {
        let next = (0..n)
            .map(|i| g.neighbors(i).fold(BigInt::zero(), |acc, j| acc + &v[j]))
            .collect();
        out.push(std::mem::replace(&mut v, next));
    }
    out
}

pub fn walk_matrix(g: &Graph) -> BigIntMatrix {
    BigIntMatrix::from_columns(&walk_vectors(g, g.n())).expect("columns share length n")
}

fn require_even_degrees(g: &Graph) -> Result<()> {
    if g.all_degrees_even() {
        Ok(())
    } else {
        Err(WalkError::OddDegree { vertices: g.odd_vertices() })
    }
}

fn halve(v: &[BigInt]) -> Vec<BigInt> {
    v.iter().map(|x| x >> 1u32).collect()
}

/// `[e, Ae/2, ..., A^{n-1}e/2]`.
pub fn reduced_walk_matrix(g: &Graph) -> Result<BigIntMatrix> {
    require_even_degrees(g)?;
    let cols: Vec<Vec<BigInt>> = walk_vectors(g, g.n())
        .into_iter()
        .enumerate()
        .map(|(j, c)| if j == 0 { c } else { halve(&c) })
        .collect();
    Ok(BigIntMatrix::from_columns(&cols).expect("columns share length n"))
}

/// Integer coefficients `c_2, c_4, ...` of the characteristic polynomial,
/// giving `x^{n/2} + c_2 x^{n/2-1} + ... + c_n` for even `n` and
/// `x^{(n+1)/2} + c_2 x^{(n-1)/2} + ... + c_{n-1} x` for odd `n`.
pub fn varphi_integer_lift(phi: &IntPolynomial, n: usize) -> IntPolynomial {
    let top = n.div_ceil(2);
    let mut coeffs = vec![BigInt::zero(); top + 1];
    coeffs[top] = BigInt::one();
    for m in 1..=n / 2 {
        coeffs[top - m] = phi.char_coeff(2 * m);
    }
    IntPolynomial::new(coeffs)
}

/// `p(A) A^shift e` from precomputed walk vectors.
fn poly_walk(p: &IntPolynomial, shift: usize, walks: &[Vec<BigInt>]) -> Vec<BigInt> {
    let n = walks[0].len();
    let mut acc = vec![BigInt::zero(); n];
    for (d, c) in p.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        for (a, w) in acc.iter_mut().zip(&walks[d + shift]) {
            *a += c * w;
        }
    }
    acc
}

/// `[e, Ae/2, ..., A^{n/2}e/2, varphi(A)Ae/4, ..., varphi(A)A^{n/2-1}e/4]`
/// for even `n`, with `varphi` the integer lift.
pub fn hat_walk_matrix(g: &Graph) -> Result<BigIntMatrix> {
    let n = g.n();
    if n % 2 == 1 {
        return Err(WalkError::OddOrder { n });
    }
    require_even_degrees(g)?;
    let phi = char_poly(&BigIntMatrix::adjacency(g)).expect("adjacency matrix is square");
    let varphi = varphi_integer_lift(&phi, n);
    let walks = walk_vectors(g, n);
    let half = n / 2;
    let mut cols = Vec::with_capacity(n);
    cols.push(walks[0].clone());
    for w in &walks[1..=half] {
        cols.push(halve(w));
    }
    for i in 1..half {
        let v = poly_walk(&varphi, i, &walks);
        if v.iter().any(|x| !x.is_multiple_of(&BigInt::from(4))) {
            return Err(WalkError::NonIntegralColumn { column: cols.len() });
        }
        cols.push(v.iter().map(|x| x >> 2u32).collect());
    }
    Ok(BigIntMatrix::from_columns(&cols).expect("columns share length n"))
}

/// The mod-4 congruence behind the integrality of `Ŵ`:
/// `varphi(A)Ae ≡ 0` for even `n`; for odd `n`, `φ̃(A)e ≡ 0` with
/// `φ̃ = varphi - eᵀAe` when `x` divides `φ mod 2` exactly once and
/// `φ̃ = varphi` otherwise.
pub fn mod4_congruence_check(g: &Graph) -> Result<bool> {
    require_even_degrees(g)?;
    let n = g.n();
    let phi = char_poly(&BigIntMatrix::adjacency(g)).expect("adjacency matrix is square");
    let mut varphi = varphi_integer_lift(&phi, n);
    let walks = walk_vectors(g, n + 2);
    let shift = if n % 2 == 0 {
        1
    } else {
        let (k, _) = decompose_phi_mod2(&poly_mod2(&phi)).expect("even-degree characteristic polynomial decomposes");
        if k == 1 {
            let mut coeffs = varphi.coeffs().to_vec();
            coeffs[0] -= BigInt::from(2 * g.edge_count());
            varphi = IntPolynomial::new(coeffs);
        }
        0
    };
    let four = BigInt::from(4);
    Ok(poly_walk(&varphi, shift, &walks).iter().all(|x| x.is_multiple_of(&four)))
}

/// `W`, `W̄` and `Ŵ` with determinants, checking
/// `det W = 2^{n-1} det W̄` and `det W = 2^{3n/2-2} det Ŵ`.
pub fn walk_matrices(g: &Graph) -> Result<WalkMatrices> {
    let n = g.n();
    let w = walk_matrix(g);
    let det_w = determinant(&w).expect("walk matrix is square");
    let (mut wbar, mut det_wbar, mut what, mut det_what) = (None, None, None, None);
    if g.all_degrees_even() {
        let m = reduced_walk_matrix(g)?;
        let d = determinant(&m).expect("square");
        if &d << (n - 1) != det_w {
            return Err(WalkError::DeterminantRelation { det_w, det_derived: d });
        }
        wbar = Some(m);
        det_wbar = Some(d);
        if n % 2 == 0 {
            let m = hat_walk_matrix(g)?;
            let d = determinant(&m).expect("square");
            if &d << (3 * n / 2 - 2) != det_w {
                return Err(WalkError::DeterminantRelation { det_w, det_derived: d });
            }
            what = Some(m);
            det_what = Some(d);
        }
    }
    Ok(WalkMatrices { w, wbar, what, det_w, det_wbar, det_what })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{smith_normal_form, two_adic_valuation};
    use crate::fixtures::example1_g;
    use crate::gf2::{f2_rank, reduce_mod2};

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn small_walk_matrices() {
        let k3 = Graph::complete(3).unwrap();
        let w = walk_matrix(&k3);
        assert_eq!(w.row(0), ints(&[1, 2, 4]).as_slice());
        assert!(determinant(&w).unwrap().is_zero());
        let wbar = reduced_walk_matrix(&k3).unwrap();
        assert_eq!(wbar.column(1), ints(&[1, 1, 1]));
        assert_eq!(wbar.column(2), ints(&[2, 2, 2]));
        let empty = walk_matrix(&Graph::empty(3).unwrap());
        assert_eq!(empty.column(0), ints(&[1, 1, 1]));
        assert!(empty.column(1).iter().chain(&empty.column(2)).all(|x| x.is_zero()));
        assert!(reduced_walk_matrix(&Graph::path(3).unwrap()).is_err());
    }

    #[test]
    fn example1_determinants() {
        let g = example1_g();
        let m = walk_matrices(&g).unwrap();
        // 2^{-13} det W = -43
        assert_eq!(m.det_w, BigInt::from(-43) << 13);
        assert_eq!(m.det_wbar, Some(BigInt::from(-688)));
        assert_eq!(m.det_what, Some(BigInt::from(-43)));
        assert_eq!(two_adic_valuation(&m.det_w).unwrap(), 13);
        let snf = smith_normal_form(m.wbar.as_ref().unwrap()).unwrap();
        assert!(snf.matches(&[1, 1, 1, 1, 1, 1, 2, 2, 2, 86]));
        assert_eq!(f2_rank(&reduce_mod2(m.wbar.as_ref().unwrap())), 6);
        assert!(mod4_congruence_check(&g).unwrap());
    }

    #[test]
    fn hat_matrix_edge_cases() {
        let c4 = Graph::cycle(4).unwrap();
        let m = walk_matrices(&c4).unwrap();
        assert_eq!(m.det_what, Some(BigInt::zero()));
        assert!(m.det_w.is_zero());
        assert_eq!(hat_walk_matrix(&Graph::complete(3).unwrap()), Err(WalkError::OddOrder { n: 3 }));
    }

    #[test]
    fn triangle_congruence() {
        // φ̃(A)e = (J + I)e - 3·2e - 6e = -8e
        let k3 = Graph::complete(3).unwrap();
        let phi = char_poly(&BigIntMatrix::adjacency(&k3)).unwrap();
        assert_eq!(varphi_integer_lift(&phi, 3), IntPolynomial::from_i64(&[0, -3, 1]));
        let walks = walk_vectors(&k3, 5);
        let tilde = IntPolynomial::from_i64(&[-6, -3, 1]);
        assert_eq!(poly_walk(&tilde, 0, &walks), ints(&[-8, -8, -8]));
        assert!(mod4_congruence_check(&k3).unwrap());
    }

    #[test]
    fn random_even_graphs_satisfy_relations() {
        for seed in 0..40 {
            let n = 2 + (seed as usize % 15);
            let g = crate::graph::random_even_graph(n, seed, false).unwrap();
            let m = walk_matrices(&g).unwrap();
            assert!(mod4_congruence_check(&g).unwrap(), "seed {seed}");
            assert_eq!(f2_rank(&reduce_mod2(&m.w)), 1);
            if !m.det_w.is_zero() {
                assert!(two_adic_valuation(&m.det_w).unwrap() >= ((3 * n - 3) / 2) as u64);
            }
        }
    }
}
