//! Regular rational orthogonal matrices relating generalized cospectral
//! graphs, and their level.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::exact::{invert_rational, BigIntMatrix, ExactError, RationalMatrix};
use crate::graph::Graph;
use crate::walk::walk_matrix;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrthoError {
    #[error("graphs have different orders {0} and {1}")]
    OrderMismatch(usize, usize),
    #[error("walk matrix of the second graph is singular (rank {rank})")]
    Singular { rank: usize },
    #[error("constructed matrix fails {0}")]
    IdentityFailed(&'static str),
}

pub type Result<T> = std::result::Result<T, OrthoError>;

/// `Q = W(G) W(H)^{-1}`. Both `Q W(H) = W(G)` and `Qᵀ W(G) = W(H)` are
/// checked before returning; the second only holds when `Q` is orthogonal,
/// so a failure means the graphs are not generalized cospectral.
pub fn regular_orthogonal_from_walks(g: &Graph, h: &Graph) -> Result<RationalMatrix> {
    if g.n() != h.n() {
        return Err(OrthoError::OrderMismatch(g.n(), h.n()));
    }
    let (wg, wh) = (walk_matrix(g), walk_matrix(h));
    let wh_inv = match invert_rational(&wh) {
        Ok(m) => m,
        Err(ExactError::Singular { rank }) => return Err(OrthoError::Singular { rank }),
        Err(e) => unreachable!("square walk matrix: {e}"),
    };
    let q = RationalMatrix::from_integer(&wg).mul(&wh_inv).expect("dimensions agree");
    if q.mul_int(&wh).expect("dimensions agree") != RationalMatrix::from_integer(&wg) {
        return Err(OrthoError::IdentityFailed("Q W(H) = W(G)"));
    }
    if q.transpose().mul_int(&wg).expect("dimensions agree") != RationalMatrix::from_integer(&wh) {
        return Err(OrthoError::IdentityFailed("Qᵀ W(G) = W(H)"));
    }
    Ok(q)
}

pub fn is_orthogonal(q: &RationalMatrix) -> bool {
    q.is_square() && q.transpose().mul(q).is_ok_and(|p| p.is_identity())
}

/// Every row sum is one, i.e. `Qe = e`.
pub fn is_regular(q: &RationalMatrix) -> bool {
    q.is_square() && (0..q.rows()).all(|i| (0..q.cols()).map(|j| &q[(i, j)]).sum::<BigRational>().is_one())
}

/// A 0/1 matrix with exactly one 1 in every row and column.
pub fn is_permutation(q: &RationalMatrix) -> bool {
    if !q.is_square() || !q.entries().iter().all(|x| x.is_zero() || x.is_one()) {
        return false;
    }
    let n = q.rows();
    (0..n).all(|i| (0..n).filter(|&j| q[(i, j)].is_one()).count() == 1)
        && (0..n).all(|j| (0..n).filter(|&i| q[(i, j)].is_one()).count() == 1)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LevelResult {
    #[serde(with = "crate::serde_bigint")]
    pub level: BigInt,
    /// `level * Q`, integral by construction.
    #[serde(skip)]
    pub scaled_is_integral_witness: BigIntMatrix,
}

/// Least `l > 0` with `lQ` integral: the lcm of the reduced denominators.
pub fn level(q: &RationalMatrix) -> LevelResult {
    let level = q.entries().iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let scaled_is_integral_witness = q.scale_int(&level).to_integer().expect("lcm of denominators clears them");
    LevelResult { level, scaled_is_integral_witness }
}

/// `Qᵀ A(G) Q = A(H)` exactly.
pub fn check_conjugation(q: &RationalMatrix, g: &Graph, h: &Graph) -> bool {
    let n = q.rows();
    if !q.is_square() || g.n() != n || h.n() != n {
        return false;
    }
    let ag = RationalMatrix::from_integer(&BigIntMatrix::adjacency(g));
    let lhs = q.transpose().mul(&ag).and_then(|m| m.mul(q));
    lhs.is_ok_and(|m| m == RationalMatrix::from_integer(&BigIntMatrix::adjacency(h)))
}
