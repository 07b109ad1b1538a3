//! Exact dense linear algebra over the integers and rationals.

mod det;
pub mod factor;
mod matrix;
mod poly;
mod rational;
mod snf;

use thiserror::Error;

pub use det::{
    char_poly, char_poly_by_interpolation, char_poly_faddeev_leverrier, char_poly_i64, determinant, rank,
};
pub use factor::{is_squarefree, odd_part, squarefree_status, two_adic_valuation, SquareFree};
pub use matrix::BigIntMatrix;
pub use poly::IntPolynomial;
pub use rational::{invert_rational, parse_rational_matrix, RationalMatrix};
pub use snf::{smith_normal_form, SmithNormalForm};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExactError {
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: expected {expected:?}, found {found:?}")]
    DimensionMismatch { expected: (usize, usize), found: (usize, usize) },
    #[error("matrix is singular (rank {rank})")]
    Singular { rank: usize },
    #[error("argument must be nonzero")]
    ZeroArgument,
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("cannot parse rational {0:?}")]
    Parse(String),
    #[error("factorization budget exceeded for a {bits}-bit input; square-free status unknown")]
    FactorizationBudget { bits: u64 },
}

pub type Result<T> = std::result::Result<T, ExactError>;
