//! Brute-force oracles: characteristic polynomials from elementary
//! subgraphs, exhaustive mate search at small order, and seeded property
//! suites.

mod harness;
mod mates;
mod sachs;

pub use harness::{property_harness, Counterexample, HarnessReport, Suite, MAX_DRAWS_PER_SAMPLE};
pub use mates::{
    exhaustive_mate_search, exhaustive_mate_search_filtered, Bucketing, MatePair, MateSearchReport,
    MATE_SEARCH_MAX_ORDER,
};
pub use sachs::{
    charpoly_via_sachs, for_each_elementary_subgraph, odd_index_parity_check, sachs_coefficient, Component,
    ElementarySubgraph, SACHS_MAX_ORDER,
};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("order {n} exceeds the oracle limit {max}")]
    SizeGuard { n: usize, max: usize },
    #[error("coefficient index {i} outside 1..={n}")]
    IndexOutOfRange { i: usize, n: usize },
}

pub type Result<T> = std::result::Result<T, OracleError>;
