//! Exact certification of graphs determined by their generalized spectrum.
//!
//! The crate computes walk matrices, their Smith normal forms and
//! determinants in exact integer arithmetic, checks annihilating
//! polynomials of adjacency matrices over GF(2), builds the rational
//! orthogonal matrix relating two generalized cospectral graphs, and
//! combines these into DGS certificates. Brute-force oracles for small
//! orders live in [`oracle`].

pub mod cert;
pub mod exact;
pub mod fixtures;
pub mod gf2;
pub mod graph;
pub mod oracle;
pub mod ortho;
pub(crate) mod serde_bigint;
pub mod walk;

pub use graph::{Format, Graph, GraphError};
