//! Exact computation of filtered pieces, Hilbert functions and
//! LM-invariants for rank-one ideals of the first Weyl
//! algebra, presented through point-condition subspaces of `Q[x]`.

pub mod catalog;
pub mod cli;
pub mod error;
pub mod graded;
pub mod invariants;
pub mod linalg;
pub mod subspace;
pub mod weyl;

pub use error::{Error, Result};
