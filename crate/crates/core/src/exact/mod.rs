//! Exact arbitrary-precision rational scalars and sparse linear algebra.
//!
//! Everything downstream (bicomplex ranks, X-complex quotients, pairing
//! values, Chern determinants) reduces to the operations here, so this
//! module is deliberately small and heavily tested. All values are
//! immutable after construction and all operations are pure.

mod elim;
mod matrix;
mod rational;

pub use matrix::{det_dense, homology_rank, psd_rank, ExactError, SparseMatrix, SparseVec, Subspace};
pub use rational::{binomial, factorial, fmt_rat, parse_rat, rat, rint, Rat};
