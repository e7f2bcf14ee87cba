//! Exact-arithmetic engines for the homology of finite-dimensional
//! involutive algebras and the classical Chern character tables of compact
//! Lie groups.
//!
//! The crate computes over `Q` only: ranks, determinants, pairings and
//! quotient dimensions are exact equalities, never numerical estimates.
//! Two independent routes to the two-periodic homology ranks are provided
//! (the cyclic bicomplex of [`cyclic`] and the adic X-complex of [`cq`]),
//! so the engines can cross-check each other on every algebra.

pub mod algebra;
pub mod cq;
pub mod cyclic;
pub mod exact;
pub mod lie;
