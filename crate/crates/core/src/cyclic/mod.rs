//! Cyclic bicomplex machinery on finite-dimensional algebras: chain spaces
//! `A^(x)(n+1)`, the operators `b`, `b'`, `lambda`, `N`, Hochschild /
//! cyclic homology ranks with stabilized periodic ranks, and the pairing
//! of idempotents with even cochains.

mod bicomplex;
mod chain;
mod cochain;

pub use bicomplex::{bicomplex_homology, total_differential, total_dim};
pub use chain::{
    b_matrix, bprime_matrix, lambda_matrix, n_matrix, op_b, op_bprime, op_lambda, op_n,
    BoundaryImage, Chain, Word,
};
pub use cochain::{cocycle_amplify, is_entire_finite, pair_idempotent, CochainFunctional};

use crate::algebra::AlgebraError;
use crate::exact::ExactError;
use serde::Serialize;
use thiserror::Error;

pub const DEFAULT_MAX_DIM: usize = 200_000;

#[derive(Debug, Error)]
pub enum CyclicError {
    #[error("degree cap must be at least 2")]
    CapTooSmall,
    #[error("chain space dimension {needed} exceeds the size bound {bound}")]
    SizeBound { needed: String, bound: usize },
    #[error("chains belong to different algebras ({0} vs {1})")]
    AlgebraMismatch(String, String),
    #[error("pairing requires an even cochain degree, got {0}")]
    OddDegree(usize),
    #[error("element is not idempotent")]
    NotIdempotent,
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum HomologyMethod {
    Bicomplex,
    XComplex,
}

/// Per-degree homology ranks plus the stabilization evidence used to
/// declare the two-periodic ranks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomologyReport {
    pub algebra: String,
    pub method: HomologyMethod,
    /// Degree cap (bicomplex) or adic order (X-complex).
    pub cap: usize,
    pub hh: Vec<usize>,
    pub hc: Vec<usize>,
    pub hp_even: usize,
    pub hp_odd: usize,
    /// False when the cyclic ranks had not settled within the cap; the
    /// periodic ranks then echo the top available degrees and must not be
    /// trusted.
    pub stable: bool,
    /// Even degree whose cyclic rank was declared as `hp_even`.
    pub stabilized_at: usize,
}

impl HomologyReport {
    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Hp {
            even: usize,
            odd: usize,
            stable: bool,
        }
        #[derive(Serialize)]
        struct Repr<'a> {
            algebra: &'a str,
            method: HomologyMethod,
            cap: usize,
            hh: &'a [usize],
            hc: &'a [usize],
            hp: Hp,
        }
        serde_json::to_string(&Repr {
            algebra: &self.algebra,
            method: self.method,
            cap: self.cap,
            hh: &self.hh,
            hc: &self.hc,
            hp: Hp {
                even: self.hp_even,
                odd: self.hp_odd,
                stable: self.stable,
            },
        })
        .expect("serializable")
    }
}
