//! Universal differential forms with the Fedosov product, the adic
//! X-complex and its homology, idempotent lifting, and the odd class of an
//! invertible. This is the second, independent route to the two-periodic
//! homology ranks; agreement with the bicomplex route of [`crate::cyclic`]
//! is part of the acceptance suite.

mod fedosov;
mod form;
mod lift;
mod xstage;

pub use fedosov::{
    curvature, fedosov_mul, fedosov_pow, omega_pair, omega_rank_check, omega_to_ra,
    FedosovElement, OmegaSplit,
};
pub use form::{form_d, form_mul, FormWord, NCForm};
pub use lift::{form_trace, lift_coefficient, lift_idempotent, odd_class_of_invertible};
pub use xstage::{
    bbar_word, nat_d_form, red_u_delta_v, x1_commutator_residual, x_complex_homology, x_stage,
    XStage,
};

use crate::algebra::AlgebraError;
use crate::exact::ExactError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CqError {
    #[error("forms have different degree caps ({left} vs {right})")]
    CapMismatch { left: usize, right: usize },
    #[error("forms belong to different algebras ({0} vs {1})")]
    AlgebraMismatch(String, String),
    #[error("expected an even form")]
    OddForm,
    #[error("element is not idempotent")]
    NotIdempotent,
    #[error("element is not invertible")]
    NotInvertible,
    #[error("adic order must be at least 1")]
    OrderTooSmall,
    #[error("stage dimension {needed} exceeds the size bound {bound}")]
    SizeBound { needed: String, bound: usize },
    #[error("malformed form data: {0}")]
    Parse(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}
