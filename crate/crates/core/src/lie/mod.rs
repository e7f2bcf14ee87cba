//! Classical compact groups: primitive cohomology degrees, irreducible
//! representation enumeration by the Weyl dimension formula, the integer
//! coefficient function `phi`, explicit Chern character coefficient tables
//! for SU(n+1) and SO(2n+1), and exterior-algebra arithmetic.

mod chern;
mod exterior;
mod weyl;

pub use chern::{chern_so_odd, chern_so_odd_with, chern_su, is_generating, phi, ChernTable, SoRowRange};
pub use exterior::{ext_mul, ExtElement, ExteriorAlgebra};
pub use weyl::{irrep_dims, weyl_dim, Irrep};

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LieError {
    #[error("argument outside domain: {0}")]
    DomainError(String),
    #[error("table is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },
    #[error("elements belong to different exterior algebras")]
    AlgebraMismatch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GroupFamily {
    /// SU(n+1), rank n
    SU,
    /// SO(2n+1), rank n
    SOOdd,
    /// Sp(n), rank n
    Sp,
}

/// A classical compact group given by family and rank parameter `n >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GroupDescriptor {
    pub family: GroupFamily,
    pub n: usize,
}

impl GroupDescriptor {
    pub fn new(family: GroupFamily, n: usize) -> Result<Self, LieError> {
        if n == 0 {
            return Err(LieError::DomainError("group parameter must be >= 1".into()));
        }
        Ok(GroupDescriptor { family, n })
    }

    pub fn su(n: usize) -> Result<Self, LieError> {
        Self::new(GroupFamily::SU, n)
    }

    pub fn so_odd(n: usize) -> Result<Self, LieError> {
        Self::new(GroupFamily::SOOdd, n)
    }

    pub fn sp(n: usize) -> Result<Self, LieError> {
        Self::new(GroupFamily::Sp, n)
    }

    pub fn rank(&self) -> usize {
        self.n
    }
}

impl std::fmt::Display for GroupDescriptor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.family {
            GroupFamily::SU => write!(f, "su{}", self.n + 1),
            GroupFamily::SOOdd => write!(f, "so{}", 2 * self.n + 1),
            GroupFamily::Sp => write!(f, "sp{}", self.n),
        }
    }
}

/// Degrees of the odd primitive generators of the complex cohomology
/// exterior algebra: SU(n+1) has x_3, x_5, ..., x_{2n+1}; SO(2n+1) and
/// Sp(n) have x_3, x_7, ..., x_{4n-1}.
pub fn primitive_degrees(g: &GroupDescriptor) -> Vec<usize> {
    match g.family {
        GroupFamily::SU => (1..=g.n).map(|i| 2 * i + 1).collect(),
        GroupFamily::SOOdd | GroupFamily::Sp => (1..=g.n).map(|i| 4 * i - 1).collect(),
    }
}
