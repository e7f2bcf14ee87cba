//! Exterior algebras on odd-degree generators.

use super::LieError;
use crate::exact::Rat;
use num_traits::Zero;
use std::collections::BTreeMap;

/// Exterior algebra over `Q` on generators of odd, strictly increasing
/// degrees (at most 64 of them).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExteriorAlgebra {
    degrees: Vec<usize>,
}

impl ExteriorAlgebra {
    pub fn new(degrees: Vec<usize>) -> Result<Self, LieError> {
        if degrees.iter().any(|d| d % 2 == 0) {
            return Err(LieError::DomainError("generator degrees must be odd".into()));
        }
        if !degrees.windows(2).all(|w| w[0] < w[1]) {
            return Err(LieError::DomainError(
                "generator degrees must be strictly increasing".into(),
            ));
        }
        if degrees.len() > 64 {
            return Err(LieError::DomainError("at most 64 generators supported".into()));
        }
        Ok(ExteriorAlgebra { degrees })
    }

    pub fn generators(&self) -> usize {
        self.degrees.len()
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    /// Total dimension `2^g`.
    pub fn basis_count(&self) -> u128 {
        1u128 << self.degrees.len()
    }
}

/// Element as a sparse map from generator subsets (bitmasks) to coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtElement {
    algebra: ExteriorAlgebra,
    terms: BTreeMap<u64, Rat>,
}

impl ExtElement {
    pub fn zero(algebra: &ExteriorAlgebra) -> Self {
        ExtElement {
            algebra: algebra.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(algebra: &ExteriorAlgebra) -> Self {
        let mut e = Self::zero(algebra);
        e.add_term(0, Rat::from_integer(1.into()));
        e
    }

    pub fn generator(algebra: &ExteriorAlgebra, i: usize) -> Self {
        assert!(i < algebra.generators(), "generator index out of range");
        let mut e = Self::zero(algebra);
        e.add_term(1 << i, Rat::from_integer(1.into()));
        e
    }

    pub fn add_term(&mut self, mask: u64, coeff: Rat) {
        assert!(
            mask < (1u64 << self.algebra.generators()) || self.algebra.generators() == 64,
            "subset uses undeclared generators"
        );
        if coeff.is_zero() {
            return;
        }
        let e = self.terms.entry(mask).or_insert_with(Rat::zero);
        *e += coeff;
        if e.is_zero() {
            self.terms.remove(&mask);
        }
    }

    pub fn add_generator_multiple(&mut self, i: usize, coeff: Rat) {
        assert!(i < self.algebra.generators());
        self.add_term(1 << i, coeff);
    }

    pub fn terms(&self) -> &BTreeMap<u64, Rat> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &ExtElement) -> Result<ExtElement, LieError> {
        if self.algebra != other.algebra {
            return Err(LieError::AlgebraMismatch);
        }
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        Ok(out)
    }
}

/// Koszul sign of concatenating the sorted generator lists of `a` then `b`:
/// parity of the number of pairs (i in a, j in b) with i > j. All
/// generators carry odd degree, so every swap contributes a sign.
fn koszul_sign(a: u64, b: u64) -> i32 {
    let mut sign = 0u32;
    let mut bb = b;
    while bb != 0 {
        let j = bb.trailing_zeros();
        let above = a >> (j + 1);
        sign ^= (above.count_ones()) & 1;
        bb &= bb - 1;
    }
    if sign == 0 {
        1
    } else {
        -1
    }
}

/// Koszul-signed product; repeated generators annihilate.
pub fn ext_mul(u: &ExtElement, v: &ExtElement) -> Result<ExtElement, LieError> {
    if u.algebra != v.algebra {
        return Err(LieError::AlgebraMismatch);
    }
    let mut out = ExtElement::zero(&u.algebra);
    for (ma, ca) in &u.terms {
        for (mb, cb) in &v.terms {
            if ma & mb != 0 {
                continue;
            }
            let sign = koszul_sign(*ma, *mb);
            out.add_term(ma | mb, ca * cb * Rat::from_integer(sign.into()));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rint;

    fn alg3() -> ExteriorAlgebra {
        ExteriorAlgebra::new(vec![3, 5, 7]).unwrap()
    }

    #[test]
    fn generator_squares_vanish() {
        let a = alg3();
        let x3 = ExtElement::generator(&a, 0);
        assert!(ext_mul(&x3, &x3).unwrap().is_zero());
    }

    #[test]
    fn odd_generators_anticommute() {
        let a = alg3();
        let x3 = ExtElement::generator(&a, 0);
        let x5 = ExtElement::generator(&a, 1);
        let fwd = ext_mul(&x3, &x5).unwrap();
        let bwd = ext_mul(&x5, &x3).unwrap();
        let mut neg = ExtElement::zero(&a);
        for (m, c) in bwd.terms() {
            neg.add_term(*m, -c.clone());
        }
        assert_eq!(fwd, neg);
    }

    #[test]
    fn binomial_style_expansion() {
        // (x3 + x5)(x3 - x5) = -2 x3 x5
        let a = alg3();
        let x3 = ExtElement::generator(&a, 0);
        let x5 = ExtElement::generator(&a, 1);
        let sum = x3.add(&x5).unwrap();
        let mut diff = x3.clone();
        for (m, c) in x5.terms() {
            diff.add_term(*m, -c.clone());
        }
        let p = ext_mul(&sum, &diff).unwrap();
        let mut expected = ExtElement::zero(&a);
        expected.add_term(0b11, rint(-2));
        assert_eq!(p, expected);
    }

    #[test]
    fn validation_rejects_bad_degrees() {
        assert!(ExteriorAlgebra::new(vec![2]).is_err());
        assert!(ExteriorAlgebra::new(vec![5, 3]).is_err());
        assert!(ExteriorAlgebra::new(vec![3, 3]).is_err());
    }

    #[test]
    fn basis_count() {
        assert_eq!(alg3().basis_count(), 8);
    }
}
