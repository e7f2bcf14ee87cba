//! Chains in `A^(x)(n+1)` and the four bicomplex operators.
//!
//! Conventions on a basis word `(a_0, ..., a_n)`:
//!   b'(a_0 (x) .. (x) a_n) = sum_{j=0}^{n-1} (-1)^j a_0 (x) .. (x) a_j a_{j+1} (x) .. (x) a_n
//!   b  = b' + (-1)^n (a_n a_0) (x) a_1 (x) .. (x) a_{n-1}
//!   lambda = (-1)^n a_n (x) a_0 (x) .. (x) a_{n-1}
//!   N  = sum_{j=0}^{n} lambda^j

use super::CyclicError;
use crate::algebra::StructureAlgebra;
use crate::exact::{Rat, SparseMatrix};
use num_traits::Zero;
use std::collections::BTreeMap;
use std::sync::Arc;

pub type Word = Vec<u16>;

/// Element of `A^(x)(degree+1)` as a sparse rational tensor.
#[derive(Debug, Clone, PartialEq)]
pub struct Chain {
    pub algebra: Arc<StructureAlgebra>,
    pub degree: usize,
    pub coeffs: BTreeMap<Word, Rat>,
}

impl Chain {
    pub fn zero(algebra: Arc<StructureAlgebra>, degree: usize) -> Self {
        Chain {
            algebra,
            degree,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn from_terms(
        algebra: Arc<StructureAlgebra>,
        degree: usize,
        terms: Vec<(Word, Rat)>,
    ) -> Result<Self, CyclicError> {
        let mut c = Chain::zero(algebra, degree);
        for (w, v) in terms {
            c.add_term(w, v);
        }
        Ok(c)
    }

    pub fn add_term(&mut self, word: Word, v: Rat) {
        assert_eq!(word.len(), self.degree + 1, "word length");
        assert!(
            word.iter().all(|&i| (i as usize) < self.algebra.dim()),
            "letter out of range"
        );
        if v.is_zero() {
            return;
        }
        match self.coeffs.get_mut(&word) {
            Some(e) => {
                *e += v;
                if e.is_zero() {
                    self.coeffs.remove(&word);
                }
            }
            None => {
                self.coeffs.insert(word, v);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, other: &Chain) -> Result<Chain, CyclicError> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (w, v) in &other.coeffs {
            out.add_term(w.clone(), v.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Chain) -> Result<Chain, CyclicError> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (w, v) in &other.coeffs {
            out.add_term(w.clone(), -v.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rat) -> Chain {
        let mut out = Chain::zero(self.algebra.clone(), self.degree);
        for (w, v) in &self.coeffs {
            out.add_term(w.clone(), v * c);
        }
        out
    }

    fn check_compatible(&self, other: &Chain) -> Result<(), CyclicError> {
        if self.algebra.as_ref() != other.algebra.as_ref() {
            return Err(CyclicError::AlgebraMismatch(
                self.algebra.label().into(),
                other.algebra.label().into(),
            ));
        }
        assert_eq!(self.degree, other.degree, "degree mismatch");
        Ok(())
    }
}

/// Image of a boundary operator; `at_floor` marks a degree-0 input, whose
/// image lives in the nonexistent degree -1 and is reported as the zero
/// chain of degree 0.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryImage {
    pub chain: Chain,
    pub at_floor: bool,
}

fn word_terms_bprime(alg: &StructureAlgebra, w: &[u16]) -> Vec<(Word, Rat)> {
    let n = w.len() - 1;
    let mut out = Vec::new();
    for j in 0..n {
        let sign = if j % 2 == 0 { 1 } else { -1 };
        for (k, c) in alg.mul_basis(w[j] as usize, w[j + 1] as usize) {
            let mut nw = Vec::with_capacity(n);
            nw.extend_from_slice(&w[..j]);
            nw.push(*k as u16);
            nw.extend_from_slice(&w[j + 2..]);
            out.push((nw, c * Rat::from_integer(sign.into())));
        }
    }
    out
}

fn word_terms_b(alg: &StructureAlgebra, w: &[u16]) -> Vec<(Word, Rat)> {
    let n = w.len() - 1;
    let mut out = word_terms_bprime(alg, w);
    let sign = if n % 2 == 0 { 1 } else { -1 };
    for (k, c) in alg.mul_basis(w[n] as usize, w[0] as usize) {
        let mut nw = Vec::with_capacity(n);
        nw.push(*k as u16);
        nw.extend_from_slice(&w[1..n]);
        out.push((nw, c * Rat::from_integer(sign.into())));
    }
    out
}

fn word_rotate(w: &[u16]) -> (Word, i32) {
    let n = w.len() - 1;
    let mut nw = Vec::with_capacity(n + 1);
    nw.push(w[n]);
    nw.extend_from_slice(&w[..n]);
    (nw, if n % 2 == 0 { 1 } else { -1 })
}

fn apply_linear(
    c: &Chain,
    out_degree: usize,
    f: impl Fn(&[u16]) -> Vec<(Word, Rat)>,
) -> Chain {
    let mut out = Chain::zero(c.algebra.clone(), out_degree);
    for (w, v) in &c.coeffs {
        for (nw, nc) in f(w) {
            out.add_term(nw, nc * v);
        }
    }
    out
}

/// Hochschild boundary `b`. Degree-0 chains map to the zero chain.
pub fn op_b(c: &Chain) -> BoundaryImage {
    if c.degree == 0 {
        return BoundaryImage {
            chain: Chain::zero(c.algebra.clone(), 0),
            at_floor: true,
        };
    }
    BoundaryImage {
        chain: apply_linear(c, c.degree - 1, |w| word_terms_b(&c.algebra, w)),
        at_floor: false,
    }
}

/// Bar boundary `b'`. Degree-0 chains map to the zero chain.
pub fn op_bprime(c: &Chain) -> BoundaryImage {
    if c.degree == 0 {
        return BoundaryImage {
            chain: Chain::zero(c.algebra.clone(), 0),
            at_floor: true,
        };
    }
    BoundaryImage {
        chain: apply_linear(c, c.degree - 1, |w| word_terms_bprime(&c.algebra, w)),
        at_floor: false,
    }
}

/// Signed cyclic rotation.
pub fn op_lambda(c: &Chain) -> Chain {
    apply_linear(c, c.degree, |w| {
        let (nw, s) = word_rotate(w);
        vec![(nw, Rat::from_integer(s.into()))]
    })
}

/// Cyclic symmetrizer `N = sum lambda^j`.
pub fn op_n(c: &Chain) -> Chain {
    let mut acc = c.clone();
    let mut rot = c.clone();
    for _ in 0..c.degree {
        rot = op_lambda(&rot);
        acc = acc.add(&rot).expect("same space");
    }
    acc
}

pub(crate) fn word_index(alg: &StructureAlgebra, w: &[u16]) -> usize {
    let d = alg.dim();
    w.iter().fold(0usize, |acc, &i| acc * d + i as usize)
}

pub(crate) fn index_word(alg: &StructureAlgebra, mut idx: usize, len: usize) -> Word {
    let d = alg.dim();
    let mut w = vec![0u16; len];
    for t in (0..len).rev() {
        w[t] = (idx % d) as u16;
        idx /= d;
    }
    w
}

fn operator_matrix(
    alg: &StructureAlgebra,
    src_degree: usize,
    out_degree: usize,
    f: impl Fn(&[u16]) -> Vec<(Word, Rat)>,
) -> SparseMatrix {
    let d = alg.dim();
    let cols = d.pow((src_degree + 1) as u32);
    let rows = d.pow((out_degree + 1) as u32);
    let mut m = SparseMatrix::zero(rows, cols);
    for col in 0..cols {
        let w = index_word(alg, col, src_degree + 1);
        for (nw, c) in f(&w) {
            m.add_entry(word_index(alg, &nw), col, c).unwrap();
        }
    }
    m
}

/// Matrix of `b : C_n -> C_{n-1}` on basis words; requires `n >= 1`.
pub fn b_matrix(alg: &StructureAlgebra, n: usize) -> SparseMatrix {
    assert!(n >= 1);
    operator_matrix(alg, n, n - 1, |w| word_terms_b(alg, w))
}

/// Matrix of `b' : C_n -> C_{n-1}`; requires `n >= 1`.
pub fn bprime_matrix(alg: &StructureAlgebra, n: usize) -> SparseMatrix {
    assert!(n >= 1);
    operator_matrix(alg, n, n - 1, |w| word_terms_bprime(alg, w))
}

/// Matrix of the signed rotation on `C_n`.
pub fn lambda_matrix(alg: &StructureAlgebra, n: usize) -> SparseMatrix {
    operator_matrix(alg, n, n, |w| {
        let (nw, s) = word_rotate(w);
        vec![(nw, Rat::from_integer(s.into()))]
    })
}

/// Matrix of `N` on `C_n`.
pub fn n_matrix(alg: &StructureAlgebra, n: usize) -> SparseMatrix {
    operator_matrix(alg, n, n, |w| {
        let mut out = Vec::with_capacity(n + 1);
        let mut cur = w.to_vec();
        let mut sign = 1i32;
        out.push((cur.clone(), Rat::from_integer(1.into())));
        for _ in 0..n {
            let (nw, s) = word_rotate(&cur);
            sign *= s;
            cur = nw;
            out.push((cur.clone(), Rat::from_integer(sign.into())));
        }
        out
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rint;

    fn arc(a: StructureAlgebra) -> Arc<StructureAlgebra> {
        Arc::new(a)
    }

    fn chain_of(alg: &Arc<StructureAlgebra>, word: &[u16]) -> Chain {
        let mut c = Chain::zero(alg.clone(), word.len() - 1);
        c.add_term(word.to_vec(), rint(1));
        c
    }

    #[test]
    fn b_kills_scalar_square() {
        // over Q: b(1 (x) 1) = 1*1 - 1*1 = 0
        let q = arc(StructureAlgebra::matrix(1).unwrap());
        let c = chain_of(&q, &[0, 0]);
        assert!(op_b(&c).chain.is_zero());
    }

    #[test]
    fn b_on_mat2_word() {
        // b(E12 (x) E21) = E12 E21 - E21 E12 = E11 - E22
        let m2 = arc(StructureAlgebra::matrix(2).unwrap());
        let c = chain_of(&m2, &[1, 2]);
        let img = op_b(&c);
        assert!(!img.at_floor);
        let mut expect = Chain::zero(m2.clone(), 0);
        expect.add_term(vec![0], rint(1));
        expect.add_term(vec![3], rint(-1));
        assert_eq!(img.chain, expect);
    }

    #[test]
    fn degree_zero_hits_floor() {
        let q = arc(StructureAlgebra::matrix(1).unwrap());
        let c = chain_of(&q, &[0]);
        let img = op_b(&c);
        assert!(img.at_floor);
        assert!(img.chain.is_zero());
        assert_eq!(img.chain.degree, 0);
        assert!(op_bprime(&c).at_floor);
    }

    #[test]
    fn lambda_degree_one_sign_and_involution() {
        // lambda(a (x) b) = -(b (x) a), lambda^2 = id
        let m2 = arc(StructureAlgebra::matrix(2).unwrap());
        let c = chain_of(&m2, &[1, 2]);
        let l = op_lambda(&c);
        let mut expect = Chain::zero(m2.clone(), 1);
        expect.add_term(vec![2, 1], rint(-1));
        assert_eq!(l, expect);
        assert_eq!(op_lambda(&l), c);
    }

    #[test]
    fn lambda_power_is_identity() {
        let m2 = arc(StructureAlgebra::matrix(2).unwrap());
        for n in 0..4 {
            let word: Vec<u16> = (0..=n as u16).map(|i| i % 4).collect();
            let c = chain_of(&m2, &word);
            let mut it = c.clone();
            for _ in 0..=n {
                it = op_lambda(&it);
            }
            assert_eq!(it, c, "lambda^(n+1) = id at degree {n}");
        }
    }

    #[test]
    fn matrices_match_chain_operators() {
        let m2 = arc(StructureAlgebra::matrix(2).unwrap());
        let n = 2;
        let bm = b_matrix(&m2, n);
        let c = chain_of(&m2, &[1, 2, 3]);
        let img = op_b(&c).chain;
        let col = word_index(&m2, &[1, 2, 3]);
        let from_matrix: Vec<(usize, Rat)> = bm.column(col).map(|(r, v)| (r, v.clone())).collect();
        let mut expect: Vec<(usize, Rat)> = img
            .coeffs
            .iter()
            .map(|(w, v)| (word_index(&m2, w), v.clone()))
            .collect();
        expect.sort_by_key(|(r, _)| *r);
        assert_eq!(from_matrix, expect);
    }
}
