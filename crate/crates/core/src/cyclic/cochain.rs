//! Multilinear functionals on `A^(x)(n+1)`, their amplification to matrix
//! algebras, and the pairing with idempotents.

use super::chain::{index_word, word_index};
use super::CyclicError;
use crate::algebra::{AlgebraElement, StructureAlgebra};
use crate::exact::{factorial, Rat};
use num_traits::{Signed, Zero};
use std::sync::Arc;

/// Dense `(n+1)`-linear functional given by its values on basis words.
#[derive(Debug, Clone, PartialEq)]
pub struct CochainFunctional {
    pub algebra: Arc<StructureAlgebra>,
    pub degree: usize,
    pub values: Vec<Rat>,
}

impl CochainFunctional {
    pub fn new(
        algebra: Arc<StructureAlgebra>,
        degree: usize,
        values: Vec<Rat>,
    ) -> Result<Self, CyclicError> {
        let want = algebra.dim().pow((degree + 1) as u32);
        if values.len() != want {
            return Err(CyclicError::AlgebraMismatch(
                format!("{} values", values.len()),
                format!("{want} basis words"),
            ));
        }
        Ok(CochainFunctional {
            algebra,
            degree,
            values,
        })
    }

    pub fn zero(algebra: Arc<StructureAlgebra>, degree: usize) -> Self {
        let len = algebra.dim().pow((degree + 1) as u32);
        CochainFunctional {
            algebra,
            degree,
            values: vec![Rat::zero(); len],
        }
    }

    /// Degree-0 functional from basis values.
    pub fn from_linear(algebra: Arc<StructureAlgebra>, coords: Vec<Rat>) -> Result<Self, CyclicError> {
        Self::new(algebra, 0, coords)
    }

    pub fn value_on_word(&self, w: &[u16]) -> &Rat {
        &self.values[word_index(&self.algebra, w)]
    }

    /// Multilinear evaluation on elements.
    pub fn eval(&self, args: &[AlgebraElement]) -> Result<Rat, CyclicError> {
        if args.len() != self.degree + 1 {
            return Err(CyclicError::AlgebraMismatch(
                format!("{} arguments", args.len()),
                format!("degree {} cochain", self.degree),
            ));
        }
        for a in args {
            if a.algebra.as_ref() != self.algebra.as_ref() {
                return Err(CyclicError::AlgebraMismatch(
                    a.algebra.label().into(),
                    self.algebra.label().into(),
                ));
            }
        }
        let supports: Vec<Vec<(usize, &Rat)>> = args
            .iter()
            .map(|a| {
                a.coords
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .collect()
            })
            .collect();
        if supports.iter().any(|s| s.is_empty()) {
            return Ok(Rat::zero());
        }
        let mut acc = Rat::zero();
        let mut stack: Vec<usize> = vec![0; args.len()];
        // odometer over the supports
        'outer: loop {
            let mut coeff = Rat::from_integer(1.into());
            let mut word: Vec<u16> = Vec::with_capacity(args.len());
            for (slot, &pos) in stack.iter().enumerate() {
                let (i, c) = supports[slot][pos];
                coeff *= c;
                word.push(i as u16);
            }
            acc += coeff * self.value_on_word(&word);
            for slot in (0..stack.len()).rev() {
                stack[slot] += 1;
                if stack[slot] < supports[slot].len() {
                    continue 'outer;
                }
                stack[slot] = 0;
                if slot == 0 {
                    break 'outer;
                }
            }
        }
        Ok(acc)
    }

    /// Hochschild coboundary, raising the degree by one.
    pub fn coboundary(&self) -> CochainFunctional {
        let alg = &self.algebra;
        let n = self.degree;
        let mut out = CochainFunctional::zero(alg.clone(), n + 1);
        let len = out.values.len();
        for idx in 0..len {
            let w = index_word(alg, idx, n + 2);
            let mut acc = Rat::zero();
            for j in 0..=n {
                let sign = if j % 2 == 0 { 1 } else { -1 };
                for (k, c) in alg.mul_basis(w[j] as usize, w[j + 1] as usize) {
                    let mut sub = Vec::with_capacity(n + 1);
                    sub.extend_from_slice(&w[..j]);
                    sub.push(*k as u16);
                    sub.extend_from_slice(&w[j + 2..]);
                    acc += c * self.value_on_word(&sub) * Rat::from_integer(sign.into());
                }
            }
            let sign = if (n + 1) % 2 == 0 { 1 } else { -1 };
            for (k, c) in alg.mul_basis(w[n + 1] as usize, w[0] as usize) {
                let mut sub = Vec::with_capacity(n + 1);
                sub.push(*k as u16);
                sub.extend_from_slice(&w[1..=n]);
                acc += c * self.value_on_word(&sub) * Rat::from_integer(sign.into());
            }
            out.values[idx] = acc;
        }
        out
    }

    /// Signed rotation dual to the chain-level `lambda`.
    pub fn lambda(&self) -> CochainFunctional {
        let alg = &self.algebra;
        let n = self.degree;
        let sign = if n % 2 == 0 { 1 } else { -1 };
        let mut out = CochainFunctional::zero(alg.clone(), n);
        for idx in 0..out.values.len() {
            let w = index_word(alg, idx, n + 1);
            let mut rot = Vec::with_capacity(n + 1);
            rot.push(w[n]);
            rot.extend_from_slice(&w[..n]);
            out.values[idx] = self.value_on_word(&rot) * Rat::from_integer(sign.into());
        }
        out
    }

    /// Average of the rotation orbit; the image consists of cyclic
    /// cochains (`lambda phi = phi`), on which coboundaries pair to zero
    /// with idempotents.
    pub fn cyclic_project(&self) -> CochainFunctional {
        let n = self.degree;
        let mut acc = self.clone();
        let mut rot = self.clone();
        for _ in 0..n {
            rot = rot.lambda();
            for (a, b) in acc.values.iter_mut().zip(&rot.values) {
                *a += b;
            }
        }
        let inv = Rat::new(1.into(), ((n + 1) as i64).into());
        for v in acc.values.iter_mut() {
            *v *= &inv;
        }
        acc
    }

    pub fn is_cyclic(&self) -> bool {
        self.lambda() == *self
    }
}

/// `phi # tr` on `M_k(A)`: the value on elementary tensors multiplies the
/// matrix trace of the `E`-factors with `phi` on the algebra factors.
/// With `k = 1` this is `phi` itself.
pub fn cocycle_amplify(
    phi: &CochainFunctional,
    k: usize,
) -> Result<CochainFunctional, CyclicError> {
    if k == 1 {
        return Ok(phi.clone());
    }
    let base = &phi.algebra;
    let amp = Arc::new(base.amplify(k)?);
    let d0 = base.dim();
    let n = phi.degree;
    let mut out = CochainFunctional::zero(amp.clone(), n);
    for idx in 0..out.values.len() {
        let w = index_word(&amp, idx, n + 1);
        // letter -> (i, j, b) with basis index (i*k + j)*d0 + b
        let mut base_word = Vec::with_capacity(n + 1);
        let mut trace_one = true;
        for (t, &letter) in w.iter().enumerate() {
            let letter = letter as usize;
            let b = letter % d0;
            let ij = letter / d0;
            let (_i, j) = (ij / k, ij % k);
            let next = w[(t + 1) % (n + 1)] as usize;
            let ni = (next / d0) / k;
            if j != ni {
                trace_one = false;
                break;
            }
            base_word.push(b as u16);
        }
        if trace_one {
            out.values[idx] = phi.value_on_word(&base_word).clone();
        }
    }
    Ok(out)
}

/// `((-1)^m / m!) (phi # tr)(e, ..., e)` for an idempotent `e` in
/// `M_k(A)` and an even cochain of degree `2m` on `A`.
pub fn pair_idempotent(
    e: &AlgebraElement,
    phi: &CochainFunctional,
    k: usize,
) -> Result<Rat, CyclicError> {
    if phi.degree % 2 != 0 {
        return Err(CyclicError::OddDegree(phi.degree));
    }
    if !e.is_idempotent() {
        return Err(CyclicError::NotIdempotent);
    }
    let amplified = cocycle_amplify(phi, k)?;
    if e.algebra.as_ref() != amplified.algebra.as_ref() {
        return Err(CyclicError::AlgebraMismatch(
            e.algebra.label().into(),
            amplified.algebra.label().into(),
        ));
    }
    let m = phi.degree / 2;
    let args = vec![e.clone(); phi.degree + 1];
    let raw = amplified.eval(&args)?;
    let sign = if m % 2 == 0 { 1 } else { -1 };
    Ok(raw * Rat::new(sign.into(), factorial(m)))
}

/// Entireness of a finitely supported chain: the growth series is a
/// polynomial, so the radius of convergence is infinite. Provided for API
/// completeness; inputs are the norms `|f_n|`, all nonnegative.
pub fn is_entire_finite(norms: &[Rat]) -> bool {
    debug_assert!(norms.iter().all(|x| !x.is_negative()), "norms are nonnegative");
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, rint};

    fn arc(a: StructureAlgebra) -> Arc<StructureAlgebra> {
        Arc::new(a)
    }

    #[test]
    fn pairing_with_identity_functional() {
        let q = arc(StructureAlgebra::matrix(1).unwrap());
        let phi = CochainFunctional::from_linear(q.clone(), vec![rint(1)]).unwrap();
        let e = AlgebraElement::unit(q);
        assert_eq!(pair_idempotent(&e, &phi, 1).unwrap(), rint(1));
    }

    #[test]
    fn pairing_amplified_ground_trace() {
        // A = Q amplified by 2 is mat(2); the amplified functional is the
        // matrix trace, so <E11, phi> = 1
        let q = arc(StructureAlgebra::matrix(1).unwrap());
        let phi = CochainFunctional::from_linear(q.clone(), vec![rint(1)]).unwrap();
        let amp = arc(q.amplify(2).unwrap());
        let mut coords = vec![Rat::zero(); 4];
        coords[0] = rint(1);
        let e11 = AlgebraElement::new(amp, coords).unwrap();
        assert_eq!(pair_idempotent(&e11, &phi, 2).unwrap(), rint(1));
    }

    #[test]
    fn amplified_functional_kills_off_diagonal_products() {
        // degree-1 functional on Q^2, amplified by 2: value on
        // (E11 (x) a, E12 (x) b) vanishes since tr(E11 E12) = 0
        let q2 = arc(StructureAlgebra::cyclic_group(2).unwrap());
        let values = vec![rint(1); 4];
        let phi = CochainFunctional::new(q2.clone(), 1, values).unwrap();
        let amp = cocycle_amplify(&phi, 2).unwrap();
        let d0 = 2;
        // letters: E11 (x) g0 = (0*2+0)*2+0 = 0; E12 (x) g0 = (0*2+1)*2+0 = 2
        let w = vec![0u16, 2u16];
        assert_eq!(amp.value_on_word(&w), &Rat::zero());
        assert_eq!(d0, 2);
    }

    #[test]
    fn coboundary_of_cyclic_cochain_pairs_to_zero() {
        let m2 = arc(StructureAlgebra::matrix(2).unwrap());
        // arbitrary degree-1 cochain, cyclically projected
        let mut values = Vec::new();
        for i in 0..16 {
            values.push(rat(i as i64 + 1, 3));
        }
        let psi = CochainFunctional::new(m2.clone(), 1, values)
            .unwrap()
            .cyclic_project();
        assert!(psi.is_cyclic());
        let phi = psi.coboundary();
        let mut coords = vec![Rat::zero(); 4];
        coords[0] = rint(1);
        let e = AlgebraElement::new(m2.clone(), coords).unwrap();
        assert_eq!(pair_idempotent(&e, &phi, 1).unwrap(), Rat::zero());
    }

    #[test]
    fn odd_degree_rejected() {
        let q = arc(StructureAlgebra::matrix(1).unwrap());
        let phi = CochainFunctional::zero(q.clone(), 1);
        let e = AlgebraElement::unit(q);
        assert!(matches!(
            pair_idempotent(&e, &phi, 1),
            Err(CyclicError::OddDegree(1))
        ));
    }

    #[test]
    fn non_idempotent_rejected() {
        let q = arc(StructureAlgebra::matrix(1).unwrap());
        let phi = CochainFunctional::zero(q.clone(), 0);
        let two = AlgebraElement::new(q, vec![rint(2)]).unwrap();
        assert!(matches!(
            pair_idempotent(&two, &phi, 1),
            Err(CyclicError::NotIdempotent)
        ));
    }

    #[test]
    fn entire_flag_for_finite_chains() {
        assert!(is_entire_finite(&[]));
        assert!(is_entire_finite(&[rint(1), rint(1), rint(1)]));
        assert!(is_entire_finite(&[rat(5, 2), rint(0), rint(7)]));
    }

    #[test]
    fn coboundary_duality_against_chain_boundary() {
        // <b phi, w> = <phi, b w> on random-ish words
        use crate::cyclic::chain::{op_b, Chain};
        let m2 = arc(StructureAlgebra::matrix(2).unwrap());
        let mut values = Vec::new();
        for i in 0..16 {
            values.push(rat((7 * i + 3) as i64, 5));
        }
        let phi = CochainFunctional::new(m2.clone(), 1, values).unwrap();
        let bphi = phi.coboundary();
        for word in [[0u16, 1, 2], [3, 3, 0], [1, 2, 3]] {
            let mut c = Chain::zero(m2.clone(), 2);
            c.add_term(word.to_vec(), rint(1));
            let bc = op_b(&c).chain;
            let lhs = bphi.value_on_word(&word).clone();
            let rhs: Rat = bc
                .coeffs
                .iter()
                .map(|(w, v)| phi.value_on_word(w) * v)
                .sum();
            assert_eq!(lhs, rhs);
        }
    }
}
