//! The Fedosov product on even forms and the graded identification of
//! forms with the universal-extension presentation.
//!
//! Even forms under `w1 o w2 = w1 w2 - d w1 d w2` constitute the algebra
//! whose adic quotients feed the X-complex; the identification sends
//! `a_0 da_1 .. da_{2k}` to `rho(a_0) o omega(a_1, a_2) o ... ` with
//! curvature `omega(a, b) = rho(ab) - rho(a) o rho(b)`, and an odd form
//! `u da` to the one-form class `u . d(rho(a))`.

use super::form::{form_d, form_mul, FormWord, NCForm};
use super::CqError;
use crate::algebra::{AlgebraElement, StructureAlgebra};
use crate::exact::{Rat, SparseMatrix};
use num_traits::One;
use std::sync::Arc;

/// An even form; evenness is preserved by the Fedosov product.
#[derive(Debug, Clone, PartialEq)]
pub struct FedosovElement(NCForm);

impl FedosovElement {
    pub fn new(form: NCForm) -> Result<Self, CqError> {
        if !form.is_even() {
            return Err(CqError::OddForm);
        }
        Ok(FedosovElement(form))
    }

    pub fn unit(algebra: Arc<StructureAlgebra>, cap: usize) -> Self {
        FedosovElement(NCForm::unit(algebra, cap))
    }

    pub fn from_element(e: &AlgebraElement, cap: usize) -> Self {
        FedosovElement(NCForm::from_element(e, cap))
    }

    pub fn form(&self) -> &NCForm {
        &self.0
    }

    pub fn into_form(self) -> NCForm {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn add(&self, other: &FedosovElement) -> Result<FedosovElement, CqError> {
        Ok(FedosovElement(self.0.add(&other.0)?))
    }

    pub fn sub(&self, other: &FedosovElement) -> Result<FedosovElement, CqError> {
        Ok(FedosovElement(self.0.sub(&other.0)?))
    }

    pub fn scale(&self, c: &Rat) -> FedosovElement {
        FedosovElement(self.0.scale(c))
    }

    /// Degree-0 part as algebra coordinates: the image under the quotient
    /// onto `A`, which is an algebra homomorphism for the Fedosov product.
    pub fn degree0_coords(&self) -> Vec<Rat> {
        let d = self.0.algebra.dim();
        let mut out = vec![Rat::from_integer(0.into()); d];
        for (w, c) in &self.0.terms {
            if w.degree() == 0 {
                out[w.head as usize] = c.clone();
            }
        }
        out
    }
}

/// `u o v = uv - du dv` on even forms (the sign `(-1)^|u|` is trivial).
/// Associative in the truncated algebra, since discarding above-cap terms
/// is a two-sided ideal quotient.
pub fn fedosov_mul(u: &FedosovElement, v: &FedosovElement) -> Result<FedosovElement, CqError> {
    let plain = form_mul(&u.0, &v.0)?;
    let correction = form_mul(&form_d(&u.0), &form_d(&v.0))?;
    Ok(FedosovElement(plain.sub(&correction)?))
}

pub fn fedosov_pow(u: &FedosovElement, n: usize) -> Result<FedosovElement, CqError> {
    let mut acc = FedosovElement::unit(u.0.algebra.clone(), u.0.cap);
    for _ in 0..n {
        acc = fedosov_mul(&acc, u)?;
    }
    Ok(acc)
}

/// Curvature of the canonical degree-0 lift: `q = x - x o x`.
pub fn curvature(x: &FedosovElement) -> Result<FedosovElement, CqError> {
    x.sub(&fedosov_mul(x, x)?)
}

/// `omega(a, b) = rho(ab) - rho(a) o rho(b)` for basis indices; equals the
/// two-form `d e_a d e_b`.
pub fn omega_pair(
    alg: &Arc<StructureAlgebra>,
    cap: usize,
    a: usize,
    b: usize,
) -> Result<FedosovElement, CqError> {
    let ea = basis_form(alg, cap, a);
    let eb = basis_form(alg, cap, b);
    let mut prod_coords = vec![Rat::from_integer(0.into()); alg.dim()];
    for (k, c) in alg.mul_basis(a, b) {
        prod_coords[*k] = c.clone();
    }
    let rho_ab = FedosovElement(NCForm::from_coords(alg.clone(), cap, &prod_coords));
    rho_ab.sub(&fedosov_mul(&ea, &eb)?)
}

fn basis_form(alg: &Arc<StructureAlgebra>, cap: usize, i: usize) -> FedosovElement {
    let mut f = NCForm::zero(alg.clone(), cap);
    f.add_term(FormWord::degree0(i as u16), Rat::one());
    FedosovElement(f)
}

/// Graded decomposition of a form under the identification: the even part
/// lands in the Fedosov algebra, the odd part in the one-form commutator
/// quotient, modeled on odd forms.
#[derive(Debug, Clone, PartialEq)]
pub struct OmegaSplit {
    pub even: FedosovElement,
    pub odd: NCForm,
}

/// Applies the identification monomial by monomial, evaluating the
/// curvature factorization with genuine Fedosov products. On the models
/// used here it is degreewise bijective (see `omega_rank_check`).
pub fn omega_to_ra(u: &NCForm) -> Result<OmegaSplit, CqError> {
    let alg = &u.algebra;
    let cap = u.cap;
    let mut even = NCForm::zero(alg.clone(), cap);
    even.truncated = u.truncated;
    let mut odd = NCForm::zero(alg.clone(), cap);
    for (w, c) in &u.terms {
        let k2 = w.degree() / 2 * 2;
        let prefix = even_image(alg, cap, w.head, &w.slots[..k2])?;
        if w.degree() % 2 == 0 {
            for (pw, pc) in &prefix.0.terms {
                even.add_term(pw.clone(), pc * c);
            }
        } else {
            // u da -> (even image of u) d(rho(a)); the slot is already a
            // reduced class, so this appends one differential slot
            let a = *w.slots.last().expect("odd degree");
            for (pw, pc) in &prefix.0.terms {
                if pw.degree() + 1 > cap {
                    odd.truncated = true;
                    continue;
                }
                let mut slots = pw.slots.clone();
                slots.push(a);
                odd.add_term(
                    FormWord {
                        head: pw.head,
                        slots,
                    },
                    pc * c,
                );
            }
        }
    }
    Ok(OmegaSplit {
        even: FedosovElement(even),
        odd,
    })
}

/// `rho(a_0) o omega(a_1, a_2) o .. o omega(a_{2k-1}, a_{2k})`.
fn even_image(
    alg: &Arc<StructureAlgebra>,
    cap: usize,
    head: u16,
    slots: &[u16],
) -> Result<FedosovElement, CqError> {
    debug_assert!(slots.len() % 2 == 0);
    let mut acc = basis_form(alg, cap, head as usize);
    for pair in slots.chunks(2) {
        let w = omega_pair(alg, cap, pair[0] as usize, pair[1] as usize)?;
        acc = fedosov_mul(&acc, &w)?;
    }
    Ok(acc)
}

/// Verifies that the identification is a linear bijection on every graded
/// piece up to the cap: the matrix of the map on degree-`k` monomials has
/// full rank `dim(A) * (dim(A) - 1)^k`.
pub fn omega_rank_check(alg: &Arc<StructureAlgebra>, cap: usize) -> Result<bool, CqError> {
    let d = alg.dim();
    let slot_alphabet: Vec<u16> = (0..d as u16)
        .filter(|&i| i as usize != alg.unit_pivot())
        .collect();
    for k in 0..=cap {
        let words = monomials_of_degree(d, &slot_alphabet, k);
        let index: std::collections::HashMap<&FormWord, usize> =
            words.iter().enumerate().map(|(i, w)| (w, i)).collect();
        let mut m = SparseMatrix::zero(words.len(), words.len());
        for (col, w) in words.iter().enumerate() {
            let mut f = NCForm::zero(alg.clone(), cap);
            f.add_term(w.clone(), Rat::one());
            let split = omega_to_ra(&f)?;
            let image = if k % 2 == 0 {
                split.even.0
            } else {
                split.odd
            };
            for (iw, c) in &image.terms {
                debug_assert_eq!(iw.degree(), k, "identification preserves degree");
                m.add_entry(index[iw], col, c.clone())
                    .map_err(CqError::Exact)?;
            }
        }
        if m.rank() != words.len() {
            return Ok(false);
        }
    }
    Ok(true)
}

pub(crate) fn monomials_of_degree(
    dim: usize,
    slot_alphabet: &[u16],
    k: usize,
) -> Vec<FormWord> {
    let mut out = Vec::new();
    if k > 0 && slot_alphabet.is_empty() {
        return out;
    }
    let mut slots = vec![0usize; k];
    loop {
        for head in 0..dim as u16 {
            out.push(FormWord {
                head,
                slots: slots.iter().map(|&i| slot_alphabet[i]).collect(),
            });
        }
        // odometer
        let mut t = k;
        loop {
            if t == 0 {
                return out;
            }
            t -= 1;
            slots[t] += 1;
            if slots[t] < slot_alphabet.len() {
                break;
            }
            slots[t] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, rint};

    fn q2() -> Arc<StructureAlgebra> {
        Arc::new(StructureAlgebra::cyclic_group(2).unwrap())
    }

    fn m2() -> Arc<StructureAlgebra> {
        Arc::new(StructureAlgebra::matrix(2).unwrap())
    }

    #[test]
    fn degree_zero_fedosov_product() {
        // a o b = ab - da db
        let a = q2();
        let ga = basis_form(&a, 4, 1);
        let p = fedosov_mul(&ga, &ga).unwrap();
        // g1 g1 = g0, minus dg1 dg1
        let mut expect = NCForm::zero(a.clone(), 4);
        expect.add_term(FormWord::degree0(0), rint(1));
        expect.add_term(
            FormWord {
                head: 0,
                slots: vec![1, 1],
            },
            rint(-1),
        );
        assert_eq!(p.form(), &expect);
    }

    #[test]
    fn unit_is_neutral() {
        let a = m2();
        let one = FedosovElement::unit(a.clone(), 4);
        let mut f = NCForm::zero(a.clone(), 4);
        f.add_term(
            FormWord {
                head: 2,
                slots: vec![0, 1],
            },
            rat(3, 5),
        );
        f.add_term(FormWord::degree0(1), rint(2));
        let w = FedosovElement::new(f).unwrap();
        assert_eq!(fedosov_mul(&one, &w).unwrap(), w);
        assert_eq!(fedosov_mul(&w, &one).unwrap(), w);
    }

    #[test]
    fn idempotent_projection_example() {
        // e = (1, 0) in Q^2 (cyclic(2) basis change): e o e = e - de de
        let a = q2();
        let coords = vec![rat(1, 2), rat(1, 2)]; // (g0 + g1)/2 squares to itself
        let e = FedosovElement(NCForm::from_coords(a.clone(), 4, &coords));
        let p = fedosov_mul(&e, &e).unwrap();
        let de = form_d(e.form());
        let dede = form_mul(&de, &de).unwrap();
        let expect = e.form().sub(&dede).unwrap();
        assert_eq!(p.form(), &expect);
    }

    #[test]
    fn odd_forms_rejected() {
        let a = q2();
        let mut f = NCForm::zero(a, 3);
        f.add_term(
            FormWord {
                head: 0,
                slots: vec![1],
            },
            rint(1),
        );
        assert!(matches!(FedosovElement::new(f), Err(CqError::OddForm)));
    }

    #[test]
    fn degree_zero_projection_is_multiplicative() {
        let a = m2();
        let u = basis_form(&a, 2, 1);
        let v = basis_form(&a, 2, 2);
        let uv = fedosov_mul(&u, &v).unwrap();
        let direct = a.mul_vec(&u.degree0_coords(), &v.degree0_coords());
        assert_eq!(uv.degree0_coords(), direct);
    }

    #[test]
    fn omega_identification_fixes_monomials() {
        // on the even-form model the identification acts as the identity,
        // certifying the concatenation property of the curvature factors
        let a = m2();
        let mut f = NCForm::zero(a.clone(), 4);
        f.add_term(
            FormWord {
                head: 1,
                slots: vec![0, 2, 1, 1],
            },
            rint(1),
        );
        let split = omega_to_ra(&f).unwrap();
        assert_eq!(split.even.form(), &f);
        assert!(split.odd.is_zero());

        let mut g = NCForm::zero(a.clone(), 3);
        g.add_term(
            FormWord {
                head: 0,
                slots: vec![1, 2, 0],
            },
            rat(2, 3),
        );
        let split = omega_to_ra(&g).unwrap();
        assert!(split.even.is_zero());
        assert_eq!(split.odd, g);
    }

    #[test]
    fn omega_rank_check_small() {
        assert!(omega_rank_check(&q2(), 3).unwrap());
        assert!(omega_rank_check(&m2(), 2).unwrap());
    }
}
