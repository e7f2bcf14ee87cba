//! Truncated noncommutative differential forms.
//!
//! A form is a sum of monomials `a_0 d a_1 ... d a_k` with `a_0` a basis
//! element and every differential slot a basis class of `A / Q*1` (the
//! basis vectors other than the unit pivot). `d` of the unit vanishes
//! identically in this reduced model. Arithmetic is exact up to the degree
//! cap; terms above the cap are discarded and flagged, which is exact in
//! the corresponding adic quotient.

use super::CqError;
use crate::algebra::{AlgebraElement, StructureAlgebra};
use crate::exact::{fmt_rat, parse_rat, Rat};
use num_traits::{One, Zero};
use serde::Serialize;
use std::collections::BTreeMap;
use std::sync::Arc;

/// Monomial `e_head d e_{s_1} ... d e_{s_k}`; slot indices never equal the
/// unit pivot of the algebra.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FormWord {
    pub head: u16,
    pub slots: Vec<u16>,
}

impl FormWord {
    pub fn degree(&self) -> usize {
        self.slots.len()
    }

    pub fn degree0(head: u16) -> Self {
        FormWord {
            head,
            slots: Vec::new(),
        }
    }
}

/// Sparse truncated form. Equality compares algebra, cap and terms; the
/// truncation flag is bookkeeping about how a value was computed, not part
/// of its identity in the quotient.
#[derive(Debug, Clone)]
pub struct NCForm {
    pub algebra: Arc<StructureAlgebra>,
    pub cap: usize,
    pub terms: BTreeMap<FormWord, Rat>,
    /// Set when arithmetic discarded terms above the cap.
    pub truncated: bool,
}

impl PartialEq for NCForm {
    fn eq(&self, other: &Self) -> bool {
        self.algebra == other.algebra && self.cap == other.cap && self.terms == other.terms
    }
}

/// Class of a basis vector in `A / Q*1` as slot coordinates.
pub(crate) fn slot_class_of_basis(alg: &StructureAlgebra, i: usize) -> Vec<(u16, Rat)> {
    let p = alg.unit_pivot();
    if i != p {
        return vec![(i as u16, Rat::one())];
    }
    let up = &alg.unit_coords()[p];
    alg.unit_coords()
        .iter()
        .enumerate()
        .filter(|(j, c)| *j != p && !c.is_zero())
        .map(|(j, c)| (j as u16, -(c / up)))
        .collect()
}

/// Class of a general element in `A / Q*1`.
pub(crate) fn slot_class_of_vec(alg: &StructureAlgebra, coords: &[Rat]) -> Vec<(u16, Rat)> {
    let p = alg.unit_pivot();
    let t = &coords[p] / &alg.unit_coords()[p];
    coords
        .iter()
        .enumerate()
        .filter(|(j, _)| *j != p)
        .map(|(j, c)| (j as u16, c - &t * &alg.unit_coords()[j]))
        .filter(|(_, c)| !c.is_zero())
        .collect()
}

impl NCForm {
    pub fn zero(algebra: Arc<StructureAlgebra>, cap: usize) -> Self {
        NCForm {
            algebra,
            cap,
            terms: BTreeMap::new(),
            truncated: false,
        }
    }

    /// The unit as a degree-0 form.
    pub fn unit(algebra: Arc<StructureAlgebra>, cap: usize) -> Self {
        let coords = algebra.unit_coords().to_vec();
        Self::from_coords(algebra, cap, &coords)
    }

    pub fn from_coords(algebra: Arc<StructureAlgebra>, cap: usize, coords: &[Rat]) -> Self {
        let mut f = Self::zero(algebra, cap);
        for (i, c) in coords.iter().enumerate() {
            if !c.is_zero() {
                f.add_term(FormWord::degree0(i as u16), c.clone());
            }
        }
        f
    }

    /// Canonical degree-0 inclusion of an algebra element.
    pub fn from_element(e: &AlgebraElement, cap: usize) -> Self {
        Self::from_coords(e.algebra.clone(), cap, &e.coords)
    }

    pub fn add_term(&mut self, word: FormWord, v: Rat) {
        debug_assert!(word.degree() <= self.cap, "term above cap");
        debug_assert!((word.head as usize) < self.algebra.dim());
        debug_assert!({
            let p = self.algebra.unit_pivot() as u16;
            word.slots.iter().all(|&s| s != p && (s as usize) < self.algebra.dim())
        });
        if v.is_zero() {
            return;
        }
        match self.terms.get_mut(&word) {
            Some(e) => {
                *e += v;
                if e.is_zero() {
                    self.terms.remove(&word);
                }
            }
            None => {
                self.terms.insert(word, v);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_degree(&self) -> usize {
        self.terms.keys().map(|w| w.degree()).max().unwrap_or(0)
    }

    pub fn is_even(&self) -> bool {
        self.terms.keys().all(|w| w.degree() % 2 == 0)
    }

    pub fn is_odd(&self) -> bool {
        self.terms.keys().all(|w| w.degree() % 2 == 1)
    }

    pub fn degree_component(&self, k: usize) -> NCForm {
        let mut out = NCForm::zero(self.algebra.clone(), self.cap);
        for (w, c) in &self.terms {
            if w.degree() == k {
                out.add_term(w.clone(), c.clone());
            }
        }
        out
    }

    pub(crate) fn check_compatible(&self, other: &NCForm) -> Result<(), CqError> {
        if self.algebra.as_ref() != other.algebra.as_ref() {
            return Err(CqError::AlgebraMismatch(
                self.algebra.label().into(),
                other.algebra.label().into(),
            ));
        }
        if self.cap != other.cap {
            return Err(CqError::CapMismatch {
                left: self.cap,
                right: other.cap,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &NCForm) -> Result<NCForm, CqError> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        out.truncated = self.truncated || other.truncated;
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &NCForm) -> Result<NCForm, CqError> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        out.truncated = self.truncated || other.truncated;
        for (w, c) in &other.terms {
            out.add_term(w.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rat) -> NCForm {
        let mut out = NCForm::zero(self.algebra.clone(), self.cap);
        out.truncated = self.truncated;
        if c.is_zero() {
            return out;
        }
        for (w, v) in &self.terms {
            out.add_term(w.clone(), v * c);
        }
        out
    }

    /// Canonical JSON: `{"cap":c,"terms":[{"head":i,"d":[..],"c":"p/q"}]}`
    /// with terms in the canonical monomial order.
    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Term<'a> {
            head: u16,
            d: &'a [u16],
            c: String,
        }
        #[derive(Serialize)]
        struct Repr<'a> {
            cap: usize,
            terms: Vec<Term<'a>>,
        }
        serde_json::to_string(&Repr {
            cap: self.cap,
            terms: self
                .terms
                .iter()
                .map(|(w, c)| Term {
                    head: w.head,
                    d: &w.slots,
                    c: fmt_rat(c),
                })
                .collect(),
        })
        .expect("serializable")
    }

    /// Parses the JSON emitted by [`NCForm::to_json`]. A `"UNIT"` head is
    /// accepted and expanded through the unit coordinates.
    pub fn from_json(algebra: Arc<StructureAlgebra>, text: &str) -> Result<NCForm, CqError> {
        let v: serde_json::Value =
            serde_json::from_str(text).map_err(|e| CqError::Parse(e.to_string()))?;
        let cap = v["cap"]
            .as_u64()
            .ok_or_else(|| CqError::Parse("missing cap".into()))? as usize;
        let mut out = NCForm::zero(algebra.clone(), cap);
        let terms = v["terms"]
            .as_array()
            .ok_or_else(|| CqError::Parse("missing terms".into()))?;
        for t in terms {
            let coeff =
                parse_rat(t["c"].as_str().ok_or_else(|| CqError::Parse("missing c".into()))?)
                    .map_err(CqError::Parse)?;
            let slots: Vec<u16> = t["d"]
                .as_array()
                .ok_or_else(|| CqError::Parse("missing d".into()))?
                .iter()
                .map(|x| x.as_u64().map(|v| v as u16))
                .collect::<Option<_>>()
                .ok_or_else(|| CqError::Parse("bad slot index".into()))?;
            if slots.len() > cap {
                return Err(CqError::Parse("term above cap".into()));
            }
            let p = algebra.unit_pivot() as u16;
            if slots.iter().any(|&s| s == p || s as usize >= algebra.dim()) {
                return Err(CqError::Parse("slot index out of range".into()));
            }
            if t["head"].as_str() == Some("UNIT") {
                for (i, u) in algebra.unit_coords().iter().enumerate() {
                    if !u.is_zero() {
                        out.add_term(
                            FormWord {
                                head: i as u16,
                                slots: slots.clone(),
                            },
                            &coeff * u,
                        );
                    }
                }
            } else {
                let head = t["head"]
                    .as_u64()
                    .ok_or_else(|| CqError::Parse("bad head".into()))? as u16;
                if head as usize >= algebra.dim() {
                    return Err(CqError::Parse("head index out of range".into()));
                }
                out.add_term(FormWord { head, slots }, coeff);
            }
        }
        Ok(out)
    }
}

/// Exterior differential: `d(a_0 d a_1 ...) = d a_0 d a_1 ...` with the
/// new head the unit; `d` of the unit line vanishes, so `d . d = 0`.
pub fn form_d(u: &NCForm) -> NCForm {
    let alg = &u.algebra;
    let mut out = NCForm::zero(u.algebra.clone(), u.cap);
    out.truncated = u.truncated;
    for (w, c) in &u.terms {
        if w.degree() + 1 > u.cap {
            out.truncated = true;
            continue;
        }
        for (s0, c0) in slot_class_of_basis(alg, w.head as usize) {
            for (i, ucoef) in alg.unit_coords().iter().enumerate() {
                if ucoef.is_zero() {
                    continue;
                }
                let mut slots = Vec::with_capacity(w.degree() + 1);
                slots.push(s0);
                slots.extend_from_slice(&w.slots);
                out.add_term(
                    FormWord {
                        head: i as u16,
                        slots,
                    },
                    c * &c0 * ucoef,
                );
            }
        }
    }
    out
}

/// One monomial times another, by Leibniz reshuffling of the right head
/// through the left differential slots. All produced terms share the total
/// degree; `None` signals the product lives above the cap.
fn mul_words(
    alg: &StructureAlgebra,
    h1: u16,
    s1: &[u16],
    h2: u16,
    s2: &[u16],
    cap: usize,
) -> Option<Vec<(FormWord, Rat)>> {
    if s1.len() + s2.len() > cap {
        return None;
    }
    if s1.is_empty() {
        let out = alg
            .mul_basis(h1 as usize, h2 as usize)
            .iter()
            .map(|(k, c)| {
                (
                    FormWord {
                        head: *k as u16,
                        slots: s2.to_vec(),
                    },
                    c.clone(),
                )
            })
            .collect();
        return Some(out);
    }
    let k = s1.len();
    let a = s1[k - 1] as usize;
    let mut out: Vec<(FormWord, Rat)> = Vec::new();
    // a_0 da_1 .. da_{k-1} d(a_k b_0) db_1 ..
    for (m, c) in alg.mul_basis(a, h2 as usize) {
        for (s0, c0) in slot_class_of_basis(alg, *m) {
            let mut slots = Vec::with_capacity(k + s2.len());
            slots.extend_from_slice(&s1[..k - 1]);
            slots.push(s0);
            slots.extend_from_slice(s2);
            out.push((FormWord { head: h1, slots }, c * &c0));
        }
    }
    // - (a_0 da_1 .. da_{k-1}) (a_k d b_0 db_1 ..)
    for (s0, c0) in slot_class_of_basis(alg, h2 as usize) {
        let mut right = Vec::with_capacity(s2.len() + 1);
        right.push(s0);
        right.extend_from_slice(s2);
        let sub = mul_words(alg, h1, &s1[..k - 1], a as u16, &right, cap)?;
        for (w, c) in sub {
            out.push((w, -(c * &c0)));
        }
    }
    Some(out)
}

/// Graded product of forms with truncation above the cap.
pub fn form_mul(u: &NCForm, v: &NCForm) -> Result<NCForm, CqError> {
    u.check_compatible(v)?;
    let alg = &u.algebra;
    let mut out = NCForm::zero(u.algebra.clone(), u.cap);
    out.truncated = u.truncated || v.truncated;
    for (w1, c1) in &u.terms {
        for (w2, c2) in &v.terms {
            match mul_words(alg, w1.head, &w1.slots, w2.head, &w2.slots, u.cap) {
                Some(terms) => {
                    let c = c1 * c2;
                    for (w, tc) in terms {
                        out.add_term(w, tc * &c);
                    }
                }
                None => out.truncated = true,
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, rint};

    fn arc(a: StructureAlgebra) -> Arc<StructureAlgebra> {
        Arc::new(a)
    }

    fn q2() -> Arc<StructureAlgebra> {
        // product of two copies of the ground field; unit pivot is index 1
        arc(StructureAlgebra::product(&[
            StructureAlgebra::matrix(1).unwrap(),
            StructureAlgebra::matrix(1).unwrap(),
        ])
        .unwrap())
    }

    #[test]
    fn d_of_unit_vanishes() {
        let a = q2();
        let one = NCForm::unit(a, 4);
        assert!(form_d(&one).is_zero());
    }

    #[test]
    fn d_squared_is_zero() {
        let a = q2();
        let mut f = NCForm::zero(a.clone(), 4);
        f.add_term(FormWord::degree0(0), rint(3));
        f.add_term(
            FormWord {
                head: 1,
                slots: vec![0, 0],
            },
            rat(1, 2),
        );
        assert!(form_d(&form_d(&f)).is_zero());
    }

    #[test]
    fn leibniz_da_times_b() {
        // (da) b = d(ab) - a db, exercised over mat(2)
        let m2 = arc(StructureAlgebra::matrix(2).unwrap());
        let cap = 3;
        for a_idx in 0..4u16 {
            for b_idx in 0..4u16 {
                let a = NCForm::from_coords(m2.clone(), cap, &basis(4, a_idx as usize));
                let b = NCForm::from_coords(m2.clone(), cap, &basis(4, b_idx as usize));
                let da_b = form_mul(&form_d(&a), &b).unwrap();
                let d_ab = form_d(&form_mul(&a, &b).unwrap());
                let a_db = form_mul(&a, &form_d(&b)).unwrap();
                assert_eq!(da_b, d_ab.sub(&a_db).unwrap());
            }
        }
    }

    #[test]
    fn graded_leibniz_on_mixed_degrees() {
        // d(uv) = du v + (-1)^|u| u dv for homogeneous u
        let a = q2();
        let cap = 5;
        let mut u = NCForm::zero(a.clone(), cap);
        u.add_term(
            FormWord {
                head: 0,
                slots: vec![0],
            },
            rint(2),
        ); // degree 1
        let mut v = NCForm::zero(a.clone(), cap);
        v.add_term(
            FormWord {
                head: 1,
                slots: vec![0, 0],
            },
            rat(1, 3),
        );
        let lhs = form_d(&form_mul(&u, &v).unwrap());
        let rhs = form_mul(&form_d(&u), &v)
            .unwrap()
            .sub(&form_mul(&u, &form_d(&v)).unwrap())
            .unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn idempotent_leibniz_normal_form() {
        // e de: from e^2 = e, e de = de - (de) e
        let a = q2();
        let cap = 2;
        let e = NCForm::from_coords(a.clone(), cap, &[rint(1), rint(0)]);
        let de = form_d(&e);
        let e_de = form_mul(&e, &de).unwrap();
        let de_e = form_mul(&de, &e).unwrap();
        assert_eq!(e_de, de.sub(&de_e).unwrap());
    }

    #[test]
    fn truncation_is_flagged() {
        let a = q2();
        let mut u = NCForm::zero(a.clone(), 1);
        u.add_term(
            FormWord {
                head: 0,
                slots: vec![0],
            },
            rint(1),
        );
        let p = form_mul(&u, &u).unwrap();
        assert!(p.is_zero());
        assert!(p.truncated);
    }

    #[test]
    fn cap_mismatch_rejected() {
        let a = q2();
        let u = NCForm::unit(a.clone(), 2);
        let v = NCForm::unit(a, 4);
        assert!(matches!(
            form_mul(&u, &v),
            Err(CqError::CapMismatch { left: 2, right: 4 })
        ));
    }

    #[test]
    fn json_round_trip_with_unit_head() {
        let a = q2();
        let mut f = NCForm::zero(a.clone(), 3);
        f.add_term(
            FormWord {
                head: 0,
                slots: vec![0, 0],
            },
            rat(-3, 7),
        );
        f.add_term(FormWord::degree0(1), rint(2));
        let js = f.to_json();
        let back = NCForm::from_json(a.clone(), &js).unwrap();
        assert_eq!(f, back);
        // UNIT head expands through the unit coordinates
        let unit_js = r#"{"cap":1,"terms":[{"head":"UNIT","d":[0],"c":"1"}]}"#;
        let g = NCForm::from_json(a.clone(), unit_js).unwrap();
        let mut expect = NCForm::zero(a, 1);
        expect.add_term(
            FormWord {
                head: 0,
                slots: vec![0],
            },
            rint(1),
        );
        expect.add_term(
            FormWord {
                head: 1,
                slots: vec![0],
            },
            rint(1),
        );
        assert_eq!(g, expect);
    }

    fn basis(d: usize, i: usize) -> Vec<Rat> {
        let mut v = vec![Rat::zero(); d];
        v[i] = Rat::one();
        v
    }
}
