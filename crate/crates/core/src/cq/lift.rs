//! Idempotent lifting through the adic tower and the odd class of an
//! invertible.

use super::fedosov::{curvature, fedosov_mul, FedosovElement};
use super::form::{FormWord, NCForm};
use super::xstage::red_u_delta_v;
use super::CqError;
use crate::algebra::{AlgebraElement, StructureAlgebra};
use crate::exact::{binomial, factorial, Rat};
use num_bigint::BigInt;
use num_traits::One;
use std::sync::Arc;

/// `2^n (2n-1)!! / n!`, which equals the central binomial `C(2n, n)`;
/// both closed forms are evaluated and compared.
pub fn lift_coefficient(n: usize) -> Rat {
    assert!(n >= 1, "series index starts at 1");
    let mut double_fact = BigInt::one();
    let mut k = 2 * n as i64 - 1;
    while k >= 1 {
        double_fact *= BigInt::from(k);
        k -= 2;
    }
    let lhs = Rat::new(BigInt::from(2).pow(n as u32) * double_fact, factorial(n));
    let rhs = Rat::from_integer(binomial(2 * n, n));
    debug_assert_eq!(lhs, rhs, "double-factorial and binomial forms agree");
    rhs
}

/// Lifts an idempotent `e` to an idempotent of the Fedosov algebra modulo
/// the adic filtration at order `m`:
///
///   x = degree-0 lift of e,  q = x - x o x,
///   lift = x + (x - 1/2) o sum_{n=1}^{m} C(2n, n) q^n.
///
/// The postcondition `lift o lift = lift` holds exactly in the truncation
/// (equivalently, the defect lies in the adic ideal) and is machine
/// verified before returning.
pub fn lift_idempotent(e: &AlgebraElement, m: usize) -> Result<FedosovElement, CqError> {
    if !e.is_idempotent() {
        return Err(CqError::NotIdempotent);
    }
    if m == 0 {
        return Err(CqError::OrderTooSmall);
    }
    let cap = 2 * m;
    let x = FedosovElement::from_element(e, cap);
    let q = curvature(&x)?;
    let mut acc = FedosovElement::new(NCForm::zero(e.algebra.clone(), cap))?;
    let mut qpow = FedosovElement::unit(e.algebra.clone(), cap);
    for n in 1..=m {
        qpow = fedosov_mul(&qpow, &q)?;
        acc = acc.add(&qpow.scale(&lift_coefficient(n)))?;
    }
    let half = FedosovElement::unit(e.algebra.clone(), cap).scale(&Rat::new(1.into(), 2.into()));
    let shifted = x.sub(&half)?;
    let lifted = x.add(&fedosov_mul(&shifted, &acc)?)?;
    let square = fedosov_mul(&lifted, &lifted)?;
    if square != lifted {
        return Err(CqError::Internal(
            "lifting postcondition failed: square differs in the truncation".into(),
        ));
    }
    Ok(lifted)
}

/// Odd class of an invertible `g` with inverse `g_inv` at adic order `m`:
/// with degree-0 lifts `p`, `q` of `g`, `g^{-1}` and `x = 1 - q o p`, the
/// class of `-sum_{n=0}^{m} x^n delta x` in the odd quotient. The series
/// is exact there because `x` has adic valuation at least one.
pub fn odd_class_of_invertible(
    g: &AlgebraElement,
    g_inv: &AlgebraElement,
    m: usize,
) -> Result<NCForm, CqError> {
    if m == 0 {
        return Err(CqError::OrderTooSmall);
    }
    let unit = AlgebraElement::unit(g.algebra.clone());
    let gg = g.mul(g_inv).map_err(CqError::Algebra)?;
    let gg2 = g_inv.mul(g).map_err(CqError::Algebra)?;
    if gg != unit || gg2 != unit {
        return Err(CqError::NotInvertible);
    }
    let cap = 2 * m;
    let p = FedosovElement::from_element(g, cap);
    let q = FedosovElement::from_element(g_inv, cap);
    let x = FedosovElement::unit(g.algebra.clone(), cap).sub(&fedosov_mul(&q, &p)?)?;
    let mut class = NCForm::zero(g.algebra.clone(), cap + 1);
    let mut xpow = FedosovElement::unit(g.algebra.clone(), cap);
    for n in 0..=m {
        if n > 0 {
            xpow = fedosov_mul(&xpow, &x)?;
        }
        let term = red_u_delta_v(&g.algebra, m, &xpow, &x)?;
        class = class.sub(&term)?;
    }
    Ok(class)
}

/// Trace map on forms over `M_k(A)`: an elementary monomial maps to the
/// base-algebra monomial weighted by the matrix trace of its `E`-factors.
pub fn form_trace(
    form: &NCForm,
    base: &Arc<StructureAlgebra>,
    k: usize,
) -> Result<NCForm, CqError> {
    let amp = Arc::new(base.amplify(k).map_err(CqError::Algebra)?);
    if form.algebra.as_ref() != amp.as_ref() {
        return Err(CqError::AlgebraMismatch(
            form.algebra.label().into(),
            amp.label().into(),
        ));
    }
    if k == 1 {
        return Ok(form.clone());
    }
    let d0 = base.dim();
    let decode = |letter: u16| -> (usize, usize, usize) {
        let letter = letter as usize;
        let b = letter % d0;
        let ij = letter / d0;
        (ij / k, ij % k, b)
    };
    let mut out = NCForm::zero(base.clone(), form.cap);
    out.truncated = form.truncated;
    for (w, c) in &form.terms {
        let (i0, j0, b0) = decode(w.head);
        let mut expect = j0;
        let mut base_slots: Vec<usize> = Vec::with_capacity(w.degree());
        let mut alive = true;
        for &s in &w.slots {
            let (i, j, b) = decode(s);
            if i != expect {
                alive = false;
                break;
            }
            expect = j;
            base_slots.push(b);
        }
        if !alive || expect != i0 {
            continue;
        }
        // re-reduce the base slots modulo the base unit line
        let mut partial: Vec<(Vec<u16>, Rat)> = vec![(Vec::new(), c.clone())];
        for b in base_slots {
            let classes = super::form::slot_class_of_basis(base, b);
            let mut next = Vec::new();
            for (slots, coeff) in &partial {
                for (s, sc) in &classes {
                    let mut ns = slots.clone();
                    ns.push(*s);
                    next.push((ns, coeff * sc));
                }
            }
            partial = next;
        }
        for (slots, coeff) in partial {
            out.add_term(
                FormWord {
                    head: b0 as u16,
                    slots,
                },
                coeff,
            );
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rint;
    use num_traits::Zero;

    fn q2() -> Arc<StructureAlgebra> {
        Arc::new(StructureAlgebra::cyclic_group(2).unwrap())
    }

    fn prod11() -> Arc<StructureAlgebra> {
        Arc::new(
            StructureAlgebra::product(&[
                StructureAlgebra::matrix(1).unwrap(),
                StructureAlgebra::matrix(1).unwrap(),
            ])
            .unwrap(),
        )
    }

    #[test]
    fn coefficients_match_central_binomials() {
        assert_eq!(lift_coefficient(1), rint(2));
        assert_eq!(lift_coefficient(2), rint(6));
        assert_eq!(lift_coefficient(3), rint(20));
    }

    #[test]
    fn unit_and_zero_lift_to_themselves() {
        let a = prod11();
        let one = AlgebraElement::unit(a.clone());
        let lift = lift_idempotent(&one, 2).unwrap();
        assert_eq!(lift, FedosovElement::from_element(&one, 4));
        let zero = AlgebraElement::zero(a);
        let lift = lift_idempotent(&zero, 2).unwrap();
        assert!(lift.is_zero());
    }

    #[test]
    fn projection_lift_order_one() {
        // e = (1, 0): lift = e + (2e - 1) de de
        let a = prod11();
        let e = AlgebraElement::new(a.clone(), vec![rint(1), rint(0)]).unwrap();
        let lift = lift_idempotent(&e, 1).unwrap();
        let mut expect = NCForm::zero(a.clone(), 2);
        expect.add_term(FormWord::degree0(0), rint(1));
        // (2e - 1) de de = (e0 - e1) de0 de0
        expect.add_term(
            FormWord {
                head: 0,
                slots: vec![0, 0],
            },
            rint(1),
        );
        expect.add_term(
            FormWord {
                head: 1,
                slots: vec![0, 0],
            },
            rint(-1),
        );
        assert_eq!(lift.form(), &expect);
    }

    #[test]
    fn non_idempotent_rejected() {
        let a = prod11();
        let bad = AlgebraElement::new(a, vec![rint(2), rint(0)]).unwrap();
        assert!(matches!(lift_idempotent(&bad, 1), Err(CqError::NotIdempotent)));
    }

    #[test]
    fn odd_class_of_unit_vanishes() {
        let a = q2();
        let one = AlgebraElement::unit(a);
        let class = odd_class_of_invertible(&one, &one, 2).unwrap();
        assert!(class.is_zero());
    }

    #[test]
    fn odd_class_of_sign_flip() {
        // g = g1 in the order-two group algebra: g^2 = 1 and
        // x = 1 - g o g = dg dg; the expansion stacks dg-pairs onto 2 g dg
        let a = q2();
        let g = AlgebraElement::basis(a.clone(), 1);
        let class = odd_class_of_invertible(&g, &g, 2).unwrap();
        let mut expect = NCForm::zero(a.clone(), 5);
        expect.add_term(
            FormWord {
                head: 1,
                slots: vec![1],
            },
            rint(2),
        );
        expect.add_term(
            FormWord {
                head: 1,
                slots: vec![1, 1, 1],
            },
            rint(2),
        );
        expect.add_term(
            FormWord {
                head: 1,
                slots: vec![1; 5],
            },
            rint(2),
        );
        assert_eq!(class, expect);
    }

    #[test]
    fn non_invertible_rejected() {
        let a = prod11();
        let e = AlgebraElement::new(a.clone(), vec![rint(1), rint(0)]).unwrap();
        assert!(matches!(
            odd_class_of_invertible(&e, &e, 1),
            Err(CqError::NotInvertible)
        ));
    }

    #[test]
    fn form_trace_of_elementary_idempotent() {
        let base = Arc::new(StructureAlgebra::matrix(1).unwrap());
        let amp = Arc::new(base.amplify(2).unwrap());
        let mut coords = vec![Rat::zero(); 4];
        coords[0] = rint(1);
        let e11 = AlgebraElement::new(amp, coords).unwrap();
        let f = NCForm::from_element(&e11, 2);
        let traced = form_trace(&f, &base, 2).unwrap();
        // tr(E11) = 1, so the trace is the unit degree-0 form of Q
        assert_eq!(traced, NCForm::unit(base, 2));
    }
}
