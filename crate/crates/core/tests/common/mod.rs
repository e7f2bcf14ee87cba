//! Shared deterministic random generators for the integration suites.
#![allow(dead_code)] // each test binary uses its own subset

use ncchern_core::algebra::{AlgebraElement, StructureAlgebra};
use ncchern_core::cq::{FedosovElement, FormWord, NCForm};
use ncchern_core::cyclic::{Chain, CochainFunctional};
use ncchern_core::exact::{rat, Rat, SparseVec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_rat(rng: &mut ChaCha8Rng) -> Rat {
    let num = rng.gen_range(-9i64..=9);
    let den = rng.gen_range(1i64..=9);
    rat(num, den)
}

/// The three reference coefficient algebras: the ground field, the split
/// two-dimensional algebra and mat(2).
pub fn reference_algebras() -> Vec<Arc<StructureAlgebra>> {
    vec![
        Arc::new(StructureAlgebra::matrix(1).unwrap()),
        Arc::new(
            StructureAlgebra::product(&[
                StructureAlgebra::matrix(1).unwrap(),
                StructureAlgebra::matrix(1).unwrap(),
            ])
            .unwrap(),
        ),
        Arc::new(StructureAlgebra::matrix(2).unwrap()),
    ]
}

pub fn random_chain(
    rng: &mut ChaCha8Rng,
    alg: &Arc<StructureAlgebra>,
    degree: usize,
    terms: usize,
) -> Chain {
    let d = alg.dim();
    let mut c = Chain::zero(alg.clone(), degree);
    for _ in 0..terms {
        let word: Vec<u16> = (0..=degree).map(|_| rng.gen_range(0..d) as u16).collect();
        c.add_term(word, random_rat(rng));
    }
    c
}

pub fn random_cochain(
    rng: &mut ChaCha8Rng,
    alg: &Arc<StructureAlgebra>,
    degree: usize,
) -> CochainFunctional {
    let len = alg.dim().pow((degree + 1) as u32);
    let values = (0..len).map(|_| random_rat(rng)).collect();
    CochainFunctional::new(alg.clone(), degree, values).unwrap()
}

/// Random even form with terms in degrees 0, 2, 4 below the cap.
pub fn random_even_form(
    rng: &mut ChaCha8Rng,
    alg: &Arc<StructureAlgebra>,
    cap: usize,
    terms: usize,
) -> FedosovElement {
    let d = alg.dim();
    let pivot = alg.unit_pivot();
    let slots: Vec<u16> = (0..d as u16).filter(|&i| i as usize != pivot).collect();
    let mut f = NCForm::zero(alg.clone(), cap);
    for _ in 0..terms {
        let degree = 2 * rng.gen_range(0..=(cap / 2).min(2));
        let head = rng.gen_range(0..d) as u16;
        let word = FormWord {
            head,
            slots: (0..degree)
                .map(|_| slots[rng.gen_range(0..slots.len())])
                .collect(),
        };
        f.add_term(word, random_rat(rng));
    }
    FedosovElement::new(f).unwrap()
}

pub fn random_element(
    rng: &mut ChaCha8Rng,
    alg: &Arc<StructureAlgebra>,
) -> AlgebraElement {
    let coords = (0..alg.dim()).map(|_| random_rat(rng)).collect();
    AlgebraElement::new(alg.clone(), coords).unwrap()
}

/// Rejection-samples an invertible element.
pub fn random_invertible(
    rng: &mut ChaCha8Rng,
    alg: &Arc<StructureAlgebra>,
) -> AlgebraElement {
    loop {
        let u = random_element(rng, alg);
        if u.inverse().is_some() {
            return u;
        }
    }
}

/// Dense coordinates of a chain in the basis-word indexing of the
/// operator matrices.
pub fn chain_to_vec(alg: &Arc<StructureAlgebra>, c: &Chain) -> SparseVec {
    let d = alg.dim();
    let mut out: Vec<(usize, Rat)> = c
        .coeffs
        .iter()
        .map(|(w, v)| {
            let idx = w.iter().fold(0usize, |acc, &i| acc * d + i as usize);
            (idx, v.clone())
        })
        .collect();
    out.sort_by_key(|(i, _)| *i);
    out
}
