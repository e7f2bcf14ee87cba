//! Rank reports over the rationals for cyclic group algebras.
//!
//! Over `Q` the even periodic rank of the order-`m` group algebra is `m`
//! (the full dimension of the commutative algebra); the two independent
//! engines must agree on it. Counting simple factors over `Q` instead
//! would give the number of divisors of `m`; the reports state `Q`-ranks.

use ncchern_core::algebra::StructureAlgebra;
use ncchern_core::cq::x_complex_homology;
use ncchern_core::cyclic::{bicomplex_homology, DEFAULT_MAX_DIM};
use std::sync::Arc;

#[test]
fn cyclic_group_even_rank_is_the_order() {
    for m in 2..=4usize {
        let alg = Arc::new(StructureAlgebra::cyclic_group(m).unwrap());
        let bi = bicomplex_homology(&alg, 4, DEFAULT_MAX_DIM).unwrap();
        assert!(bi.stable);
        assert_eq!((bi.hp_even, bi.hp_odd), (m, 0), "bicomplex on cyclic({m})");
        let x = x_complex_homology(&alg, 2, DEFAULT_MAX_DIM).unwrap();
        assert_eq!((x.hp_even, x.hp_odd), (m, 0), "x-complex on cyclic({m})");
    }
}

#[test]
fn mat3_cross_method() {
    let m3 = Arc::new(StructureAlgebra::matrix(3).unwrap());
    let bi = bicomplex_homology(&m3, 2, DEFAULT_MAX_DIM).unwrap();
    assert_eq!(bi.hh, vec![1, 0, 0]);
    assert_eq!((bi.hp_even, bi.hp_odd, bi.stable), (1, 0, true));
    let x = x_complex_homology(&m3, 1, DEFAULT_MAX_DIM).unwrap();
    assert_eq!((x.hp_even, x.hp_odd), (1, 0));
}
