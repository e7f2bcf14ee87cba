//! Irreducible-representation enumeration by the Weyl dimension formula.

use super::{GroupDescriptor, GroupFamily};
use num_bigint::BigInt;
use num_traits::{One, Zero};

/// A dominant highest weight (Dynkin labels) together with its dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Irrep {
    pub weight: Vec<usize>,
    pub dim: BigInt,
}

/// Weyl dimension of the irreducible representation with the given Dynkin
/// labels. For `SOOdd` the weight must be a representation of the group
/// SO(2n+1) itself (last label even), which `irrep_dims` guarantees.
pub fn weyl_dim(g: &GroupDescriptor, weight: &[usize]) -> BigInt {
    assert_eq!(weight.len(), g.rank(), "weight length must equal the rank");
    match g.family {
        GroupFamily::SU => dim_type_a(weight),
        GroupFamily::SOOdd => dim_type_b(weight),
        GroupFamily::Sp => dim_type_c(weight),
    }
}

/// dim = prod over 1 <= i <= j <= n of (a_i + ... + a_j + j - i + 1) / (j - i + 1).
fn dim_type_a(a: &[usize]) -> BigInt {
    let n = a.len();
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..n {
        let mut s = 0usize;
        for j in i..n {
            s += a[j];
            num *= BigInt::from(s + (j - i) + 1);
            den *= BigInt::from((j - i) + 1);
        }
    }
    exact_div(num, den)
}

/// Doubled e-coordinates L_i = 2*(a_i + .. + a_{n-1}) + a_n + 2(n-i) + 1.
fn doubled_coords_b(a: &[usize]) -> Vec<BigInt> {
    let n = a.len();
    (0..n)
        .map(|i| {
            let s: usize = a[i..n - 1].iter().sum();
            BigInt::from(2 * s + a[n - 1] + 2 * (n - 1 - i) + 1)
        })
        .collect()
}

fn dim_type_b(a: &[usize]) -> BigInt {
    let n = a.len();
    let l = doubled_coords_b(a);
    let l0 = doubled_coords_b(&vec![0; n]);
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..n {
        // short root e_i
        num *= &l[i];
        den *= &l0[i];
        for j in i + 1..n {
            // roots e_i - e_j and e_i + e_j
            num *= (&l[i] - &l[j]) * (&l[i] + &l[j]);
            den *= (&l0[i] - &l0[j]) * (&l0[i] + &l0[j]);
        }
    }
    exact_div(num, den)
}

/// L_i = a_i + ... + a_n + (n - i + 1).
fn coords_c(a: &[usize]) -> Vec<BigInt> {
    let n = a.len();
    (0..n)
        .map(|i| {
            let s: usize = a[i..n].iter().sum();
            BigInt::from(s + (n - i))
        })
        .collect()
}

fn dim_type_c(a: &[usize]) -> BigInt {
    let n = a.len();
    let l = coords_c(a);
    let l0 = coords_c(&vec![0; n]);
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..n {
        // long root 2 e_i
        num *= &l[i];
        den *= &l0[i];
        for j in i + 1..n {
            num *= (&l[i] - &l[j]) * (&l[i] + &l[j]);
            den *= (&l0[i] - &l0[j]) * (&l0[i] + &l0[j]);
        }
    }
    exact_div(num, den)
}

fn exact_div(num: BigInt, den: BigInt) -> BigInt {
    let (q, r) = num_integer::Integer::div_rem(&num, &den);
    debug_assert!(r.is_zero(), "Weyl dimension must be an integer");
    q
}

/// For SO(2n+1) only weights with an even spin label exponentiate to the
/// group (as opposed to its double cover).
fn weight_admissible(g: &GroupDescriptor, w: &[usize]) -> bool {
    match g.family {
        GroupFamily::SOOdd => w[g.rank() - 1] % 2 == 0,
        _ => true,
    }
}

/// First `count` dominant-weight orbits sorted by (dimension ascending,
/// lexicographic weight). The dimension is strictly increasing in every
/// Dynkin label, so the candidate set below any dimension bound is finite
/// and downward closed; the bound doubles until enough weights are found.
pub fn irrep_dims(g: &GroupDescriptor, count: usize) -> Vec<Irrep> {
    if count == 0 {
        return Vec::new();
    }
    let mut bound = BigInt::from(8);
    loop {
        let mut found: Vec<Irrep> = Vec::new();
        collect(g, &mut vec![0; g.rank()], 0, &bound, &mut found);
        if found.len() >= count {
            found.sort_by(|x, y| x.dim.cmp(&y.dim).then_with(|| x.weight.cmp(&y.weight)));
            found.truncate(count);
            return found;
        }
        bound *= BigInt::from(4);
    }
}

fn collect(g: &GroupDescriptor, w: &mut Vec<usize>, pos: usize, bound: &BigInt, out: &mut Vec<Irrep>) {
    if pos == w.len() {
        if weight_admissible(g, w) {
            let dim = weyl_dim(g, w);
            if &dim <= bound {
                out.push(Irrep {
                    weight: w.clone(),
                    dim,
                });
            }
        }
        return;
    }
    let mut v = 0usize;
    loop {
        w[pos] = v;
        // prune: the admissible variant of this prefix with minimal tail
        let mut probe = w.clone();
        for t in probe.iter_mut().skip(pos + 1) {
            *t = 0;
        }
        if &weyl_dim(g, &probe) > bound {
            w[pos] = 0;
            return;
        }
        collect(g, w, pos + 1, bound, out);
        v += 1;
        // SO(2n+1) spin label steps by 2 to stay on group weights
        if pos == w.len() - 1 && matches!(g.family, GroupFamily::SOOdd) && v % 2 == 1 {
            v += 1;
        }
    }
}
