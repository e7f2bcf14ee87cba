//! Hochschild / cyclic / periodic homology ranks from the first-quadrant
//! bicomplex with `b` in even columns, `-b'` in odd columns and the
//! horizontal maps `1 - lambda` (odd to even) and `N` (even to odd).
//!
//! The total complex is two-periodic in the plane; at a finite degree cap
//! the periodic ranks are declared by stabilization of the cyclic ranks
//! across the top two degrees of each parity.

use super::chain::{b_matrix, bprime_matrix, lambda_matrix, n_matrix};
use super::{CyclicError, HomologyMethod, HomologyReport};
use crate::algebra::StructureAlgebra;
use crate::exact::{homology_rank, SparseMatrix};
use std::sync::Arc;

/// `dim Tot_n = sum_{p=0}^{n} dim C_{n-p}`.
pub fn total_dim(alg: &StructureAlgebra, n: usize) -> usize {
    let d = alg.dim();
    (0..=n).map(|p| d.pow((n - p + 1) as u32)).sum()
}

struct Blocks {
    b: Vec<Option<SparseMatrix>>,
    bp: Vec<Option<SparseMatrix>>,
    one_minus_lambda: Vec<Option<SparseMatrix>>,
    n_op: Vec<Option<SparseMatrix>>,
}

impl Blocks {
    fn new(top: usize) -> Self {
        Blocks {
            b: vec![None; top + 1],
            bp: vec![None; top + 1],
            one_minus_lambda: vec![None; top + 1],
            n_op: vec![None; top + 1],
        }
    }

    fn b(&mut self, alg: &StructureAlgebra, q: usize) -> &SparseMatrix {
        self.b[q].get_or_insert_with(|| b_matrix(alg, q))
    }

    fn bp(&mut self, alg: &StructureAlgebra, q: usize) -> &SparseMatrix {
        self.bp[q].get_or_insert_with(|| bprime_matrix(alg, q))
    }

    fn oml(&mut self, alg: &StructureAlgebra, q: usize) -> &SparseMatrix {
        self.one_minus_lambda[q].get_or_insert_with(|| {
            let d = alg.dim().pow((q + 1) as u32);
            let mut m = SparseMatrix::identity(d);
            for (r, c, v) in lambda_matrix(alg, q).entries() {
                m.add_entry(r, c, -v.clone()).unwrap();
            }
            m
        })
    }

    fn n_op(&mut self, alg: &StructureAlgebra, q: usize) -> &SparseMatrix {
        self.n_op[q].get_or_insert_with(|| n_matrix(alg, q))
    }
}

fn copy_block(dst: &mut SparseMatrix, src: &SparseMatrix, row_off: usize, col_off: usize, negate: bool) {
    for (r, c, v) in src.entries() {
        let val = if negate { -v.clone() } else { v.clone() };
        dst.add_entry(row_off + r, col_off + c, val).unwrap();
    }
}

/// Total differential `Tot_n -> Tot_{n-1}` for `n >= 1`. Blocks are listed
/// by column index `p` (row degree `q = n - p`).
pub fn total_differential(alg: &StructureAlgebra, n: usize) -> SparseMatrix {
    assert!(n >= 1);
    let mut blocks = Blocks::new(n);
    total_differential_cached(alg, n, &mut blocks)
}

fn total_differential_cached(
    alg: &StructureAlgebra,
    n: usize,
    blocks: &mut Blocks,
) -> SparseMatrix {
    let d = alg.dim();
    let src_off: Vec<usize> = (0..=n)
        .scan(0usize, |acc, p| {
            let here = *acc;
            *acc += d.pow((n - p + 1) as u32);
            Some(here)
        })
        .collect();
    let dst_off: Vec<usize> = (0..n)
        .scan(0usize, |acc, p| {
            let here = *acc;
            *acc += d.pow((n - 1 - p + 1) as u32);
            Some(here)
        })
        .collect();
    let mut m = SparseMatrix::zero(total_dim(alg, n - 1), total_dim(alg, n));
    for p in 0..=n {
        let q = n - p;
        // vertical: (p, q) -> (p, q - 1), b in even columns, -b' in odd
        if q >= 1 {
            if p % 2 == 0 {
                let blk = blocks.b(alg, q).clone();
                copy_block(&mut m, &blk, dst_off[p], src_off[p], false);
            } else {
                let blk = blocks.bp(alg, q).clone();
                copy_block(&mut m, &blk, dst_off[p], src_off[p], true);
            }
        }
        // horizontal: (p, q) -> (p - 1, q), 1 - lambda from odd columns,
        // N from even columns
        if p >= 1 {
            if p % 2 == 1 {
                let blk = blocks.oml(alg, q).clone();
                copy_block(&mut m, &blk, dst_off[p - 1], src_off[p], false);
            } else {
                let blk = blocks.n_op(alg, q).clone();
                copy_block(&mut m, &blk, dst_off[p - 1], src_off[p], false);
            }
        }
    }
    m
}

/// Hochschild, cyclic and stabilized periodic ranks of `A` up to the
/// degree cap. Requires `cap >= 2` and `dim(A)^(cap+1) <= max_dim`.
pub fn bicomplex_homology(
    alg: &Arc<StructureAlgebra>,
    cap: usize,
    max_dim: usize,
) -> Result<HomologyReport, CyclicError> {
    if cap < 2 {
        return Err(CyclicError::CapTooSmall);
    }
    let d = alg.dim();
    let needed = (d as u128).checked_pow((cap + 1) as u32);
    match needed {
        Some(n) if n <= max_dim as u128 => {}
        _ => {
            return Err(CyclicError::SizeBound {
                needed: needed.map_or("overflow".into(), |n| n.to_string()),
                bound: max_dim,
            })
        }
    }

    let mut blocks = Blocks::new(cap + 1);

    // Hochschild column: hh[n] = ker(b_n) / im(b_{n+1})
    let mut hh = Vec::with_capacity(cap + 1);
    for n in 0..=cap {
        let d_out = if n == 0 {
            SparseMatrix::zero(0, d)
        } else {
            blocks.b(alg, n).clone()
        };
        let d_in = blocks.b(alg, n + 1).clone();
        hh.push(homology_rank(&d_in, &d_out)?);
    }

    // total complex: hc[n] = ker(del_n) / im(del_{n+1})
    let mut dels: Vec<SparseMatrix> = Vec::with_capacity(cap + 2);
    dels.push(SparseMatrix::zero(0, total_dim(alg, 0)));
    for n in 1..=cap + 1 {
        dels.push(total_differential_cached(alg, n, &mut blocks));
    }
    let mut hc = Vec::with_capacity(cap + 1);
    for n in 0..=cap {
        hc.push(homology_rank(&dels[n + 1], &dels[n])?);
    }

    let (hp_even, even_at, even_stable) = stabilize(&hc, 0);
    let (hp_odd, _, odd_stable) = stabilize(&hc, 1);
    Ok(HomologyReport {
        algebra: alg.label().to_string(),
        method: HomologyMethod::Bicomplex,
        cap,
        hh,
        hc,
        hp_even,
        hp_odd,
        stable: even_stable && odd_stable,
        stabilized_at: even_at,
    })
}

/// Rank at the top degree of the given parity, with the stability flag
/// comparing the top two degrees of that parity when two are available.
fn stabilize(hc: &[usize], parity: usize) -> (usize, usize, bool) {
    let degs: Vec<usize> = (0..hc.len()).filter(|n| n % 2 == parity).collect();
    let &top = degs.last().expect("cap >= 2 gives both parities");
    let stable = if degs.len() >= 2 {
        hc[degs[degs.len() - 2]] == hc[top]
    } else {
        true
    };
    (hc[top], top, stable)
}
