//! Sparse exact linear algebra: rank, kernel, solve, homology ranks.

use super::elim::{self, Echelon, IntRow};
use super::rational::Rat;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExactError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("composite of the two maps is nonzero at column {col}")]
    CompositionNonzero { col: usize },
    #[error("index out of range: ({row}, {col})")]
    IndexOutOfRange { row: usize, col: usize },
}

/// Sparse coordinate vector, entries sorted by index, no stored zeros.
pub type SparseVec = Vec<(usize, Rat)>;

/// Sparse matrix over `Q`. Stored column-major; every stored entry is
/// nonzero and indices are in range.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    cols_data: Vec<BTreeMap<usize, Rat>>,
}

impl SparseMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        SparseMatrix {
            rows,
            cols,
            cols_data: vec![BTreeMap::new(); cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.add_entry(i, i, Rat::one()).unwrap();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Adds `v` to entry `(r, c)`, dropping the entry if it becomes zero.
    pub fn add_entry(&mut self, r: usize, c: usize, v: Rat) -> Result<(), ExactError> {
        if r >= self.rows || c >= self.cols {
            return Err(ExactError::IndexOutOfRange { row: r, col: c });
        }
        if v.is_zero() {
            return Ok(());
        }
        let col = &mut self.cols_data[c];
        let cur = col.entry(r).or_insert_with(Rat::zero);
        *cur += v;
        if cur.is_zero() {
            col.remove(&r);
        }
        Ok(())
    }

    pub fn from_rows(rows: &[Vec<Rat>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut m = Self::zero(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, v) in row.iter().enumerate() {
                m.add_entry(i, j, v.clone()).unwrap();
            }
        }
        m
    }

    pub fn get(&self, r: usize, c: usize) -> Rat {
        self.cols_data[c].get(&r).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn column(&self, c: usize) -> impl Iterator<Item = (usize, &Rat)> {
        self.cols_data[c].iter().map(|(r, v)| (*r, v))
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Rat)> {
        self.cols_data
            .iter()
            .enumerate()
            .flat_map(|(c, col)| col.iter().map(move |(r, v)| (*r, c, v)))
    }

    pub fn nnz(&self) -> usize {
        self.cols_data.iter().map(|c| c.len()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.nnz() == 0
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut t = SparseMatrix::zero(self.cols, self.rows);
        for (r, c, v) in self.entries() {
            t.add_entry(c, r, v.clone()).unwrap();
        }
        t
    }

    /// `self * rhs` (composition of linear maps; `rhs` applied first).
    pub fn mul(&self, rhs: &SparseMatrix) -> Result<SparseMatrix, ExactError> {
        if self.cols != rhs.rows {
            return Err(ExactError::DimensionMismatch(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = SparseMatrix::zero(self.rows, rhs.cols);
        for c in 0..rhs.cols {
            for (mid, w) in rhs.column(c) {
                for (r, v) in self.column(mid) {
                    out.add_entry(r, c, v * w)?;
                }
            }
        }
        Ok(out)
    }

    /// Matrix-vector product on a sparse vector.
    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        let mut acc: BTreeMap<usize, Rat> = BTreeMap::new();
        for (c, x) in v {
            for (r, a) in self.column(*c) {
                let e = acc.entry(r).or_insert_with(Rat::zero);
                *e += a * x;
            }
        }
        acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
    }

    /// Scales each column to a primitive integer vector. Column scaling
    /// preserves the column space, hence the rank.
    fn columns_as_int_rows(&self) -> Vec<IntRow> {
        self.cols_data
            .iter()
            .map(|col| scale_to_int(col.iter().map(|(r, v)| (*r, v))))
            .collect()
    }

    /// Rows as primitive integer vectors (preserves rank and kernel).
    fn rows_as_int_rows(&self) -> Vec<IntRow> {
        let mut rows: Vec<BTreeMap<usize, Rat>> = vec![BTreeMap::new(); self.rows];
        for (r, c, v) in self.entries() {
            rows[r].insert(c, v.clone());
        }
        rows.iter()
            .map(|row| scale_to_int(row.iter().map(|(c, v)| (*c, v))))
            .collect()
    }

    /// Exact rank over `Q` by fraction-free elimination with
    /// sparsity-directed pivoting.
    pub fn rank(&self) -> usize {
        // eliminate in the orientation with the smaller pivot space
        if self.rows <= self.cols {
            elim::eliminate(self.columns_as_int_rows(), self.rows).rank()
        } else {
            elim::eliminate(self.rows_as_int_rows(), self.cols).rank()
        }
    }

    fn row_echelon(&self) -> Echelon {
        elim::eliminate(self.rows_as_int_rows(), self.cols)
    }

    /// Basis of the null space; `dim = cols - rank`. Every returned vector
    /// `v` satisfies `M v = 0` exactly.
    pub fn kernel_basis(&self) -> Subspace {
        let ech = self.row_echelon();
        let rank = ech.rank();
        let mut basis = Vec::with_capacity(self.cols - rank);
        for f in 0..self.cols {
            if ech.is_pivot_col(f) {
                continue;
            }
            basis.push(back_substitute(&ech, f));
        }
        debug_assert!(basis.iter().all(|v| self.apply(v).is_empty()));
        Subspace {
            ambient_dim: self.cols,
            basis,
        }
    }

    /// One exact solution of `M x = b`, if consistent.
    pub fn solve(&self, b: &SparseVec) -> Option<Vec<Rat>> {
        // kernel of [M | -b]: a kernel vector with nonzero last coordinate
        // scales to a solution.
        let mut aug = SparseMatrix::zero(self.rows, self.cols + 1);
        for (r, c, v) in self.entries() {
            aug.add_entry(r, c, v.clone()).unwrap();
        }
        for (r, v) in b {
            aug.add_entry(*r, self.cols, -v.clone()).unwrap();
        }
        let ker = aug.kernel_basis();
        for v in &ker.basis {
            if let Some((_, last)) = v.iter().find(|(i, _)| *i == self.cols) {
                let inv = last.recip();
                let mut x = vec![Rat::zero(); self.cols];
                for (i, val) in v {
                    if *i < self.cols {
                        x[*i] = val * &inv;
                    }
                }
                return Some(x);
            }
        }
        None
    }
}

fn scale_to_int<'a>(entries: impl Iterator<Item = (usize, &'a Rat)>) -> IntRow {
    let entries: Vec<(usize, &Rat)> = entries.collect();
    let mut lcm = BigInt::one();
    for (_, v) in &entries {
        lcm = lcm.lcm(v.denom());
    }
    let mut out: IntRow = entries
        .into_iter()
        .map(|(i, v)| (i, v.numer() * (&lcm / v.denom())))
        .collect();
    // primitive form
    let mut g = BigInt::zero();
    for (_, v) in &out {
        g = g.gcd(v);
    }
    if !g.is_zero() && !g.is_one() {
        for (_, v) in out.iter_mut() {
            *v = &*v / &g;
        }
    }
    out
}

/// Solves the echelon system for the free column `f` seeded with 1.
/// Pivot rows form a triangular system under reverse insertion order.
fn back_substitute(ech: &Echelon, f: usize) -> SparseVec {
    let mut val: BTreeMap<usize, Rat> = BTreeMap::new();
    val.insert(f, Rat::one());
    for (pcol, row) in ech.pivot_rows.iter().rev() {
        let mut acc = Rat::zero();
        let mut lead = None;
        for (c, a) in row {
            if c == pcol {
                lead = Some(a);
                continue;
            }
            if let Some(v) = val.get(c) {
                acc += Rat::from_integer(a.clone()) * v;
            }
        }
        let lead = lead.expect("pivot coefficient");
        if !acc.is_zero() {
            val.insert(*pcol, -acc / Rat::from_integer(lead.clone()));
        }
    }
    // primitive integer form with positive leading sign, for determinism
    let v: Vec<(usize, Rat)> = val.into_iter().filter(|(_, x)| !x.is_zero()).collect();
    normalize_primitive(v)
}

fn normalize_primitive(v: SparseVec) -> SparseVec {
    if v.is_empty() {
        return v;
    }
    let ints = scale_to_int(v.iter().map(|(i, x)| (*i, x)));
    let sign = ints
        .first()
        .map(|(_, x)| if x.is_negative() { -1 } else { 1 })
        .unwrap_or(1);
    ints.into_iter()
        .map(|(i, x)| (i, Rat::from_integer(x * BigInt::from(sign))))
        .collect()
}

/// Span of a set of vectors inside a fixed ambient space. Basis vectors are
/// linearly independent (rank equals basis length by construction).
#[derive(Debug, Clone)]
pub struct Subspace {
    pub ambient_dim: usize,
    pub basis: Vec<SparseVec>,
}

impl Subspace {
    pub fn from_spanning(ambient_dim: usize, vectors: &[SparseVec]) -> Subspace {
        let mut ech = Echelon {
            pivot_rows: Vec::new(),
            pivot_of_col: Default::default(),
        };
        let weights = vec![1u32; ambient_dim];
        let mut basis = Vec::new();
        for v in vectors {
            let row = scale_to_int(v.iter().map(|(i, x)| (*i, x)));
            if elim::insert_row(&mut ech, row, &weights) {
                basis.push(normalize_primitive(v.clone()));
            }
        }
        Subspace { ambient_dim, basis }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        let mut ech = Echelon {
            pivot_rows: Vec::new(),
            pivot_of_col: Default::default(),
        };
        let weights = vec![1u32; self.ambient_dim];
        for b in &self.basis {
            elim::insert_row(&mut ech, scale_to_int(b.iter().map(|(i, x)| (*i, x))), &weights);
        }
        let residual = elim::reduce_row(&ech, scale_to_int(v.iter().map(|(i, x)| (*i, x))));
        residual.is_empty()
    }
}

/// `dim ker(d_out) - rank(d_in)` for consecutive maps
/// `.. -> B -> C` with `d_in : A -> B`, `d_out : B -> C`.
///
/// The composite `d_out . d_in` is verified to vanish exactly; a nonzero
/// composite signals an operator-implementation bug upstream.
pub fn homology_rank(d_in: &SparseMatrix, d_out: &SparseMatrix) -> Result<usize, ExactError> {
    if d_in.rows() != d_out.cols() {
        return Err(ExactError::DimensionMismatch(format!(
            "d_in is {}x{}, d_out is {}x{}",
            d_in.rows(),
            d_in.cols(),
            d_out.rows(),
            d_out.cols()
        )));
    }
    for c in 0..d_in.cols() {
        let col: SparseVec = d_in.column(c).map(|(r, v)| (r, v.clone())).collect();
        if !d_out.apply(&col).is_empty() {
            return Err(ExactError::CompositionNonzero { col: c });
        }
    }
    let ker = d_out.cols() - d_out.rank();
    Ok(ker - d_in.rank())
}

/// Exact determinant of a dense square matrix (fraction-free Bareiss).
pub fn det_dense(m: &[Vec<Rat>]) -> Rat {
    let n = m.len();
    if n == 0 {
        return Rat::one();
    }
    assert!(m.iter().all(|r| r.len() == n), "not square");
    // clear denominators per row, tracking the scale
    let mut scale = Rat::one();
    let mut a: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    for row in m {
        let mut lcm = BigInt::one();
        for v in row {
            lcm = lcm.lcm(v.denom());
        }
        scale *= Rat::new(BigInt::one(), lcm.clone());
        a.push(row.iter().map(|v| v.numer() * (&lcm / v.denom())).collect());
    }
    let mut sign = 1i64;
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return Rat::zero();
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[k][k] * &a[i][j] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    scale * Rat::from_integer(a[n - 1][n - 1].clone() * BigInt::from(sign))
}

/// Exact positive-semidefiniteness test for a symmetric rational matrix by
/// pivoted symmetric decomposition. Returns `Some(rank)` when PSD, `None`
/// otherwise. A zero diagonal with a nonzero residual row is indefinite
/// (it contains a hyperbolic 2x2 block).
pub fn psd_rank(g: &[Vec<Rat>]) -> Option<usize> {
    let n = g.len();
    let mut a: Vec<Vec<Rat>> = g.to_vec();
    let mut active: Vec<usize> = (0..n).collect();
    let mut rank = 0;
    while !active.is_empty() {
        if let Some(&i) = active.iter().find(|&&i| a[i][i] > Rat::zero()) {
            rank += 1;
            let d = a[i][i].clone();
            let col: Vec<(usize, Rat)> = active
                .iter()
                .filter(|&&r| r != i)
                .map(|&r| (r, a[r][i].clone()))
                .collect();
            for &(r, ref vr) in &col {
                for &(c, ref vc) in &col {
                    let delta = vr * vc / &d;
                    let cur = a[r][c].clone();
                    a[r][c] = cur - delta;
                }
            }
            active.retain(|&x| x != i);
            continue;
        }
        if active.iter().any(|&i| a[i][i] < Rat::zero()) {
            return None;
        }
        // all remaining diagonal entries vanish
        let nonzero_off = active
            .iter()
            .any(|&r| active.iter().any(|&c| !a[r][c].is_zero()));
        return if nonzero_off { None } else { Some(rank) };
    }
    Some(rank)
}
