//! Fraction-free sparse elimination over the integers.
//!
//! Rows are scaled to integer vectors up front (row scaling changes neither
//! rank nor kernel). Updates are Bareiss-style cross-multiplications
//! `row <- (a/g)*row - (b/g)*pivot` followed by a content (gcd) reduction,
//! so no rational arithmetic happens inside the elimination loop. Pivot
//! columns are chosen by static column occupancy and rows are processed
//! sparsest first, a Markowitz-flavored ordering that keeps fill-in low on
//! the very sparse operator matrices this crate produces.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use std::collections::HashMap;

/// Sparse integer row: `(column, coefficient)` sorted by column.
pub type IntRow = Vec<(usize, BigInt)>;

pub struct Echelon {
    /// Pivot rows in insertion order, each tagged with its pivot column.
    /// Row `k` has no support on the pivot columns of rows `0..k`.
    pub pivot_rows: Vec<(usize, IntRow)>,
    /// Pivot column -> index into `pivot_rows`.
    pub pivot_of_col: HashMap<usize, usize>,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivot_rows.len()
    }

    pub fn is_pivot_col(&self, c: usize) -> bool {
        self.pivot_of_col.contains_key(&c)
    }
}

fn content(row: &IntRow) -> BigInt {
    let mut g = BigInt::zero();
    for (_, v) in row {
        g = g.gcd(v);
        if g == BigInt::from(1) {
            break;
        }
    }
    g
}

fn divide_by_content(row: &mut IntRow) {
    let g = content(row);
    if !g.is_zero() && g != BigInt::from(1) {
        for (_, v) in row.iter_mut() {
            *v = &*v / &g;
        }
    }
}

/// `(a/g)*row - (b/g)*pivot` on sorted sparse rows.
fn combine(row: &IntRow, a: &BigInt, pivot: &IntRow, b: &BigInt) -> IntRow {
    let g = a.gcd(b);
    let ca = a / &g;
    let cb = b / &g;
    let mut out = Vec::with_capacity(row.len() + pivot.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < pivot.len() {
        let take_row = j >= pivot.len() || (i < row.len() && row[i].0 < pivot[j].0);
        let take_piv = i >= row.len() || (j < pivot.len() && pivot[j].0 < row[i].0);
        if take_row {
            out.push((row[i].0, &ca * &row[i].1));
            i += 1;
        } else if take_piv {
            out.push((pivot[j].0, -(&cb * &pivot[j].1)));
            j += 1;
        } else {
            let v = &ca * &row[i].1 - &cb * &pivot[j].1;
            if !v.is_zero() {
                out.push((row[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Reduces `row` against the current pivots until it has no support on any
/// pivot column; returns the reduced row (possibly empty).
pub fn reduce_row(ech: &Echelon, mut row: IntRow) -> IntRow {
    loop {
        let hit = row
            .iter()
            .find_map(|(c, _)| ech.pivot_of_col.get(c).copied());
        let Some(k) = hit else { break };
        let (pcol, pivot) = &ech.pivot_rows[k];
        let b = row
            .iter()
            .find(|(c, _)| c == pcol)
            .map(|(_, v)| v.clone())
            .expect("pivot column present");
        let a = pivot
            .iter()
            .find(|(c, _)| c == pcol)
            .map(|(_, v)| v.clone())
            .expect("pivot row has its pivot");
        row = combine(&row, &a, pivot, &b);
        divide_by_content(&mut row);
    }
    row
}

/// Eliminates a list of integer rows. `col_weight` biases pivot-column
/// selection toward sparsely populated columns.
pub fn eliminate(mut rows: Vec<IntRow>, cols: usize) -> Echelon {
    let mut col_weight: Vec<u32> = vec![0; cols];
    for r in &rows {
        for (c, _) in r {
            col_weight[*c] += 1;
        }
    }
    // sparsest rows first
    rows.sort_by_key(|r| r.len());

    let mut ech = Echelon {
        pivot_rows: Vec::new(),
        pivot_of_col: HashMap::new(),
    };
    for row in rows {
        insert_row(&mut ech, row, &col_weight);
    }
    ech
}

/// Reduce-then-insert of a single row; returns true when the row added a pivot.
pub fn insert_row(ech: &mut Echelon, row: IntRow, col_weight: &[u32]) -> bool {
    let mut row = reduce_row(ech, row);
    if row.is_empty() {
        return false;
    }
    divide_by_content(&mut row);
    // pivot on the entry whose column occurs least in the input
    let (pcol, _) = row
        .iter()
        .map(|(c, v)| (*c, v))
        .min_by_key(|(c, v)| (col_weight.get(*c).copied().unwrap_or(0), v.abs(), *c))
        .expect("nonempty row");
    let idx = ech.pivot_rows.len();
    ech.pivot_of_col.insert(pcol, idx);
    ech.pivot_rows.push((pcol, row));
    true
}
