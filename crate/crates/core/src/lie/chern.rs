//! Integer coefficient function `phi` and the explicit Chern character
//! coefficient tables for SU(n+1) and SO(2n+1).
//!
//! Table rows are the characters of the generating K-theory classes
//! (fundamental representations, plus the extra spinor-induced class for
//! SO(2n+1)); columns are the odd primitive cohomology generators. A
//! nonsingular table certifies that the character images generate the
//! exterior algebra.

use super::exterior::{ExtElement, ExteriorAlgebra};
use super::{primitive_degrees, GroupDescriptor, LieError};
use crate::exact::{det_dense, fmt_rat, Rat};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;
use std::sync::Mutex;

static FACTORIALS: Mutex<Vec<Option<BigInt>>> = Mutex::new(Vec::new());

/// Memoized exact factorial. The cache is internally synchronized and its
/// presence never changes results.
fn fact(n: usize) -> BigInt {
    let mut cache = FACTORIALS.lock().unwrap();
    if cache.len() <= n {
        cache.resize(n + 1, None);
    }
    if let Some(v) = &cache[n] {
        return v.clone();
    }
    drop(cache);
    let v = crate::exact::factorial(n);
    let mut cache = FACTORIALS.lock().unwrap();
    cache[n] = Some(v.clone());
    v
}

fn binom(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    fact(n) / (fact(k) * fact(n - k))
}

/// `phi(n, k, q) = sum_{i=1}^{k} (-1)^(i-1) C(n, k-i) i^(q-1)`,
/// exact big-integer summation. Requires `1 <= k <= n` and `q >= 1`.
pub fn phi(n: usize, k: usize, q: usize) -> Result<BigInt, LieError> {
    if k == 0 || k > n || q == 0 {
        return Err(LieError::DomainError(format!(
            "phi requires 1 <= k <= n and q >= 1, got (n, k, q) = ({n}, {k}, {q})"
        )));
    }
    let mut acc = BigInt::zero();
    for i in 1..=k {
        let term = binom(n, k - i) * BigInt::from(i).pow((q - 1) as u32);
        if i % 2 == 1 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    Ok(acc)
}

/// Coefficient table of the character images in the primitive generators.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ChernTable {
    pub group: String,
    pub row_labels: Vec<String>,
    pub col_labels: Vec<String>,
    #[serde(skip)]
    pub entries: Vec<Vec<Rat>>,
}

impl ChernTable {
    pub fn rows(&self) -> usize {
        self.entries.len()
    }

    pub fn cols(&self) -> usize {
        self.entries.first().map_or(0, |r| r.len())
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    /// Row `k` (zero-based) as a degree-one element of the exterior algebra
    /// on the table's generators.
    pub fn row_element(&self, k: usize, algebra: &ExteriorAlgebra) -> ExtElement {
        let mut e = ExtElement::zero(algebra);
        for (i, c) in self.entries[k].iter().enumerate() {
            e.add_generator_multiple(i, c.clone());
        }
        e
    }

    /// CSV: header of generator names, one row per class, entries as exact
    /// rational strings; square tables carry a trailing `det` footer row.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str("label");
        for c in &self.col_labels {
            out.push(',');
            out.push_str(c);
        }
        out.push('\n');
        for (lbl, row) in self.row_labels.iter().zip(&self.entries) {
            out.push_str(lbl);
            for v in row {
                out.push(',');
                out.push_str(&fmt_rat(v));
            }
            out.push('\n');
        }
        if self.is_square() {
            out.push_str(&format!("det,{}\n", fmt_rat(&det_dense(&self.entries))));
        }
        out
    }

    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Row<'a> {
            label: &'a str,
            coeffs: Vec<String>,
        }
        #[derive(Serialize)]
        struct Table<'a> {
            group: &'a str,
            columns: &'a [String],
            rows: Vec<Row<'a>>,
            #[serde(skip_serializing_if = "Option::is_none")]
            det: Option<String>,
        }
        let table = Table {
            group: &self.group,
            columns: &self.col_labels,
            rows: self
                .row_labels
                .iter()
                .zip(&self.entries)
                .map(|(label, row)| Row {
                    label,
                    coeffs: row.iter().map(fmt_rat).collect(),
                })
                .collect(),
            det: self
                .is_square()
                .then(|| fmt_rat(&det_dense(&self.entries))),
        };
        serde_json::to_string_pretty(&table).expect("serializable") + "\n"
    }
}

/// SU(n+1) table: `M[k][i] = (-1)^i / i! * phi(n+1, k, i+1)` for
/// `k, i = 1..n`, columns `x_3, ..., x_{2n+1}`.
pub fn chern_su(n: usize) -> Result<ChernTable, LieError> {
    if n == 0 {
        return Err(LieError::DomainError("chern_su requires n >= 1".into()));
    }
    let g = GroupDescriptor::su(n)?;
    let cols: Vec<String> = primitive_degrees(&g).iter().map(|d| format!("x{d}")).collect();
    let mut entries = Vec::with_capacity(n);
    for k in 1..=n {
        let mut row = Vec::with_capacity(n);
        for i in 1..=n {
            let sign = if i % 2 == 0 { BigInt::one() } else { -BigInt::one() };
            row.push(Rat::new(sign * phi(n + 1, k, i + 1)?, fact(i)));
        }
        entries.push(row);
    }
    Ok(ChernTable {
        group: g.to_string(),
        row_labels: (1..=n).map(|k| format!("rho_{k}")).collect(),
        col_labels: cols,
        entries,
    })
}

/// Which rows the SO(2n+1) table carries besides the epsilon class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SoRowRange {
    /// lambda_1 .. lambda_{n-1} plus the epsilon row: a square table.
    #[default]
    ToNMinus1,
    /// lambda_1 .. lambda_n plus the epsilon row: (n+1) x n.
    ToN,
}

/// SO(2n+1) table, columns `x_3, x_7, ..., x_{4n-1}`:
/// lambda rows `2 (-1)^(i-1) / (2i-1)! * phi(2n+1, k, 2i)` and an epsilon
/// row `(-1)^(i-1) / (2^(n-1) (2i-1)!) * sum_k phi(2n+1, k, 2i)`.
pub fn chern_so_odd(n: usize) -> Result<ChernTable, LieError> {
    chern_so_odd_with(n, SoRowRange::default())
}

pub fn chern_so_odd_with(n: usize, range: SoRowRange) -> Result<ChernTable, LieError> {
    if n < 2 {
        return Err(LieError::DomainError("chern_so_odd requires n >= 2".into()));
    }
    let g = GroupDescriptor::so_odd(n)?;
    let cols: Vec<String> = primitive_degrees(&g).iter().map(|d| format!("x{d}")).collect();
    let lambda_max = match range {
        SoRowRange::ToNMinus1 => n - 1,
        SoRowRange::ToN => n,
    };
    let mut entries = Vec::new();
    let mut labels = Vec::new();
    for k in 1..=lambda_max {
        let mut row = Vec::with_capacity(n);
        for i in 1..=n {
            let sign = if i % 2 == 1 { BigInt::one() } else { -BigInt::one() };
            row.push(Rat::new(
                sign * BigInt::from(2) * phi(2 * n + 1, k, 2 * i)?,
                fact(2 * i - 1),
            ));
        }
        entries.push(row);
        labels.push(format!("lambda_{k}"));
    }
    let mut eps = Vec::with_capacity(n);
    for i in 1..=n {
        let sign = if i % 2 == 1 { BigInt::one() } else { -BigInt::one() };
        let mut s = BigInt::zero();
        for k in 1..=n {
            s += phi(2 * n + 1, k, 2 * i)?;
        }
        eps.push(Rat::new(
            sign * s,
            BigInt::from(2).pow((n - 1) as u32) * fact(2 * i - 1),
        ));
    }
    entries.push(eps);
    labels.push(format!("epsilon_{}", 2 * n + 1));
    Ok(ChernTable {
        group: g.to_string(),
        row_labels: labels,
        col_labels: cols,
        entries,
    })
}

/// Exact determinant; `true` iff nonzero, certifying that the table rows
/// generate the primitive space.
pub fn is_generating(t: &ChernTable) -> Result<(bool, Rat), LieError> {
    if !t.is_square() {
        return Err(LieError::NonSquare {
            rows: t.rows(),
            cols: t.cols(),
        });
    }
    let det = det_dense(&t.entries);
    Ok((!det.is_zero(), det))
}
