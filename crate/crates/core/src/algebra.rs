//! Finite-dimensional unital involutive algebras presented by structure
//! constants, with constructors for matrix algebras, finite products,
//! cyclic group algebras and the ideal stages of a compact group
//! C*-algebra, plus trace functionals and their axiom validator.

use crate::exact::{fmt_rat, psd_rank, Rat, SparseMatrix};
use crate::lie::{irrep_dims, GroupDescriptor};
use num_traits::{One, Zero};
use serde::Serialize;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("size parameter must be >= 1")]
    InvalidSize,
    #[error("product of an empty family")]
    EmptyProduct,
    #[error("elements belong to different algebras ({0} vs {1})")]
    Mismatch(String, String),
    #[error("structure constants violate an algebra axiom: {0}")]
    Invariant(String),
    #[error("representation dimension {0} does not fit in machine range")]
    DimensionOverflow(String),
}

type SparseRow = Vec<(usize, Rat)>;

/// A unital involutive algebra over `Q` given by a basis, rational
/// structure constants `e_i e_j = sum_k c[i][j][k] e_k`, the coordinates of
/// the unit, and the involution matrix (row `i` holds the coordinates of
/// `e_i*`).
#[derive(Debug, Clone, PartialEq)]
pub struct StructureAlgebra {
    label: String,
    dim: usize,
    basis_labels: Vec<String>,
    sc: Vec<Vec<SparseRow>>,
    unit: Vec<Rat>,
    involution: Vec<Vec<Rat>>,
}

impl StructureAlgebra {
    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis_labels(&self) -> &[String] {
        &self.basis_labels
    }

    pub fn unit_coords(&self) -> &[Rat] {
        &self.unit
    }

    pub fn involution_row(&self, i: usize) -> &[Rat] {
        &self.involution[i]
    }

    /// `e_i * e_j` as a sparse coordinate vector.
    pub fn mul_basis(&self, i: usize, j: usize) -> &[(usize, Rat)] {
        &self.sc[i][j]
    }

    /// Product of two dense coordinate vectors.
    pub fn mul_vec(&self, a: &[Rat], b: &[Rat]) -> Vec<Rat> {
        let mut out = vec![Rat::zero(); self.dim];
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if bj.is_zero() {
                    continue;
                }
                for (k, c) in &self.sc[i][j] {
                    out[*k] += ai * bj * c;
                }
            }
        }
        out
    }

    /// Involution applied to a dense coordinate vector.
    pub fn involute_vec(&self, a: &[Rat]) -> Vec<Rat> {
        let mut out = vec![Rat::zero(); self.dim];
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (k, c) in self.involution[i].iter().enumerate() {
                if !c.is_zero() {
                    out[k] += ai * c;
                }
            }
        }
        out
    }

    /// Index of the last basis vector supporting the unit; the remaining
    /// basis classes form a basis of `A / Q*1`.
    pub fn unit_pivot(&self) -> usize {
        self.unit
            .iter()
            .rposition(|c| !c.is_zero())
            .expect("unital algebra")
    }

    /// Full invariant check: associativity on all basis triples, two-sided
    /// unit, involution an anti-homomorphism of order two. Runs in test
    /// suites; cost is cubic in the dimension.
    pub fn check_invariants(&self) -> Result<(), AlgebraError> {
        let d = self.dim;
        if self.unit.len() != d
            || self.sc.len() != d
            || self.involution.len() != d
            || self.basis_labels.len() != d
        {
            return Err(AlgebraError::Invariant("field lengths disagree".into()));
        }
        let basis = |i: usize| {
            let mut v = vec![Rat::zero(); d];
            v[i] = Rat::one();
            v
        };
        for i in 0..d {
            let ei = basis(i);
            let left = self.mul_vec(&self.unit, &ei);
            let right = self.mul_vec(&ei, &self.unit);
            if left != ei || right != ei {
                return Err(AlgebraError::Invariant(format!("unit fails on basis {i}")));
            }
        }
        for i in 0..d {
            for j in 0..d {
                let eij = self.mul_vec(&basis(i), &basis(j));
                for k in 0..d {
                    let lhs = self.mul_vec(&eij, &basis(k));
                    let rhs = self.mul_vec(&basis(i), &self.mul_vec(&basis(j), &basis(k)));
                    if lhs != rhs {
                        return Err(AlgebraError::Invariant(format!(
                            "associativity fails at ({i}, {j}, {k})"
                        )));
                    }
                }
                // (e_i e_j)* = e_j* e_i*
                let inv_prod = self.involute_vec(&eij);
                let prod_inv =
                    self.mul_vec(&self.involution[j].clone(), &self.involution[i].clone());
                if inv_prod != prod_inv {
                    return Err(AlgebraError::Invariant(format!(
                        "involution is not an anti-homomorphism at ({i}, {j})"
                    )));
                }
            }
            let twice = self.involute_vec(&self.involution[i].clone());
            if twice != basis(i) {
                return Err(AlgebraError::Invariant(format!(
                    "involution squared is not the identity at {i}"
                )));
            }
        }
        Ok(())
    }

    /// Dimension of the center, computed as the kernel of the stacked
    /// commutator actions `x -> e_i x - x e_i`.
    pub fn center_dim(&self) -> usize {
        let d = self.dim;
        let mut m = SparseMatrix::zero(d * d, d);
        for i in 0..d {
            for j in 0..d {
                for (k, c) in &self.sc[i][j] {
                    m.add_entry(i * d + k, j, c.clone()).unwrap();
                }
                for (k, c) in &self.sc[j][i] {
                    m.add_entry(i * d + k, j, -c.clone()).unwrap();
                }
            }
        }
        d - m.rank()
    }

    /// Bilinear trace form of the left regular representation,
    /// `T[a][b] = trace(L_{e_a} L_{e_b})`.
    pub fn regular_trace_form(&self) -> Vec<Vec<Rat>> {
        let d = self.dim;
        let mut t = vec![vec![Rat::zero(); d]; d];
        for a in 0..d {
            for b in 0..d {
                let mut acc = Rat::zero();
                // trace of x -> e_a (e_b x): sum over basis x = e_j of the
                // e_j coefficient of e_a e_b e_j
                for j in 0..d {
                    for (mid, c1) in &self.sc[b][j] {
                        for (k, c2) in &self.sc[a][*mid] {
                            if *k == j {
                                acc += c1 * c2;
                            }
                        }
                    }
                }
                t[a][b] = acc;
            }
        }
        t
    }

    /// General constructor from raw data; the full invariant check runs
    /// before the algebra is returned. `sc` lists `(i, j, k, c)` entries
    /// of `e_i e_j = sum_k c e_k`.
    pub fn from_parts(
        label: &str,
        basis_labels: Vec<String>,
        sc_entries: &[(usize, usize, usize, Rat)],
        unit: Vec<Rat>,
        involution: Vec<Vec<Rat>>,
    ) -> Result<Self, AlgebraError> {
        let dim = basis_labels.len();
        if dim == 0 {
            return Err(AlgebraError::InvalidSize);
        }
        let mut sc = vec![vec![Vec::new(); dim]; dim];
        for (i, j, k, c) in sc_entries {
            if *i >= dim || *j >= dim || *k >= dim {
                return Err(AlgebraError::Invariant("structure index out of range".into()));
            }
            if !c.is_zero() {
                sc[*i][*j].push((*k, c.clone()));
            }
        }
        for row in sc.iter_mut().flatten() {
            row.sort_by_key(|(k, _)| *k);
        }
        let alg = StructureAlgebra {
            label: label.to_string(),
            dim,
            basis_labels,
            sc,
            unit,
            involution,
        };
        alg.check_invariants()?;
        Ok(alg)
    }

    /// Matrix algebra of size `n`: basis `E_ij`, `E_ij E_kl = delta_jk E_il`,
    /// involution `E_ij* = E_ji`.
    pub fn matrix(n: usize) -> Result<Self, AlgebraError> {
        if n == 0 {
            return Err(AlgebraError::InvalidSize);
        }
        let d = n * n;
        let idx = |i: usize, j: usize| i * n + j;
        let mut sc = vec![vec![Vec::new(); d]; d];
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        if j == k {
                            sc[idx(i, j)][idx(k, l)] = vec![(idx(i, l), Rat::one())];
                        }
                    }
                }
            }
        }
        let mut unit = vec![Rat::zero(); d];
        for i in 0..n {
            unit[idx(i, i)] = Rat::one();
        }
        let mut involution = vec![vec![Rat::zero(); d]; d];
        for i in 0..n {
            for j in 0..n {
                involution[idx(i, j)][idx(j, i)] = Rat::one();
            }
        }
        Ok(StructureAlgebra {
            label: format!("mat({n})"),
            dim: d,
            basis_labels: (0..n)
                .flat_map(|i| (0..n).map(move |j| format!("E{}{}", i + 1, j + 1)))
                .collect(),
            sc,
            unit,
            involution,
        })
    }

    /// Direct product with componentwise operations.
    pub fn product(factors: &[StructureAlgebra]) -> Result<Self, AlgebraError> {
        if factors.is_empty() {
            return Err(AlgebraError::EmptyProduct);
        }
        let dim: usize = factors.iter().map(|f| f.dim).sum();
        let mut sc = vec![vec![Vec::new(); dim]; dim];
        let mut unit = vec![Rat::zero(); dim];
        let mut involution = vec![vec![Rat::zero(); dim]; dim];
        let mut labels = Vec::with_capacity(dim);
        let mut off = 0;
        for (fi, f) in factors.iter().enumerate() {
            for i in 0..f.dim {
                labels.push(format!("p{fi}.{}", f.basis_labels[i]));
                unit[off + i] = f.unit[i].clone();
                for (k, c) in f.involution[i].iter().enumerate() {
                    if !c.is_zero() {
                        involution[off + i][off + k] = c.clone();
                    }
                }
                for j in 0..f.dim {
                    sc[off + i][off + j] = f.sc[i][j]
                        .iter()
                        .map(|(k, c)| (off + k, c.clone()))
                        .collect();
                }
            }
            off += f.dim;
        }
        Ok(StructureAlgebra {
            label: format!(
                "prod({})",
                factors.iter().map(|f| f.label.clone()).collect::<Vec<_>>().join(",")
            ),
            dim,
            basis_labels: labels,
            sc,
            unit,
            involution,
        })
    }

    /// Group algebra of `Z/m`: `g_i g_j = g_{(i+j) mod m}`, `g_i* = g_{-i mod m}`.
    pub fn cyclic_group(m: usize) -> Result<Self, AlgebraError> {
        if m == 0 {
            return Err(AlgebraError::InvalidSize);
        }
        let mut sc = vec![vec![Vec::new(); m]; m];
        let mut involution = vec![vec![Rat::zero(); m]; m];
        for i in 0..m {
            for j in 0..m {
                sc[i][j] = vec![((i + j) % m, Rat::one())];
            }
            involution[i][(m - i) % m] = Rat::one();
        }
        let mut unit = vec![Rat::zero(); m];
        unit[0] = Rat::one();
        Ok(StructureAlgebra {
            label: format!("cyclic({m})"),
            dim: m,
            basis_labels: (0..m).map(|i| format!("g{i}")).collect(),
            sc,
            unit,
            involution,
        })
    }

    /// `M_k(A)` with basis `E_ij (x) e_b`.
    pub fn amplify(&self, k: usize) -> Result<Self, AlgebraError> {
        if k == 0 {
            return Err(AlgebraError::InvalidSize);
        }
        if k == 1 {
            return Ok(self.clone());
        }
        let d0 = self.dim;
        let dim = k * k * d0;
        let idx = |i: usize, j: usize, b: usize| (i * k + j) * d0 + b;
        let mut sc = vec![vec![Vec::new(); dim]; dim];
        let mut unit = vec![Rat::zero(); dim];
        let mut involution = vec![vec![Rat::zero(); dim]; dim];
        let mut labels = Vec::with_capacity(dim);
        for i in 0..k {
            for j in 0..k {
                for b in 0..d0 {
                    labels.push(format!("E{}{}*{}", i + 1, j + 1, self.basis_labels[b]));
                    for (c, v) in self.involution[b].iter().enumerate() {
                        if !v.is_zero() {
                            involution[idx(i, j, b)][idx(j, i, c)] = v.clone();
                        }
                    }
                    for l in 0..k {
                        for b2 in 0..d0 {
                            sc[idx(i, j, b)][idx(j, l, b2)] = self.sc[b][b2]
                                .iter()
                                .map(|(c, v)| (idx(i, l, *c), v.clone()))
                                .collect();
                        }
                    }
                }
            }
        }
        for i in 0..k {
            for (b, v) in self.unit.iter().enumerate() {
                if !v.is_zero() {
                    unit[idx(i, i, b)] = v.clone();
                }
            }
        }
        Ok(StructureAlgebra {
            label: format!("amp({},{k})", self.label),
            dim,
            basis_labels: labels,
            sc,
            unit,
            involution,
        })
    }

    /// Formally adjoins a new unit (the previous unit, if any, becomes an
    /// ordinary idempotent).
    pub fn unitalize(&self) -> Self {
        let d = self.dim;
        let dim = d + 1;
        let mut sc = vec![vec![Vec::new(); dim]; dim];
        let mut involution = vec![vec![Rat::zero(); dim]; dim];
        for i in 0..d {
            for j in 0..d {
                sc[i][j] = self.sc[i][j].clone();
            }
            sc[i][d] = vec![(i, Rat::one())];
            sc[d][i] = vec![(i, Rat::one())];
            for (k, c) in self.involution[i].iter().enumerate() {
                if !c.is_zero() {
                    involution[i][k] = c.clone();
                }
            }
        }
        sc[d][d] = vec![(d, Rat::one())];
        involution[d][d] = Rat::one();
        let mut unit = vec![Rat::zero(); dim];
        unit[d] = Rat::one();
        let mut labels = self.basis_labels.clone();
        labels.push("1~".into());
        StructureAlgebra {
            label: format!("unital({})", self.label),
            dim,
            basis_labels: labels,
            sc,
            unit,
            involution,
        }
    }

    /// Finite ideal stage of the group C*-algebra: the product of matrix
    /// algebras over the first `n` irreducible-representation dimensions in
    /// the canonical enumeration order.
    pub fn group_stage(g: &GroupDescriptor, n: usize) -> Result<Self, AlgebraError> {
        if n == 0 {
            return Err(AlgebraError::InvalidSize);
        }
        let reps = irrep_dims(g, n);
        let mut factors = Vec::with_capacity(n);
        for r in reps {
            let d = usize::try_from(&r.dim)
                .map_err(|_| AlgebraError::DimensionOverflow(r.dim.to_string()))?;
            factors.push(StructureAlgebra::matrix(d)?);
        }
        let mut alg = StructureAlgebra::product(&factors)?;
        alg.label = format!("stage({g},{n})");
        Ok(alg)
    }

    /// Canonical JSON with entries sorted by `(i, j, k)` and exact rational
    /// strings.
    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Repr<'a> {
            dim: usize,
            labels: &'a [String],
            unit: Vec<String>,
            involution: Vec<Vec<String>>,
            sc: Vec<(usize, usize, usize, String)>,
        }
        let mut sc = Vec::new();
        for i in 0..self.dim {
            for j in 0..self.dim {
                for (k, c) in &self.sc[i][j] {
                    sc.push((i, j, *k, fmt_rat(c)));
                }
            }
        }
        sc.sort();
        let repr = Repr {
            dim: self.dim,
            labels: &self.basis_labels,
            unit: self.unit.iter().map(fmt_rat).collect(),
            involution: self
                .involution
                .iter()
                .map(|r| r.iter().map(fmt_rat).collect())
                .collect(),
            sc,
        };
        serde_json::to_string(&repr).expect("serializable")
    }
}

/// A linear functional given by its values on the basis.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceFunctional {
    pub coords: Vec<Rat>,
}

impl TraceFunctional {
    pub fn new(coords: Vec<Rat>) -> Self {
        TraceFunctional { coords }
    }

    pub fn eval(&self, v: &[Rat]) -> Rat {
        self.coords
            .iter()
            .zip(v)
            .map(|(c, x)| c * x)
            .fold(Rat::zero(), |a, b| a + b)
    }

    /// Normalized matrix trace `tr / n` on `mat(n)`.
    pub fn normalized_matrix_trace(n: usize) -> Self {
        let mut coords = vec![Rat::zero(); n * n];
        for i in 0..n {
            coords[i * n + i] = Rat::new(1.into(), (n as i64).into());
        }
        TraceFunctional { coords }
    }
}

/// Outcome of the four trace axioms. Failures are report entries, not
/// errors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    /// `tau(1) = 1` (finite-stage normalization).
    pub normalized: bool,
    /// The quadratic form `x -> tau(x* x)` is positive semidefinite,
    /// decided by exact pivoted symmetric decomposition.
    pub positive: bool,
    /// The form is nondegenerate: Gram rank equals the dimension.
    pub strictly_positive: bool,
    /// `tau(e_i e_j) = tau(e_j e_i)` on all basis pairs.
    pub ad_invariant: bool,
}

impl ValidationReport {
    pub fn all(&self) -> bool {
        self.normalized && self.positive && self.strictly_positive && self.ad_invariant
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }
}

/// Checks the four trace axioms on a finite stage.
pub fn validate_trace(a: &StructureAlgebra, tau: &TraceFunctional) -> ValidationReport {
    let d = a.dim();
    assert_eq!(tau.coords.len(), d, "trace coordinate length");
    let normalized = tau.eval(a.unit_coords()) == Rat::one();

    let mut gram = vec![vec![Rat::zero(); d]; d];
    for i in 0..d {
        let star = a.involution_row(i).to_vec();
        for j in 0..d {
            let mut basis_j = vec![Rat::zero(); d];
            basis_j[j] = Rat::one();
            gram[i][j] = tau.eval(&a.mul_vec(&star, &basis_j));
        }
    }
    // the quadratic form only sees the symmetric part
    let mut sym = vec![vec![Rat::zero(); d]; d];
    for i in 0..d {
        for j in 0..d {
            sym[i][j] = (&gram[i][j] + &gram[j][i]) / Rat::from_integer(2.into());
        }
    }
    let psd = psd_rank(&sym);
    let positive = psd.is_some();
    let strictly_positive = psd == Some(d);

    let mut ad_invariant = true;
    'outer: for i in 0..d {
        for j in i + 1..d {
            let ij: Rat = a.mul_basis(i, j).iter().map(|(k, c)| &tau.coords[*k] * c).sum();
            let ji: Rat = a.mul_basis(j, i).iter().map(|(k, c)| &tau.coords[*k] * c).sum();
            if ij != ji {
                ad_invariant = false;
                break 'outer;
            }
        }
    }
    ValidationReport {
        normalized,
        positive,
        strictly_positive,
        ad_invariant,
    }
}

/// An element of a structure algebra.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraElement {
    pub algebra: Arc<StructureAlgebra>,
    pub coords: Vec<Rat>,
}

impl AlgebraElement {
    pub fn new(algebra: Arc<StructureAlgebra>, coords: Vec<Rat>) -> Result<Self, AlgebraError> {
        if coords.len() != algebra.dim() {
            return Err(AlgebraError::Invariant(format!(
                "coordinate length {} != dim {}",
                coords.len(),
                algebra.dim()
            )));
        }
        Ok(AlgebraElement { algebra, coords })
    }

    pub fn zero(algebra: Arc<StructureAlgebra>) -> Self {
        let d = algebra.dim();
        AlgebraElement {
            algebra,
            coords: vec![Rat::zero(); d],
        }
    }

    pub fn unit(algebra: Arc<StructureAlgebra>) -> Self {
        let coords = algebra.unit_coords().to_vec();
        AlgebraElement { algebra, coords }
    }

    pub fn basis(algebra: Arc<StructureAlgebra>, i: usize) -> Self {
        let mut coords = vec![Rat::zero(); algebra.dim()];
        coords[i] = Rat::one();
        AlgebraElement { algebra, coords }
    }

    fn check_same(&self, other: &AlgebraElement) -> Result<(), AlgebraError> {
        if self.algebra.as_ref() != other.algebra.as_ref() {
            return Err(AlgebraError::Mismatch(
                self.algebra.label().into(),
                other.algebra.label().into(),
            ));
        }
        Ok(())
    }

    pub fn mul(&self, other: &AlgebraElement) -> Result<AlgebraElement, AlgebraError> {
        self.check_same(other)?;
        Ok(AlgebraElement {
            algebra: self.algebra.clone(),
            coords: self.algebra.mul_vec(&self.coords, &other.coords),
        })
    }

    pub fn add(&self, other: &AlgebraElement) -> Result<AlgebraElement, AlgebraError> {
        self.check_same(other)?;
        Ok(AlgebraElement {
            algebra: self.algebra.clone(),
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &AlgebraElement) -> Result<AlgebraElement, AlgebraError> {
        self.check_same(other)?;
        Ok(AlgebraElement {
            algebra: self.algebra.clone(),
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn scale(&self, c: &Rat) -> AlgebraElement {
        AlgebraElement {
            algebra: self.algebra.clone(),
            coords: self.coords.iter().map(|x| x * c).collect(),
        }
    }

    pub fn involute(&self) -> AlgebraElement {
        AlgebraElement {
            algebra: self.algebra.clone(),
            coords: self.algebra.involute_vec(&self.coords),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn is_unit(&self) -> bool {
        self.coords == self.algebra.unit_coords()
    }

    pub fn is_idempotent(&self) -> bool {
        self.algebra.mul_vec(&self.coords, &self.coords) == self.coords
    }

    /// Matrix of left multiplication by this element.
    pub fn left_mul_matrix(&self) -> SparseMatrix {
        let d = self.algebra.dim();
        let mut m = SparseMatrix::zero(d, d);
        for (i, ai) in self.coords.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for j in 0..d {
                for (k, c) in self.algebra.mul_basis(i, j) {
                    m.add_entry(*k, j, ai * c).unwrap();
                }
            }
        }
        m
    }

    /// Two-sided inverse, when it exists.
    pub fn inverse(&self) -> Option<AlgebraElement> {
        let unit: Vec<(usize, Rat)> = self
            .algebra
            .unit_coords()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (i, c.clone()))
            .collect();
        let x = self.left_mul_matrix().solve(&unit)?;
        let cand = AlgebraElement {
            algebra: self.algebra.clone(),
            coords: x,
        };
        let back = cand.mul(self).ok()?;
        back.is_unit().then_some(cand)
    }

    /// `u self u^{-1}`; `None` when `u` is not invertible.
    pub fn conjugate_by(&self, u: &AlgebraElement) -> Option<AlgebraElement> {
        let ui = u.inverse()?;
        u.mul(self).ok()?.mul(&ui).ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{rat, rint};
    use crate::lie::GroupDescriptor;

    fn basis_vec(d: usize, i: usize) -> Vec<Rat> {
        let mut v = vec![Rat::zero(); d];
        v[i] = Rat::one();
        v
    }

    #[test]
    fn matrix_algebra_products() {
        let m1 = StructureAlgebra::matrix(1).unwrap();
        assert_eq!(m1.dim(), 1);
        assert_eq!(m1.unit_coords(), &[Rat::one()]);

        let m2 = StructureAlgebra::matrix(2).unwrap();
        // E12 * E21 = E11
        assert_eq!(m2.mul_basis(1, 2), &[(0, Rat::one())]);
        // E12 * E12 = 0
        assert!(m2.mul_basis(1, 1).is_empty());
        assert!(StructureAlgebra::matrix(0).is_err());
    }

    #[test]
    fn constructors_pass_invariant_checks() {
        for alg in [
            StructureAlgebra::matrix(1).unwrap(),
            StructureAlgebra::matrix(2).unwrap(),
            StructureAlgebra::matrix(3).unwrap(),
            StructureAlgebra::cyclic_group(1).unwrap(),
            StructureAlgebra::cyclic_group(4).unwrap(),
            StructureAlgebra::product(&[
                StructureAlgebra::matrix(1).unwrap(),
                StructureAlgebra::matrix(2).unwrap(),
            ])
            .unwrap(),
            StructureAlgebra::matrix(2).unwrap().amplify(2).unwrap(),
            StructureAlgebra::cyclic_group(3).unwrap().unitalize(),
            StructureAlgebra::group_stage(&GroupDescriptor::su(1).unwrap(), 2).unwrap(),
        ] {
            alg.check_invariants()
                .unwrap_or_else(|e| panic!("{} fails: {e}", alg.label()));
        }
    }

    #[test]
    fn product_dims_and_unit() {
        let m1 = StructureAlgebra::matrix(1).unwrap();
        let m2 = StructureAlgebra::matrix(2).unwrap();
        let m3 = StructureAlgebra::matrix(3).unwrap();
        assert_eq!(StructureAlgebra::product(&[m1.clone(), m2.clone()]).unwrap().dim(), 5);
        let p = StructureAlgebra::product(&[m1.clone(), m2.clone(), m3]).unwrap();
        assert_eq!(p.dim(), 14);
        // unit of the product is the tuple of units
        let mut expect = vec![Rat::zero(); 14];
        expect[0] = Rat::one();
        expect[1] = Rat::one();
        expect[4] = Rat::one();
        expect[5] = Rat::one();
        expect[9] = Rat::one();
        expect[13] = Rat::one();
        assert_eq!(p.unit_coords(), &expect[..]);
        assert!(StructureAlgebra::product(&[]).is_err());
    }

    #[test]
    fn cyclic_group_algebra_rules() {
        let c1 = StructureAlgebra::cyclic_group(1).unwrap();
        assert_eq!(c1.dim(), 1);
        let c2 = StructureAlgebra::cyclic_group(2).unwrap();
        assert_eq!(c2.mul_basis(1, 1), &[(0, Rat::one())]);
        let c3 = StructureAlgebra::cyclic_group(3).unwrap();
        assert_eq!(c3.mul_basis(1, 2), &[(0, Rat::one())]);
        // involution g1* = g2 in Z/3
        assert_eq!(c3.involution_row(1)[2], Rat::one());
        assert!(StructureAlgebra::cyclic_group(0).is_err());
    }

    #[test]
    fn group_stages() {
        let su2 = GroupDescriptor::su(1).unwrap();
        let s1 = StructureAlgebra::group_stage(&su2, 1).unwrap();
        assert_eq!(s1.dim(), 1);
        let s3 = StructureAlgebra::group_stage(&su2, 3).unwrap();
        assert_eq!(s3.dim(), 14);
        assert_eq!(s3.center_dim(), 3);

        let su3 = GroupDescriptor::su(2).unwrap();
        let t3 = StructureAlgebra::group_stage(&su3, 3).unwrap();
        assert_eq!(t3.dim(), 19); // 1 + 9 + 9
    }

    #[test]
    fn stage_center_matches_factor_count() {
        let su2 = GroupDescriptor::su(1).unwrap();
        for n in 1..=3 {
            let s = StructureAlgebra::group_stage(&su2, n).unwrap();
            assert_eq!(s.center_dim(), n);
        }
    }

    #[test]
    fn amplify_examples() {
        let q = StructureAlgebra::matrix(1).unwrap();
        let amp = q.amplify(2).unwrap();
        let m2 = StructureAlgebra::matrix(2).unwrap();
        assert_eq!(amp.dim(), 4);
        // amp(mat(1), 2) has the same structure constants as mat(2)
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(amp.mul_basis(i, j), m2.mul_basis(i, j));
            }
        }
        assert_eq!(StructureAlgebra::matrix(3).unwrap().amplify(2).unwrap().dim(), 36);
    }

    #[test]
    fn amplify_mat2_by_2_is_mat4_after_relabeling() {
        let m2 = StructureAlgebra::matrix(2).unwrap();
        let amp = m2.amplify(2).unwrap();
        let m4 = StructureAlgebra::matrix(4).unwrap();
        // E_ij (x) E_kl -> E_(2i+k)(2j+l)
        let perm: Vec<usize> = (0..16)
            .map(|idx| {
                let b = idx % 4;
                let ij = idx / 4;
                let (i, j) = (ij / 2, ij % 2);
                let (k, l) = (b / 2, b % 2);
                (2 * i + k) * 4 + (2 * j + l)
            })
            .collect();
        for a in 0..16 {
            for b in 0..16 {
                let mapped: Vec<(usize, Rat)> = amp
                    .mul_basis(a, b)
                    .iter()
                    .map(|(k, c)| (perm[*k], c.clone()))
                    .collect();
                assert_eq!(mapped, m4.mul_basis(perm[a], perm[b]).to_vec());
            }
        }
        // equal trace forms under the same relabeling
        let ta = amp.regular_trace_form();
        let t4 = m4.regular_trace_form();
        for a in 0..16 {
            for b in 0..16 {
                assert_eq!(ta[a][b], t4[perm[a]][perm[b]]);
            }
        }
    }

    #[test]
    fn trace_validation_flags() {
        let m2 = StructureAlgebra::matrix(2).unwrap();
        let good = TraceFunctional::normalized_matrix_trace(2);
        let rep = validate_trace(&m2, &good);
        assert!(rep.all());

        let zero = TraceFunctional::new(vec![Rat::zero(); 4]);
        let rep = validate_trace(&m2, &zero);
        assert!(!rep.normalized);
        assert!(!rep.strictly_positive);
        assert!(rep.positive); // zero form is PSD
        assert!(rep.ad_invariant);

        // tau(a) = a_11 fails ad-invariance: tau(E12 E21) = 1, tau(E21 E12) = 0
        let corner = TraceFunctional::new(basis_vec(4, 0));
        let rep = validate_trace(&m2, &corner);
        assert!(!rep.ad_invariant);
    }

    #[test]
    fn trace_validation_on_group_algebra() {
        let c3 = StructureAlgebra::cyclic_group(3).unwrap();
        // evaluation at the identity: Gram is the identity matrix
        let mut delta = vec![Rat::zero(); 3];
        delta[0] = Rat::one();
        let rep = validate_trace(&c3, &TraceFunctional::new(delta));
        assert!(rep.all());
        // the augmentation map: all-ones Gram, positive but degenerate
        let aug = TraceFunctional::new(vec![Rat::one(); 3]);
        let rep = validate_trace(&c3, &aug);
        assert!(rep.normalized); // tau(g0) = 1
        assert!(rep.positive);
        assert!(!rep.strictly_positive);
        assert!(rep.ad_invariant);
    }

    #[test]
    fn normalized_trace_valid_up_to_mat4() {
        for n in 1..=4 {
            let a = StructureAlgebra::matrix(n).unwrap();
            let tau = TraceFunctional::normalized_matrix_trace(n);
            assert!(validate_trace(&a, &tau).all(), "mat({n})");
        }
    }

    #[test]
    fn element_inverse_and_conjugation() {
        let m2 = Arc::new(StructureAlgebra::matrix(2).unwrap());
        // u = [[1, 1], [0, 1]]
        let u = AlgebraElement::new(
            m2.clone(),
            vec![rint(1), rint(1), rint(0), rint(1)],
        )
        .unwrap();
        let ui = u.inverse().unwrap();
        assert!(u.mul(&ui).unwrap().is_unit());
        assert!(ui.mul(&u).unwrap().is_unit());

        let e11 = AlgebraElement::new(m2.clone(), basis_vec(4, 0)).unwrap();
        assert!(e11.is_idempotent());
        let conj = e11.conjugate_by(&u).unwrap();
        assert!(conj.is_idempotent());
        assert_eq!(conj.coords, vec![rint(1), rint(-1), rint(0), rint(0)]);

        // E12 is nilpotent, not invertible
        let e12 = AlgebraElement::new(m2.clone(), basis_vec(4, 1)).unwrap();
        assert!(e12.inverse().is_none());

        let half_e11 = AlgebraElement::new(m2, vec![rat(1, 2), rint(0), rint(0), rint(0)]).unwrap();
        assert!(!half_e11.is_idempotent());
    }

    #[test]
    fn unitalize_adjoins_a_fresh_unit() {
        let c2 = StructureAlgebra::cyclic_group(2).unwrap();
        let u = c2.unitalize();
        assert_eq!(u.dim(), 3);
        assert_eq!(u.unit_pivot(), 2);
        u.check_invariants().unwrap();
    }

    #[test]
    fn json_is_deterministic_and_sorted() {
        let m2 = StructureAlgebra::matrix(2).unwrap();
        let a = m2.to_json();
        let b = m2.to_json();
        assert_eq!(a, b);
        assert!(a.contains("\"dim\":4"));
        let sc_pos = a.find("\"sc\"").unwrap();
        let first = a[sc_pos..].find("[0,0,0,").is_some();
        assert!(first, "sc entries sorted by (i,j,k): {a}");
    }
}
