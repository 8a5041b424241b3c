//! Z2-graded sparse matrices over Q(√2) and exact linear algebra on sparse vectors.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{GqsError, Result};
use crate::exactfield::ExactScalar;

/// Sparse coordinate vector; absent keys are zero.
pub type SparseVec = BTreeMap<usize, ExactScalar>;

/// Parity of a matrix value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
    Mixed,
    Zero,
}

impl Parity {
    pub fn from_bit(bit: u8) -> Parity {
        if bit.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    /// The parity bit of a homogeneous value; `Zero` is compatible with either bit and reports 0.
    pub fn bit(self) -> Option<u8> {
        match self {
            Parity::Even | Parity::Zero => Some(0),
            Parity::Odd => Some(1),
            Parity::Mixed => None,
        }
    }

    fn join(self, other: Parity) -> Parity {
        match (self, other) {
            (Parity::Zero, p) | (p, Parity::Zero) => p,
            (a, b) if a == b => a,
            _ => Parity::Mixed,
        }
    }
}

/// Sign `(−1)^(a·b)` for parity bits.
pub fn koszul_sign(a: u8, b: u8) -> ExactScalar {
    if a & b & 1 == 1 {
        -ExactScalar::one()
    } else {
        ExactScalar::one()
    }
}

/// Square sparse matrix with a row/column Z2-grading `theta`; entry (j,k) has parity θ_j+θ_k.
///
/// Indices are 0-based here; the algebra constructors translate from 1-based labels.
#[derive(Clone, PartialEq, Eq)]
pub struct SuperMatrix {
    theta: Arc<[u8]>,
    entries: BTreeMap<(usize, usize), ExactScalar>,
    parity: Parity,
}

impl SuperMatrix {
    pub fn zero(theta: Arc<[u8]>) -> Self {
        SuperMatrix { theta, entries: BTreeMap::new(), parity: Parity::Zero }
    }

    /// Build from entries; zero entries are dropped and repeated positions summed.
    pub fn from_entries<I>(theta: Arc<[u8]>, entries: I) -> Self
    where
        I: IntoIterator<Item = ((usize, usize), ExactScalar)>,
    {
        let size = theta.len();
        let mut map: BTreeMap<(usize, usize), ExactScalar> = BTreeMap::new();
        for ((r, c), v) in entries {
            assert!(r < size && c < size, "entry ({r},{c}) outside {size}x{size}");
            *map.entry((r, c)).or_insert_with(ExactScalar::zero) += &v;
        }
        map.retain(|_, v| !v.is_zero());
        let mut m = SuperMatrix { theta, entries: map, parity: Parity::Zero };
        m.parity = m.compute_parity();
        m
    }

    /// Elementary matrix with a single 1 at (r, c).
    pub fn unit(theta: Arc<[u8]>, r: usize, c: usize) -> Self {
        SuperMatrix::from_entries(theta, [((r, c), ExactScalar::one())])
    }

    fn compute_parity(&self) -> Parity {
        self.entries
            .keys()
            .map(|&(r, c)| Parity::from_bit(self.theta[r] + self.theta[c]))
            .fold(Parity::Zero, Parity::join)
    }

    pub fn size(&self) -> usize {
        self.theta.len()
    }

    pub fn theta(&self) -> &Arc<[u8]> {
        &self.theta
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize), &ExactScalar)> {
        self.entries.iter()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, r: usize, c: usize) -> ExactScalar {
        self.entries.get(&(r, c)).cloned().unwrap_or_else(ExactScalar::zero)
    }

    fn check_size(&self, other: &SuperMatrix) -> Result<()> {
        if self.size() != other.size() {
            return Err(GqsError::SizeMismatch(self.size(), other.size()));
        }
        Ok(())
    }

    pub fn add(&self, other: &SuperMatrix) -> Result<SuperMatrix> {
        self.check_size(other)?;
        Ok(self.axpy(&ExactScalar::one(), other))
    }

    pub fn sub(&self, other: &SuperMatrix) -> Result<SuperMatrix> {
        self.check_size(other)?;
        Ok(self.axpy(&-ExactScalar::one(), other))
    }

    /// `self + a·other`; sizes must already agree.
    fn axpy(&self, a: &ExactScalar, other: &SuperMatrix) -> SuperMatrix {
        let mut entries = self.entries.clone();
        for (k, v) in &other.entries {
            let e = entries.entry(*k).or_insert_with(ExactScalar::zero);
            *e += &(a * v);
        }
        entries.retain(|_, v| !v.is_zero());
        let mut m = SuperMatrix { theta: self.theta.clone(), entries, parity: Parity::Zero };
        m.parity = m.compute_parity();
        m
    }

    pub fn scale(&self, a: &ExactScalar) -> SuperMatrix {
        if a.is_zero() {
            return SuperMatrix::zero(self.theta.clone());
        }
        SuperMatrix {
            theta: self.theta.clone(),
            entries: self.entries.iter().map(|(k, v)| (*k, a * v)).collect(),
            parity: self.parity,
        }
    }

    pub fn matmul(&self, other: &SuperMatrix) -> Result<SuperMatrix> {
        self.check_size(other)?;
        let mut by_row: BTreeMap<usize, Vec<(usize, &ExactScalar)>> = BTreeMap::new();
        for (&(r, c), v) in &other.entries {
            by_row.entry(r).or_default().push((c, v));
        }
        let mut out = Vec::new();
        for (&(r, k), a) in &self.entries {
            if let Some(row) = by_row.get(&k) {
                for &(c, b) in row {
                    out.push(((r, c), a * b));
                }
            }
        }
        Ok(SuperMatrix::from_entries(self.theta.clone(), out))
    }

    pub fn transpose(&self) -> SuperMatrix {
        SuperMatrix {
            theta: self.theta.clone(),
            entries: self.entries.iter().map(|(&(r, c), v)| ((c, r), v.clone())).collect(),
            parity: self.parity,
        }
    }

    /// Conjugate `D·X·D⁻¹` by a diagonal matrix of signs.
    pub fn conjugate_by_signs(&self, signs: &[i8]) -> SuperMatrix {
        let entries = self
            .entries
            .iter()
            .map(|(&(r, c), v)| {
                let s = signs[r] * signs[c];
                ((r, c), if s < 0 { -v } else { v.clone() })
            })
            .collect();
        SuperMatrix { theta: self.theta.clone(), entries, parity: self.parity }
    }

    /// Row-major flattening to a vector of length size².
    pub fn flatten(&self) -> SparseVec {
        let n = self.size();
        self.entries.iter().map(|(&(r, c), v)| (r * n + c, v.clone())).collect()
    }

    pub fn supertrace(&self) -> ExactScalar {
        let mut acc = ExactScalar::zero();
        for (&(r, c), v) in &self.entries {
            if r == c {
                if self.theta[r].is_multiple_of(2) {
                    acc += v;
                } else {
                    acc -= v;
                }
            }
        }
        acc
    }
}

impl fmt::Debug for SuperMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .entries
            .iter()
            .map(|(&(r, c), v)| format!("{}·e{},{}", v, r + 1, c + 1))
            .collect();
        write!(f, "SuperMatrix[{:?}; {}]", self.parity, terms.join(" + "))
    }
}

/// `[[x,y]] = xy − (−1)^{|x||y|} yx` for homogeneous arguments.
pub fn superbracket(x: &SuperMatrix, y: &SuperMatrix) -> Result<SuperMatrix> {
    x.check_size(y)?;
    let a = x.parity.bit().ok_or(GqsError::NonHomogeneous)?;
    let b = y.parity.bit().ok_or(GqsError::NonHomogeneous)?;
    let xy = x.matmul(y)?;
    let yx = y.matmul(x)?;
    Ok(xy.axpy(&-koszul_sign(a, b), &yx))
}

/// Superbracket with caller-declared parity bits, checked against the matrices.
pub fn superbracket_with(x: &SuperMatrix, y: &SuperMatrix, deg_x: u8, deg_y: u8) -> Result<SuperMatrix> {
    for (m, d) in [(x, deg_x), (y, deg_y)] {
        match m.parity {
            Parity::Zero => {}
            Parity::Mixed => return Err(GqsError::NonHomogeneous),
            p if p == Parity::from_bit(d) => {}
            _ => return Err(GqsError::NonHomogeneous),
        }
    }
    x.check_size(y)?;
    let xy = x.matmul(y)?;
    let yx = y.matmul(x)?;
    Ok(xy.axpy(&-koszul_sign(deg_x, deg_y), &yx))
}

/// Coefficients of a target over a list of inputs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisExpansion {
    pub coefficients: BTreeMap<usize, ExactScalar>,
    pub residual_zero: bool,
}

impl BasisExpansion {
    pub fn zero() -> Self {
        BasisExpansion { coefficients: BTreeMap::new(), residual_zero: true }
    }

    pub fn is_zero(&self) -> bool {
        self.residual_zero && self.coefficients.is_empty()
    }
}

/// `acc += a·v` on sparse vectors, dropping cancelled entries.
pub fn sparse_axpy(acc: &mut SparseVec, a: &ExactScalar, v: &SparseVec) {
    if a.is_zero() {
        return;
    }
    for (k, x) in v {
        let prod = a * x;
        match acc.get_mut(k) {
            Some(e) => {
                *e += &prod;
                if e.is_zero() {
                    acc.remove(k);
                }
            }
            None => {
                acc.insert(*k, prod);
            }
        }
    }
}

pub fn sparse_scale(v: &SparseVec, a: &ExactScalar) -> SparseVec {
    if a.is_zero() {
        return SparseVec::new();
    }
    v.iter().map(|(k, x)| (*k, a * x)).collect()
}

#[derive(Clone, Debug)]
struct EchelonRow {
    pivot: usize,
    vec: SparseVec,
    combo: SparseVec,
}

/// Incremental row echelon form over Q(√2) with lowest-index pivoting.
///
/// Every inserted vector either becomes a new row (pivot = its lowest surviving coordinate,
/// normalized to 1) or yields a linear relation among the inputs.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: Vec<EchelonRow>,
    pivots: BTreeMap<usize, usize>,
    inputs: usize,
    independent: Vec<usize>,
    relations: Vec<SparseVec>,
}

impl Echelon {
    pub fn new() -> Self {
        Echelon::default()
    }

    pub fn from_vectors<'a, I: IntoIterator<Item = &'a SparseVec>>(vectors: I) -> Self {
        let mut e = Echelon::new();
        for v in vectors {
            e.insert(v);
        }
        e
    }

    /// Reduce `v` against the current rows; returns (residual, combination over inputs).
    fn reduce(&self, v: &SparseVec) -> (SparseVec, SparseVec) {
        let mut rem = v.clone();
        let mut combo = SparseVec::new();
        let mut cursor = 0usize;
        loop {
            let next = rem.range(cursor..).map(|(k, _)| *k).find(|k| self.pivots.contains_key(k));
            let Some(k) = next else { break };
            let row = &self.rows[self.pivots[&k]];
            let c = rem[&k].clone();
            sparse_axpy(&mut rem, &-c.clone(), &row.vec);
            sparse_axpy(&mut combo, &c, &row.combo);
            cursor = k + 1;
        }
        (rem, combo)
    }

    /// Insert a vector; returns true when it enlarged the span.
    pub fn insert(&mut self, v: &SparseVec) -> bool {
        let idx = self.inputs;
        self.inputs += 1;
        let (rem, combo) = self.reduce(v);
        if rem.is_empty() {
            let mut rel = sparse_scale(&combo, &-ExactScalar::one());
            rel.insert(idx, ExactScalar::one());
            self.relations.push(rel);
            return false;
        }
        let (&pivot, lead) = rem.iter().next().expect("nonzero remainder");
        let inv = lead.inv().expect("nonzero pivot");
        let vec = sparse_scale(&rem, &inv);
        let mut c = sparse_scale(&combo, &-inv.clone());
        c.insert(idx, inv);
        self.pivots.insert(pivot, self.rows.len());
        self.rows.push(EchelonRow { pivot, vec, combo: c });
        self.independent.push(idx);
        true
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn input_count(&self) -> usize {
        self.inputs
    }

    /// Indices of inputs that enlarged the span when inserted.
    pub fn independent_inputs(&self) -> &[usize] {
        &self.independent
    }

    pub fn pivot_columns(&self) -> Vec<usize> {
        self.rows.iter().map(|r| r.pivot).collect()
    }

    /// Express `target` over the inserted inputs.
    pub fn express(&self, target: &SparseVec) -> BasisExpansion {
        let (rem, combo) = self.reduce(target);
        BasisExpansion { coefficients: combo, residual_zero: rem.is_empty() }
    }

    pub fn contains(&self, target: &SparseVec) -> bool {
        self.reduce(target).0.is_empty()
    }

    /// Kernel basis of `c ↦ Σ cᵢ·vᵢ`: one vector per dependent input, with coefficient 1 on that
    /// input and 0 on every other dependent input (reduced echelon form in the free variables).
    pub fn relations(&self) -> &[SparseVec] {
        &self.relations
    }
}

pub fn span_rank_vectors(vectors: &[SparseVec]) -> usize {
    Echelon::from_vectors(vectors).rank()
}

pub fn nullspace_vectors(vectors: &[SparseVec]) -> Vec<SparseVec> {
    Echelon::from_vectors(vectors).relations
}

fn flatten_all(mats: &[SuperMatrix]) -> Result<Vec<SparseVec>> {
    if let Some(first) = mats.first() {
        for m in mats {
            first.check_size(m)?;
        }
    }
    Ok(mats.iter().map(SuperMatrix::flatten).collect())
}

pub fn span_rank(vectors: &[SuperMatrix]) -> Result<usize> {
    Ok(span_rank_vectors(&flatten_all(vectors)?))
}

pub fn express_in_span(target: &SuperMatrix, basis: &[SuperMatrix]) -> Result<BasisExpansion> {
    if let Some(b) = basis.first() {
        target.check_size(b)?;
    }
    let e = Echelon::from_vectors(&flatten_all(basis)?);
    Ok(e.express(&target.flatten()))
}

/// Kernel of the coefficient map, as dense coefficient vectors of length `vectors.len()`.
pub fn nullspace(vectors: &[SuperMatrix]) -> Result<Vec<Vec<ExactScalar>>> {
    let rels = nullspace_vectors(&flatten_all(vectors)?);
    Ok(rels
        .into_iter()
        .map(|r| (0..vectors.len()).map(|i| r.get(&i).cloned().unwrap_or_else(ExactScalar::zero)).collect())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn th(v: &[u8]) -> Arc<[u8]> {
        Arc::from(v)
    }

    fn s(v: i64) -> ExactScalar {
        ExactScalar::integer(v)
    }

    #[test]
    fn sl2_commutator() {
        let t = th(&[0, 0]);
        let e12 = SuperMatrix::unit(t.clone(), 0, 1);
        let e21 = SuperMatrix::unit(t.clone(), 1, 0);
        let h = superbracket(&e12, &e21).unwrap();
        let expect = SuperMatrix::from_entries(t, [((0, 0), s(1)), ((1, 1), s(-1))]);
        assert_eq!(h, expect);
        assert_eq!(h.parity(), Parity::Even);
    }

    #[test]
    fn odd_self_bracket_is_twice_square() {
        let t = th(&[0, 1, 1]);
        let x = SuperMatrix::from_entries(t.clone(), [((0, 1), s(1)), ((2, 0), s(1))]);
        assert_eq!(x.parity(), Parity::Odd);
        let b = superbracket(&x, &x).unwrap();
        assert_eq!(b, x.matmul(&x).unwrap().scale(&s(2)));
    }

    #[test]
    fn osp12_bracket() {
        // osp(1|2): rows (0 | 1, 2); δ and −δ root vectors
        let t = th(&[0, 1, 1]);
        let r2 = ExactScalar::sqrt2();
        let bm = SuperMatrix::from_entries(t.clone(), [((0, 2), r2.clone()), ((1, 0), -r2.clone())]);
        let bp = SuperMatrix::from_entries(t.clone(), [((0, 1), r2.clone()), ((2, 0), r2.clone())]);
        let h = superbracket(&bm, &bp).unwrap();
        let expect = SuperMatrix::from_entries(t, [((1, 1), s(-2)), ((2, 2), s(2))]);
        assert_eq!(h, expect);
    }

    #[test]
    fn mixed_rejected() {
        let t = th(&[0, 1]);
        let x = SuperMatrix::from_entries(t.clone(), [((0, 0), s(1)), ((0, 1), s(1))]);
        assert_eq!(x.parity(), Parity::Mixed);
        let y = SuperMatrix::unit(t.clone(), 0, 0);
        assert_eq!(superbracket(&x, &y), Err(GqsError::NonHomogeneous));
        assert!(superbracket_with(&y, &y, 1, 0).is_err());
        let other = SuperMatrix::unit(th(&[0, 0, 0]), 0, 0);
        assert_eq!(superbracket(&y, &other), Err(GqsError::SizeMismatch(2, 3)));
    }

    #[test]
    fn rank_examples() {
        let t = th(&[0, 0]);
        let e12 = SuperMatrix::unit(t.clone(), 0, 1);
        let e21 = SuperMatrix::unit(t.clone(), 1, 0);
        assert_eq!(span_rank(&[e12.clone(), e12.scale(&s(2))]).unwrap(), 1);
        assert_eq!(span_rank(&[e12, e21]).unwrap(), 2);
        assert_eq!(span_rank(&[]).unwrap(), 0);
    }

    #[test]
    fn sl21_basis_rank() {
        let t = th(&[0, 0, 1]);
        let mut basis = Vec::new();
        for r in 0..3 {
            for c in 0..3 {
                if r != c {
                    basis.push(SuperMatrix::unit(t.clone(), r, c));
                }
            }
        }
        basis.push(SuperMatrix::from_entries(t.clone(), [((0, 0), s(1)), ((1, 1), s(-1))]));
        basis.push(SuperMatrix::from_entries(t.clone(), [((1, 1), s(1)), ((2, 2), s(1))]));
        assert!(basis.iter().all(|b| b.supertrace().is_zero()));
        assert_eq!(span_rank(&basis).unwrap(), 8);
    }

    #[test]
    fn express_examples() {
        let t = th(&[0, 0]);
        let b1 = SuperMatrix::unit(t.clone(), 0, 1);
        let b2 = SuperMatrix::from_entries(t.clone(), [((0, 1), s(1)), ((1, 0), s(1))]);
        let target = b1.scale(&s(3));
        let ex = express_in_span(&target, &[b1.clone(), b2.clone()]).unwrap();
        assert!(ex.residual_zero);
        assert_eq!(ex.coefficients, BTreeMap::from([(0, s(3))]));
        let out = SuperMatrix::unit(t, 1, 1);
        assert!(!express_in_span(&out, &[b1, b2]).unwrap().residual_zero);
    }

    #[test]
    fn nullspace_examples() {
        let t = th(&[0, 0]);
        let v = SuperMatrix::from_entries(t.clone(), [((0, 1), s(1)), ((1, 1), s(5))]);
        let ns = nullspace(&[v.clone(), v.scale(&s(2))]).unwrap();
        assert_eq!(ns, vec![vec![s(-2), s(1)]]);
        let w = SuperMatrix::unit(t, 1, 0);
        assert!(nullspace(&[v, w]).unwrap().is_empty());
    }

    #[test]
    fn relations_use_free_variables() {
        let a: SparseVec = BTreeMap::from([(0, s(1))]);
        let b: SparseVec = BTreeMap::from([(1, s(1))]);
        let ab: SparseVec = BTreeMap::from([(0, s(1)), (1, s(1))]);
        let rels = nullspace_vectors(&[a.clone(), ab.clone(), b.clone(), a.clone()]);
        assert_eq!(rels.len(), 2);
        assert_eq!(rels[0], BTreeMap::from([(0, s(1)), (1, s(-1)), (2, s(1))]));
        assert_eq!(rels[1], BTreeMap::from([(0, s(-1)), (3, s(1))]));
    }
}
