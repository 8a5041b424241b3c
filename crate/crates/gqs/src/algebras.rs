//! Matrix realizations of A(m|n), B(m|n), B(0|n), C(n) and D(m|n).
//!
//! Row/column labels follow the usual 1-based block conventions: for A(m|n) the first m+1
//! indices are even; for osp(2m+1|2n) the blocks are (m | m | 1 | n | n) and for
//! osp(2m|2n) the middle row is dropped.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{GqsError, Result};
use crate::exactfield::ExactScalar;
use crate::supermatrix::{superbracket, BasisExpansion, Echelon, SparseVec, SuperMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FamilyTag {
    A,
    B,
    B0,
    C,
    D,
}

impl FromStr for FamilyTag {
    type Err = GqsError;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "A" => Ok(FamilyTag::A),
            "B" => Ok(FamilyTag::B),
            "B0" => Ok(FamilyTag::B0),
            "C" => Ok(FamilyTag::C),
            "D" => Ok(FamilyTag::D),
            _ => Err(GqsError::InvalidFamily(format!("unknown family tag {s:?}"))),
        }
    }
}

impl fmt::Display for FamilyTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            FamilyTag::A => "A",
            FamilyTag::B => "B",
            FamilyTag::B0 => "B0",
            FamilyTag::C => "C",
            FamilyTag::D => "D",
        };
        f.write_str(s)
    }
}

/// A family member with its rank parameters. `B0` stores `m = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Family {
    pub tag: FamilyTag,
    pub m: usize,
    pub n: usize,
}

impl Family {
    pub fn new(tag: FamilyTag, m: usize, n: usize) -> Result<Family> {
        let ok = match tag {
            FamilyTag::A => true,
            FamilyTag::B => m >= 1 && n >= 1,
            FamilyTag::B0 => m == 0 && n >= 1,
            FamilyTag::C => n >= 2,
            FamilyTag::D => m >= 2 && n >= 1,
        };
        let fam = Family { tag, m: if tag == FamilyTag::C { 0 } else { m }, n };
        if !ok {
            let hint = match tag {
                FamilyTag::B => "B needs m >= 1 and n >= 1 (use B0 for m = 0)",
                FamilyTag::B0 => "B0 needs m = 0 and n >= 1",
                FamilyTag::C => "C needs n >= 2",
                FamilyTag::D => "D needs m >= 2 and n >= 1 (use C for D(1|n))",
                FamilyTag::A => "",
            };
            return Err(GqsError::InvalidFamily(format!("{tag}(m={m}, n={n}): {hint}")));
        }
        Ok(fam)
    }

    pub fn a(m: usize, n: usize) -> Result<Family> {
        Family::new(FamilyTag::A, m, n)
    }
    pub fn b(m: usize, n: usize) -> Result<Family> {
        Family::new(FamilyTag::B, m, n)
    }
    pub fn b0(n: usize) -> Result<Family> {
        Family::new(FamilyTag::B0, 0, n)
    }
    pub fn c(n: usize) -> Result<Family> {
        Family::new(FamilyTag::C, 0, n)
    }
    pub fn d(m: usize, n: usize) -> Result<Family> {
        Family::new(FamilyTag::D, m, n)
    }

    /// Number of ε coordinates of a root.
    pub fn eps_len(&self) -> usize {
        match self.tag {
            FamilyTag::A => self.m + 1,
            FamilyTag::B | FamilyTag::D => self.m,
            FamilyTag::B0 => 0,
            FamilyTag::C => 1,
        }
    }

    /// Number of δ coordinates of a root.
    pub fn delta_len(&self) -> usize {
        match self.tag {
            FamilyTag::A => self.n + 1,
            FamilyTag::C => self.n - 1,
            _ => self.n,
        }
    }

    /// (m, n) of the orthosymplectic form osp(2m(+1)|2n) used for the realization.
    fn osp_ranks(&self) -> (usize, usize, bool) {
        match self.tag {
            FamilyTag::B => (self.m, self.n, true),
            FamilyTag::B0 => (0, self.n, true),
            FamilyTag::D => (self.m, self.n, false),
            FamilyTag::C => (1, self.n - 1, false),
            FamilyTag::A => unreachable!("A is not orthosymplectic"),
        }
    }

    pub fn matrix_size(&self) -> usize {
        match self.tag {
            FamilyTag::A => self.m + self.n + 2,
            _ => {
                let (m, n, odd) = self.osp_ranks();
                2 * m + usize::from(odd) + 2 * n
            }
        }
    }

    pub fn rank(&self) -> usize {
        match self.tag {
            FamilyTag::A => self.m + self.n + 1,
            FamilyTag::B | FamilyTag::D => self.m + self.n,
            FamilyTag::B0 | FamilyTag::C => self.n,
        }
    }

    pub fn expected_dim(&self) -> usize {
        let (m, n) = (self.m, self.n);
        match self.tag {
            FamilyTag::A => (m + n + 2) * (m + n + 2) - 1,
            FamilyTag::B => 2 * (m + n) * (m + n) + m + 3 * n,
            FamilyTag::B0 => 2 * n * n + 3 * n,
            FamilyTag::D => 2 * (m + n) * (m + n) + n - m,
            FamilyTag::C => {
                let (m, n) = (1, n - 1);
                2 * (m + n) * (m + n) + n - m
            }
        }
    }

    pub fn label(&self) -> String {
        match self.tag {
            FamilyTag::A => format!("A({}|{})", self.m, self.n),
            FamilyTag::B => format!("B({}|{})", self.m, self.n),
            FamilyTag::B0 => format!("B(0|{})", self.n),
            FamilyTag::C => format!("C({})", self.n),
            FamilyTag::D => format!("D({}|{})", self.m, self.n),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// A root as integer coefficients of ε₁..ε_p and δ₁..δ_q.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Root {
    pub eps: Vec<i32>,
    pub delta: Vec<i32>,
}

impl Root {
    pub fn zero(eps_len: usize, delta_len: usize) -> Root {
        Root { eps: vec![0; eps_len], delta: vec![0; delta_len] }
    }

    /// Root from 1-based (index, coefficient) terms.
    pub fn from_terms(eps_len: usize, delta_len: usize, eps: &[(usize, i32)], delta: &[(usize, i32)]) -> Root {
        let mut r = Root::zero(eps_len, delta_len);
        for &(i, c) in eps {
            r.eps[i - 1] += c;
        }
        for &(i, c) in delta {
            r.delta[i - 1] += c;
        }
        r
    }

    pub fn is_zero(&self) -> bool {
        self.eps.iter().chain(&self.delta).all(|&c| c == 0)
    }

    /// Parity bit: odd iff the δ coefficients sum to an odd number.
    pub fn parity(&self) -> u8 {
        (self.delta.iter().map(|c| c.rem_euclid(2)).sum::<i32>() % 2) as u8
    }

    pub fn neg(&self) -> Root {
        Root { eps: self.eps.iter().map(|c| -c).collect(), delta: self.delta.iter().map(|c| -c).collect() }
    }

    pub fn add(&self, o: &Root) -> Root {
        Root {
            eps: self.eps.iter().zip(&o.eps).map(|(a, b)| a + b).collect(),
            delta: self.delta.iter().zip(&o.delta).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, o: &Root) -> Root {
        self.add(&o.neg())
    }

    pub fn scale(&self, k: i32) -> Root {
        Root { eps: self.eps.iter().map(|c| k * c).collect(), delta: self.delta.iter().map(|c| k * c).collect() }
    }

    pub fn coords(&self) -> impl Iterator<Item = i32> + '_ {
        self.eps.iter().chain(&self.delta).copied()
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        let terms = self
            .eps
            .iter()
            .enumerate()
            .map(|(i, &c)| (c, format!("ε{}", i + 1)))
            .chain(self.delta.iter().enumerate().map(|(i, &c)| (c, format!("δ{}", i + 1))))
            .filter(|(c, _)| *c != 0);
        for (c, sym) in terms {
            let sign = if c < 0 { "-" } else if out.is_empty() { "" } else { "+" };
            let mag = if c.abs() == 1 { String::new() } else { c.abs().to_string() };
            out.push_str(&format!("{sign}{mag}{sym}"));
        }
        if out.is_empty() {
            out.push('0');
        }
        f.write_str(&out)
    }
}

impl fmt::Debug for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Clone, Debug)]
pub struct RootVector {
    pub root: Root,
    pub parity: u8,
    pub matrix: SuperMatrix,
}

/// Index into the model basis: Cartan elements first, then root vectors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BasisElement {
    Cartan(usize),
    Root(usize),
}

/// A constructed superalgebra with its structure constants.
#[derive(Clone, Debug)]
pub struct AlgebraModel {
    pub family: Family,
    pub matrix_size: usize,
    pub theta: Arc<[u8]>,
    pub cartan: Vec<SuperMatrix>,
    pub root_vectors: Vec<RootVector>,
    /// For each root vector index: (index of the vector for −α, scalar c) with ω(e_α) = c·e_{−α}.
    pub omega_table: Vec<(usize, ExactScalar)>,
    omega_signs: Vec<i8>,
    /// 0-based diagonal position that each δ coordinate reads.
    delta_positions: Vec<usize>,
    root_index: HashMap<Root, usize>,
    solver: Echelon,
    structure: Vec<Vec<SparseVec>>,
}

struct Builder {
    theta: Arc<[u8]>,
    eps_len: usize,
    delta_len: usize,
    vectors: Vec<RootVector>,
}

impl Builder {
    /// `e_{jk}` with 1-based labels.
    fn e(&self, j: usize, k: usize) -> SuperMatrix {
        SuperMatrix::unit(self.theta.clone(), j - 1, k - 1)
    }

    fn comb(&self, terms: &[(i64, usize, usize)]) -> SuperMatrix {
        SuperMatrix::from_entries(
            self.theta.clone(),
            terms.iter().map(|&(c, j, k)| ((j - 1, k - 1), ExactScalar::integer(c))),
        )
    }

    fn push(&mut self, eps: &[(usize, i32)], delta: &[(usize, i32)], matrix: SuperMatrix) {
        let root = Root::from_terms(self.eps_len, self.delta_len, eps, delta);
        let parity = root.parity();
        self.vectors.push(RootVector { root, parity, matrix });
    }
}

fn build_a(family: Family) -> (Arc<[u8]>, Vec<SuperMatrix>, Vec<RootVector>, Vec<usize>) {
    let (m, n) = (family.m, family.n);
    let size = m + n + 2;
    let theta: Arc<[u8]> = (1..=size).map(|j| u8::from(j > m + 1)).collect::<Vec<_>>().into();
    let mut b = Builder { theta: theta.clone(), eps_len: m + 1, delta_len: n + 1, vectors: Vec::new() };
    // η_j = ε_j for j ≤ m+1, δ_{j−m−1} otherwise
    let eta = |j: usize| -> (bool, usize) {
        if j <= m + 1 {
            (true, j)
        } else {
            (false, j - m - 1)
        }
    };
    for j in 1..=size {
        for k in 1..=size {
            if j == k {
                continue;
            }
            let mut eps = Vec::new();
            let mut delta = Vec::new();
            for (idx, c) in [(j, 1), (k, -1)] {
                let (is_eps, i) = eta(idx);
                if is_eps {
                    eps.push((i, c));
                } else {
                    delta.push((i, c));
                }
            }
            let mat = b.e(j, k);
            b.push(&eps, &delta, mat);
        }
    }
    let cartan = (1..size)
        .map(|i| superbracket(&b.e(i, i + 1), &b.e(i + 1, i)).expect("homogeneous units"))
        .collect();
    let delta_positions = (0..=n).map(|k| m + 1 + k).collect();
    (theta, cartan, b.vectors, delta_positions)
}

fn build_osp(family: Family) -> (Arc<[u8]>, Vec<SuperMatrix>, Vec<RootVector>, Vec<usize>) {
    let (m, n, odd_size) = family.osp_ranks();
    let mid = usize::from(odd_size);
    let o = 2 * m + mid;
    let size = o + 2 * n;
    let theta: Arc<[u8]> = (0..size).map(|j| u8::from(j >= o)).collect::<Vec<_>>().into();
    let mut b = Builder { theta: theta.clone(), eps_len: m, delta_len: n, vectors: Vec::new() };
    for j in 1..=m {
        for k in 1..=m {
            if j != k {
                let mat = b.comb(&[(1, j, k), (-1, k + m, j + m)]);
                b.push(&[(j, 1), (k, -1)], &[], mat);
            }
        }
    }
    for j in 1..=m {
        for k in j + 1..=m {
            let mat = b.comb(&[(1, j, k + m), (-1, k, j + m)]);
            b.push(&[(j, 1), (k, 1)], &[], mat);
            let mat = b.comb(&[(1, j + m, k), (-1, k + m, j)]);
            b.push(&[(j, -1), (k, -1)], &[], mat);
        }
    }
    if odd_size {
        let c = 2 * m + 1;
        for j in 1..=m {
            let mat = b.comb(&[(1, j, c), (-1, c, j + m)]);
            b.push(&[(j, 1)], &[], mat);
            let mat = b.comb(&[(1, j + m, c), (-1, c, j)]);
            b.push(&[(j, -1)], &[], mat);
        }
    }
    for j in 1..=n {
        for k in 1..=n {
            if j != k {
                let mat = b.comb(&[(1, o + j, o + k), (-1, o + n + k, o + n + j)]);
                b.push(&[], &[(j, 1), (k, -1)], mat);
            }
        }
    }
    for j in 1..=n {
        for k in j..=n {
            let mat = b.comb(&[(1, o + j, o + k + n), (1, o + k, o + j + n)]);
            b.push(&[], &[(j, 1), (k, 1)], mat);
            let mat = b.comb(&[(1, o + n + j, o + k), (1, o + n + k, o + j)]);
            b.push(&[], &[(j, -1), (k, -1)], mat);
        }
    }
    for j in 1..=m {
        for k in 1..=n {
            let mat = b.comb(&[(1, j, o + k), (-1, o + n + k, j + m)]);
            b.push(&[(j, 1)], &[(k, -1)], mat);
            let mat = b.comb(&[(1, m + j, o + k), (-1, o + n + k, j)]);
            b.push(&[(j, -1)], &[(k, -1)], mat);
            let mat = b.comb(&[(1, j, o + n + k), (1, o + k, m + j)]);
            b.push(&[(j, 1)], &[(k, 1)], mat);
            let mat = b.comb(&[(1, m + j, o + n + k), (1, o + k, j)]);
            b.push(&[(j, -1)], &[(k, 1)], mat);
        }
    }
    if odd_size {
        let c = 2 * m + 1;
        for k in 1..=n {
            let mat = b.comb(&[(1, c, o + k), (-1, o + n + k, c)]);
            b.push(&[], &[(k, -1)], mat);
            let mat = b.comb(&[(1, c, o + n + k), (1, o + k, c)]);
            b.push(&[], &[(k, 1)], mat);
        }
    }
    let mut cartan = Vec::new();
    for i in 1..=m {
        cartan.push(b.comb(&[(1, i, i), (-1, m + i, m + i)]));
    }
    for j in 1..=n {
        cartan.push(b.comb(&[(1, o + j, o + j), (-1, o + n + j, o + n + j)]));
    }
    let delta_positions = (1..=n).map(|j| o + j - 1).collect();
    (theta, cartan, b.vectors, delta_positions)
}

/// Diagonal signs D with ω(X) = D·Xᵗ·D⁻¹.
fn omega_signs(family: Family) -> Vec<i8> {
    let size = family.matrix_size();
    match family.tag {
        FamilyTag::A => vec![1; size],
        FamilyTag::B | FamilyTag::B0 => {
            let (m, n, _) = family.osp_ranks();
            let o = 2 * m + 1;
            (0..size).map(|j| if j >= o && j < o + n { -1 } else { 1 }).collect()
        }
        FamilyTag::C | FamilyTag::D => {
            let (m, n, _) = family.osp_ranks();
            let o = 2 * m;
            (0..size).map(|j| if j >= o + n { -1 } else { 1 }).collect()
        }
    }
}

impl AlgebraModel {
    pub fn build(family: Family) -> Result<AlgebraModel> {
        let family = Family::new(family.tag, family.m, family.n)?;
        let (theta, cartan, root_vectors, delta_positions) = match family.tag {
            FamilyTag::A => build_a(family),
            _ => build_osp(family),
        };
        let mut root_index = HashMap::new();
        for (i, rv) in root_vectors.iter().enumerate() {
            if root_index.insert(rv.root.clone(), i).is_some() {
                return Err(GqsError::Internal(format!("root {} listed twice", rv.root)));
            }
            if rv.matrix.parity().bit() != Some(rv.parity) {
                return Err(GqsError::Internal(format!("parity mismatch for root {}", rv.root)));
            }
        }
        let basis: Vec<SparseVec> =
            cartan.iter().chain(root_vectors.iter().map(|r| &r.matrix)).map(SuperMatrix::flatten).collect();
        let solver = Echelon::from_vectors(&basis);
        if solver.rank() != basis.len() || basis.len() != family.expected_dim() {
            return Err(GqsError::Internal(format!(
                "{family}: basis rank {} of {} elements, expected dimension {}",
                solver.rank(),
                basis.len(),
                family.expected_dim()
            )));
        }
        let signs = omega_signs(family);
        let mut model = AlgebraModel {
            family,
            matrix_size: family.matrix_size(),
            theta,
            cartan,
            root_vectors,
            omega_table: Vec::new(),
            omega_signs: signs,
            delta_positions,
            root_index,
            solver,
            structure: Vec::new(),
        };
        model.omega_table = model.compute_omega_table()?;
        model.structure = model.compute_structure()?;
        Ok(model)
    }

    fn compute_omega_table(&self) -> Result<Vec<(usize, ExactScalar)>> {
        let mut table = Vec::with_capacity(self.root_vectors.len());
        for rv in &self.root_vectors {
            let image = self.omega_matrix(&rv.matrix);
            let j = self
                .root_id(&rv.root.neg())
                .ok_or_else(|| GqsError::Internal(format!("no root vector for -({})", rv.root)))?;
            let target = &self.root_vectors[j].matrix;
            let (&pos, val) = target.entries().next().expect("nonzero root vector");
            let c = image.get(pos.0, pos.1).checked_div(val)?;
            if image != target.scale(&c) || !(c.is_one() || (-c.clone()).is_one()) {
                return Err(GqsError::Internal(format!("ω does not map e_({}) to ±e_(-α)", rv.root)));
            }
            table.push((j, c));
        }
        Ok(table)
    }

    fn compute_structure(&self) -> Result<Vec<Vec<SparseVec>>> {
        let dim = self.dim();
        (0..dim)
            .into_par_iter()
            .map(|i| {
                (0..dim)
                    .map(|j| {
                        let prod = superbracket(&self.basis_matrix(i), &self.basis_matrix(j))?;
                        let ex = self.solver.express(&prod.flatten());
                        if !ex.residual_zero {
                            return Err(GqsError::Internal(format!("bracket of basis {i},{j} leaves the algebra")));
                        }
                        Ok(ex.coefficients)
                    })
                    .collect()
            })
            .collect()
    }

    pub fn dim(&self) -> usize {
        self.cartan.len() + self.root_vectors.len()
    }

    pub fn cartan_dim(&self) -> usize {
        self.cartan.len()
    }

    pub fn basis_index(&self, x: BasisElement) -> usize {
        match x {
            BasisElement::Cartan(i) => i,
            BasisElement::Root(i) => self.cartan.len() + i,
        }
    }

    pub fn basis_element(&self, idx: usize) -> BasisElement {
        if idx < self.cartan.len() {
            BasisElement::Cartan(idx)
        } else {
            BasisElement::Root(idx - self.cartan.len())
        }
    }

    /// Basis index of the root vector with index `i`.
    pub fn root_basis_index(&self, i: usize) -> usize {
        self.cartan.len() + i
    }

    pub fn basis_matrix(&self, idx: usize) -> SuperMatrix {
        match self.basis_element(idx) {
            BasisElement::Cartan(i) => self.cartan[i].clone(),
            BasisElement::Root(i) => self.root_vectors[i].matrix.clone(),
        }
    }

    pub fn basis_parity(&self, idx: usize) -> u8 {
        match self.basis_element(idx) {
            BasisElement::Cartan(_) => 0,
            BasisElement::Root(i) => self.root_vectors[i].parity,
        }
    }

    pub fn root_id(&self, root: &Root) -> Option<usize> {
        self.root_index.get(root).copied()
    }

    pub fn roots(&self) -> impl Iterator<Item = &Root> {
        self.root_vectors.iter().map(|r| &r.root)
    }

    pub fn zero_root(&self) -> Root {
        Root::zero(self.family.eps_len(), self.family.delta_len())
    }

    /// Matrix form of ω: `X ↦ D·Xᵗ·D⁻¹` with the family's sign matrix D.
    pub fn omega_matrix(&self, x: &SuperMatrix) -> SuperMatrix {
        x.transpose().conjugate_by_signs(&self.omega_signs)
    }

    pub fn omega_signs(&self) -> &[i8] {
        &self.omega_signs
    }

    /// ω on a basis element: Cartan elements are fixed, e_α ↦ c·e_{−α}.
    pub fn omega(&self, x: BasisElement) -> (BasisElement, ExactScalar) {
        match x {
            BasisElement::Cartan(i) => (BasisElement::Cartan(i), ExactScalar::one()),
            BasisElement::Root(i) => {
                let (j, c) = &self.omega_table[i];
                (BasisElement::Root(*j), c.clone())
            }
        }
    }

    /// ω on a coordinate vector over the model basis.
    pub fn omega_vec(&self, v: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (&k, c) in v {
            let (img, s) = self.omega(self.basis_element(k));
            out.insert(self.basis_index(img), c * &s);
        }
        out
    }

    /// Structure constants: [[b_i, b_j]] over the model basis.
    pub fn bracket_coords(&self, i: usize, j: usize) -> &SparseVec {
        &self.structure[i][j]
    }

    pub fn bracket_in_basis(&self, x: BasisElement, y: BasisElement) -> BasisExpansion {
        let v = self.bracket_coords(self.basis_index(x), self.basis_index(y));
        BasisExpansion { coefficients: v.clone(), residual_zero: true }
    }

    /// Bracket of two coordinate vectors (bilinear extension of the structure constants).
    pub fn bracket_vec(&self, x: &SparseVec, y: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (&i, a) in x {
            for (&j, b) in y {
                let s = &self.structure[i][j];
                if !s.is_empty() {
                    crate::supermatrix::sparse_axpy(&mut out, &(a * b), s);
                }
            }
        }
        out
    }

    /// Whether [[e_α, e_β]] is nonzero for root-vector indices.
    pub fn roots_bracket_nonzero(&self, a: usize, b: usize) -> bool {
        !self.structure[self.root_basis_index(a)][self.root_basis_index(b)].is_empty()
    }

    /// Coordinates of a matrix over the model basis, if it lies in the algebra.
    pub fn coords_of(&self, x: &SuperMatrix) -> Option<SparseVec> {
        let ex = self.solver.express(&x.flatten());
        ex.residual_zero.then_some(ex.coefficients)
    }

    pub fn matrix_of(&self, v: &SparseVec) -> SuperMatrix {
        let mut acc = SuperMatrix::zero(self.theta.clone());
        for (&k, c) in v {
            acc = acc.add(&self.basis_matrix(k).scale(c)).expect("same size");
        }
        acc
    }

    /// α(h) for a diagonal h, reading ε_i at diagonal position i and δ_j at its block position.
    pub fn root_value(&self, root: &Root, h: &SuperMatrix) -> ExactScalar {
        let mut acc = ExactScalar::zero();
        for (i, &c) in root.eps.iter().enumerate() {
            if c != 0 {
                acc += &(&h.get(i, i) * &ExactScalar::integer(c as i64));
            }
        }
        for (j, &c) in root.delta.iter().enumerate() {
            if c != 0 {
                let p = self.delta_positions[j];
                acc += &(&h.get(p, p) * &ExactScalar::integer(c as i64));
            }
        }
        acc
    }
}

/// Exact structural self-checks of a model.
impl AlgebraModel {
    fn basis_root(&self, idx: usize) -> Root {
        match self.basis_element(idx) {
            BasisElement::Cartan(_) => self.zero_root(),
            BasisElement::Root(r) => self.root_vectors[r].root.clone(),
        }
    }

    /// [[x,[[y,z]]]] − [[[[x,y]],z]] − (−1)^{|x||y|}[[y,[[x,z]]]] for basis indices.
    pub fn jacobi_residual(&self, x: usize, y: usize, z: usize) -> SparseVec {
        let unit = |i: usize| SparseVec::from([(i, ExactScalar::one())]);
        let (ux, uy, uz) = (unit(x), unit(y), unit(z));
        let mut acc = self.bracket_vec(&ux, self.bracket_coords(y, z));
        let minus_one = -ExactScalar::one();
        crate::supermatrix::sparse_axpy(&mut acc, &minus_one, &self.bracket_vec(self.bracket_coords(x, y), &uz));
        let s = crate::supermatrix::koszul_sign(self.basis_parity(x), self.basis_parity(y));
        crate::supermatrix::sparse_axpy(&mut acc, &-s, &self.bracket_vec(&uy, self.bracket_coords(x, z)));
        acc
    }

    /// Basis pairs violating ω([[x,y]]) = [[ω(y), ω(x)]].
    pub fn omega_anti_failures(&self) -> Vec<(usize, usize)> {
        let unit = |i: usize| SparseVec::from([(i, ExactScalar::one())]);
        let images: Vec<SparseVec> = (0..self.dim()).map(|i| self.omega_vec(&unit(i))).collect();
        (0..self.dim())
            .into_par_iter()
            .flat_map_iter(|i| {
                let images = &images;
                (0..self.dim()).filter_map(move |j| {
                    let lhs = self.omega_vec(self.bracket_coords(i, j));
                    let rhs = self.bracket_vec(&images[j], &images[i]);
                    (lhs != rhs).then_some((i, j))
                })
            })
            .collect()
    }

    /// Basis pairs whose bracket leaves the root space of α+β, or breaks parity or the
    /// weight relation [[h, e_α]] = α(h)·e_α.
    pub fn grading_failures(&self) -> Vec<(usize, usize)> {
        (0..self.dim())
            .into_par_iter()
            .flat_map_iter(|i| {
                (0..self.dim()).filter_map(move |j| {
                    let v = self.bracket_coords(i, j);
                    let target = self.basis_root(i).add(&self.basis_root(j));
                    let parity = (self.basis_parity(i) + self.basis_parity(j)) % 2;
                    let ok_support = v
                        .keys()
                        .all(|&k| self.basis_root(k) == target && self.basis_parity(k) == parity);
                    let ok_weight = match (self.basis_element(i), self.basis_element(j)) {
                        (BasisElement::Cartan(h), BasisElement::Root(r)) => {
                            let c = self.root_value(&self.root_vectors[r].root, &self.cartan[h]);
                            let mut expect = SparseVec::new();
                            if !c.is_zero() {
                                expect.insert(j, c);
                            }
                            *v == expect
                        }
                        _ => true,
                    };
                    (!(ok_support && ok_weight)).then_some((i, j))
                })
            })
            .collect()
    }
}

#[derive(Serialize)]
struct RootDump {
    root: String,
    eps: Vec<i32>,
    delta: Vec<i32>,
    parity: &'static str,
}

#[derive(Serialize)]
pub struct ModelDump {
    family: String,
    tag: FamilyTag,
    m: usize,
    n: usize,
    matrix_size: usize,
    dimension: usize,
    cartan_dimension: usize,
    even_dimension: usize,
    odd_dimension: usize,
    roots: Vec<RootDump>,
}

impl AlgebraModel {
    pub fn dump(&self) -> ModelDump {
        let odd = self.root_vectors.iter().filter(|r| r.parity == 1).count();
        ModelDump {
            family: self.family.label(),
            tag: self.family.tag,
            m: self.family.m,
            n: self.family.n,
            matrix_size: self.matrix_size,
            dimension: self.dim(),
            cartan_dimension: self.cartan.len(),
            even_dimension: self.dim() - odd,
            odd_dimension: odd,
            roots: self
                .root_vectors
                .iter()
                .map(|r| RootDump {
                    root: r.root.to_string(),
                    eps: r.root.eps.clone(),
                    delta: r.root.delta.clone(),
                    parity: if r.parity == 0 { "even" } else { "odd" },
                })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_bounds() {
        assert!(Family::d(1, 1).is_err());
        assert!(Family::b(0, 1).is_err());
        assert!(Family::c(1).is_err());
        assert!(Family::b0(0).is_err());
        assert!(Family::a(0, 0).is_ok());
    }

    #[test]
    fn small_dimensions() {
        let m = AlgebraModel::build(Family::b0(1).unwrap()).unwrap();
        assert_eq!((m.matrix_size, m.dim(), m.cartan_dim()), (3, 5, 1));
        let m = AlgebraModel::build(Family::b(1, 1).unwrap()).unwrap();
        assert_eq!((m.dim(), m.cartan_dim(), m.root_vectors.len()), (12, 2, 10));
        let m = AlgebraModel::build(Family::a(1, 0).unwrap()).unwrap();
        assert_eq!(m.dim(), 8);
    }

    #[test]
    fn omega_on_a_is_transpose() {
        let m = AlgebraModel::build(Family::a(1, 1).unwrap()).unwrap();
        let e12 = Root::from_terms(2, 2, &[(1, 1), (2, -1)], &[]);
        let i = m.root_id(&e12).unwrap();
        let (img, c) = m.omega(BasisElement::Root(i));
        let BasisElement::Root(j) = img else { panic!() };
        assert_eq!(m.root_vectors[j].root, e12.neg());
        assert!(c.is_one());
        assert_eq!(m.root_vectors[j].matrix, SuperMatrix::unit(m.theta.clone(), 1, 0));
    }

    #[test]
    fn root_display() {
        let r = Root::from_terms(2, 2, &[(1, 1)], &[(2, -2)]);
        assert_eq!(r.to_string(), "ε1-2δ2");
        assert_eq!(r.parity(), 0);
        assert_eq!(Root::from_terms(1, 1, &[(1, -1)], &[(1, 1)]).parity(), 1);
    }
}
