//! Creation/annihilation operator sets, their quadratic and triple relations, and the
//! classification built on top of the grading search.

pub mod classify;
pub mod closed_forms;
pub mod table2;

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::algebras::{AlgebraModel, BasisElement};
use crate::error::{GqsError, Result};
use crate::exactfield::ExactScalar;
use crate::grading::Grading;
use crate::supermatrix::{Echelon, SparseVec, SuperMatrix};

pub use classify::{
    analyze_deletion, bucket, deletion_sets, enumerate_all, enumerate_witnesses, odd_only_filter, ClassificationCase,
    ClassificationReport, DeletionAnalysis, EnumerationOptions, Provenance, Witness, SCHEMA_VERSION,
};
pub use closed_forms::{
    closed_form_setup, residual, verify_closed_form, ClosedFormCase, ClosedFormReport, Identity, IdentityKind,
};
pub use table2::{expected_rows, nondistinguished_rows, odd_only_rows, CaseKey};

/// One ω-paired couple of operators, as coordinate vectors over the model basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaoPair {
    pub label: String,
    pub minus: SparseVec,
    pub plus: SparseVec,
    pub parity: u8,
    /// Coefficient of the annihilator on the model root vector it is proportional to.
    pub scaling: ExactScalar,
}

/// Creation and annihilation operators. Element `2i` is `x_i^-`, element `2i+1` is `x_i^+`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaoSet {
    pub pairs: Vec<CaoPair>,
}

/// Sign of an element index: −1 for annihilators, +1 for creators.
pub fn element_sign(e: usize) -> i8 {
    if e.is_multiple_of(2) {
        -1
    } else {
        1
    }
}

pub fn element_index(pair: usize, sign: i8) -> usize {
    2 * pair + usize::from(sign > 0)
}

impl CaoSet {
    /// Build from labelled matrices (annihilator, creator) that must lie in the model.
    pub fn from_matrices(model: &AlgebraModel, items: Vec<(String, SuperMatrix, SuperMatrix)>) -> Result<CaoSet> {
        let mut pairs = Vec::with_capacity(items.len());
        for (label, minus, plus) in items {
            let parity = minus.parity().bit().ok_or(GqsError::NonHomogeneous)?;
            let lift = |m: &SuperMatrix| {
                model.coords_of(m).ok_or_else(|| GqsError::Internal(format!("operator {label} is not in {}", model.family)))
            };
            let minus = lift(&minus)?;
            let plus = lift(&plus)?;
            let scaling = minus.values().next().cloned().unwrap_or_else(ExactScalar::zero);
            pairs.push(CaoPair { label, minus, plus, parity, scaling });
        }
        Ok(CaoSet { pairs })
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn element_count(&self) -> usize {
        2 * self.pairs.len()
    }

    pub fn element(&self, e: usize) -> &SparseVec {
        let p = &self.pairs[e / 2];
        if e.is_multiple_of(2) {
            &p.minus
        } else {
            &p.plus
        }
    }

    pub fn element_parity(&self, e: usize) -> u8 {
        self.pairs[e / 2].parity
    }

    /// Plain-text label such as `x3^-`.
    pub fn element_label(&self, e: usize) -> String {
        let s = if e.is_multiple_of(2) { '-' } else { '+' };
        format!("{}^{s}", self.pairs[e / 2].label)
    }

    /// LaTeX label such as `x_{3}^{-}`.
    pub fn element_latex(&self, e: usize) -> String {
        let s = if e.is_multiple_of(2) { '-' } else { '+' };
        let label = &self.pairs[e / 2].label;
        match label.split_once('_') {
            Some((head, sub)) => format!("{head}_{{{sub}}}^{{{s}}}"),
            None => format!("{label}^{{{s}}}"),
        }
    }

    /// Ordered bracket symbols (a, b) with a ≤ b over element indices.
    pub fn symbols(&self) -> Vec<(usize, usize)> {
        let n = self.element_count();
        (0..n).flat_map(|a| (a..n).map(move |b| (a, b))).collect()
    }

    pub fn symbol_index(&self, a: usize, b: usize) -> usize {
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        let n = self.element_count();
        a * n - a * (a + 1) / 2 + b
    }

    pub fn odd_only(&self) -> bool {
        self.pairs.iter().all(|p| p.parity == 1)
    }

    /// Whether ω maps every annihilator exactly onto its creator.
    pub fn omega_paired(&self, model: &AlgebraModel) -> bool {
        self.pairs.iter().all(|p| model.omega_vec(&p.minus) == p.plus)
    }

    /// Creation and annihilation roles exchanged.
    pub fn swapped(&self) -> CaoSet {
        let pairs = self
            .pairs
            .iter()
            .map(|p| CaoPair {
                label: p.label.clone(),
                minus: p.plus.clone(),
                plus: p.minus.clone(),
                parity: p.parity,
                scaling: p.plus.values().next().cloned().unwrap_or_else(ExactScalar::zero),
            })
            .collect();
        CaoSet { pairs }
    }
}

/// One pair per root vector of G₋₁ (ascending root id); creators are the ω-images.
pub fn cao_set(model: &AlgebraModel, grading: &Grading) -> CaoSet {
    let pairs = grading
        .roots_in_grade(-1)
        .into_iter()
        .enumerate()
        .map(|(i, r)| {
            let idx = model.root_basis_index(r);
            let minus = SparseVec::from([(idx, ExactScalar::one())]);
            let (img, c) = model.omega(BasisElement::Root(r));
            let plus = SparseVec::from([(model.basis_index(img), c)]);
            CaoPair {
                label: format!("x_{}", i + 1),
                minus,
                plus,
                parity: model.root_vectors[r].parity,
                scaling: ExactScalar::one(),
            }
        })
        .collect();
    CaoSet { pairs }
}

/// `[[[[x_a, x_b]], x_c]]` expanded over the CAO elements.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripleRelation {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub expansion: SparseVec,
}

/// Quadratic relations (kernel over the bracket symbols) and the full triple table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationSet {
    pub n_pairs: usize,
    pub symbols: Vec<(usize, usize)>,
    /// Coefficient vectors over symbol indices, one per dependent symbol.
    pub quadratic: Vec<SparseVec>,
    /// Sorted by (a, b, c).
    pub triple: Vec<TripleRelation>,
}

fn symbol_vectors(model: &AlgebraModel, caos: &CaoSet) -> Vec<SparseVec> {
    caos.symbols().par_iter().map(|&(a, b)| model.bracket_vec(caos.element(a), caos.element(b))).collect()
}

pub fn generate_relations(model: &AlgebraModel, caos: &CaoSet) -> Result<RelationSet> {
    let symbols = caos.symbols();
    let inner = symbol_vectors(model, caos);
    let quadratic = Echelon::from_vectors(&inner).relations().to_vec();
    let elements: Vec<SparseVec> = (0..caos.element_count()).map(|e| caos.element(e).clone()).collect();
    let basis = Echelon::from_vectors(&elements);
    if basis.rank() != elements.len() {
        return Err(GqsError::Internal("creation/annihilation operators are linearly dependent".into()));
    }
    let n = caos.element_count();
    let rows: Vec<Result<Vec<TripleRelation>>> = symbols
        .par_iter()
        .zip(inner.par_iter())
        .map(|(&(a, b), v)| {
            (0..n)
                .map(|c| {
                    let t = model.bracket_vec(v, caos.element(c));
                    let ex = basis.express(&t);
                    if !ex.residual_zero {
                        return Err(GqsError::Internal(format!(
                            "triple bracket ({}, {}, {}) leaves the operator span",
                            caos.element_label(a),
                            caos.element_label(b),
                            caos.element_label(c)
                        )));
                    }
                    Ok(TripleRelation { a, b, c, expansion: ex.coefficients })
                })
                .collect()
        })
        .collect();
    let mut triple = Vec::with_capacity(symbols.len() * n);
    for r in rows {
        triple.extend(r?);
    }
    Ok(RelationSet { n_pairs: caos.len(), symbols, quadratic, triple })
}

/// True iff the operators and their pairwise brackets span the whole algebra.
pub fn generation_check(model: &AlgebraModel, caos: &CaoSet) -> bool {
    let mut e = Echelon::new();
    for i in 0..caos.element_count() {
        e.insert(caos.element(i));
    }
    for v in symbol_vectors(model, caos) {
        e.insert(&v);
    }
    e.rank() == model.dim()
}

/// Output flavour for relation emission.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Notation {
    Text,
    Latex,
}

fn coefficient_text(c: &ExactScalar, notation: Notation) -> String {
    let s = c.to_string();
    let s = if notation == Notation::Latex { s.replace("√2", "\\sqrt{2}") } else { s };
    let compound = !c.rat_part().is_zero() && !c.surd_part().is_zero();
    if compound {
        format!("({s})")
    } else {
        s
    }
}

/// `c1 t1 + c2 t2 - ...`, or `0` for an empty sum.
pub fn format_combination(terms: &[(ExactScalar, String)], notation: Notation) -> String {
    let mut out = String::new();
    for (c, t) in terms {
        if c.is_zero() {
            continue;
        }
        let neg_one = -ExactScalar::one();
        let (sign, body) = if c.is_one() {
            ("+", t.clone())
        } else if *c == neg_one {
            ("-", t.clone())
        } else {
            let txt = coefficient_text(c, notation);
            match txt.strip_prefix('-') {
                Some(rest) if !rest.starts_with('(') => ("-", format!("{rest} {t}")),
                _ => ("+", format!("{txt} {t}")),
            }
        };
        if out.is_empty() {
            if sign == "-" {
                out.push('-');
            }
        } else {
            out.push_str(&format!(" {sign} "));
        }
        out.push_str(&body);
    }
    if out.is_empty() {
        "0".to_string()
    } else {
        out
    }
}

impl RelationSet {
    fn bracket(caos: &CaoSet, a: usize, b: usize, notation: Notation) -> String {
        match notation {
            Notation::Text => format!("[[{}, {}]]", caos.element_label(a), caos.element_label(b)),
            Notation::Latex => {
                format!("[\\![ {}, {} ]\\!]", caos.element_latex(a), caos.element_latex(b))
            }
        }
    }

    fn element(caos: &CaoSet, e: usize, notation: Notation) -> String {
        match notation {
            Notation::Text => caos.element_label(e),
            Notation::Latex => caos.element_latex(e),
        }
    }

    /// One relation per line: quadratic relations first, then every triple bracket.
    pub fn lines(&self, caos: &CaoSet, notation: Notation) -> Vec<String> {
        let mut out = Vec::new();
        for rel in &self.quadratic {
            let terms: Vec<(ExactScalar, String)> = rel
                .iter()
                .map(|(&s, c)| {
                    let (a, b) = self.symbols[s];
                    (c.clone(), Self::bracket(caos, a, b, notation))
                })
                .collect();
            out.push(format!("{} = 0", format_combination(&terms, notation)));
        }
        for t in &self.triple {
            let inner = Self::bracket(caos, t.a, t.b, notation);
            let outer = match notation {
                Notation::Text => format!("[[{inner}, {}]]", Self::element(caos, t.c, notation)),
                Notation::Latex => format!("[\\![ {inner}, {} ]\\!]", Self::element(caos, t.c, notation)),
            };
            let terms: Vec<(ExactScalar, String)> =
                t.expansion.iter().map(|(&l, c)| (c.clone(), Self::element(caos, l, notation))).collect();
            out.push(format!("{outer} = {}", format_combination(&terms, notation)));
        }
        out
    }

    pub fn to_text(&self, caos: &CaoSet) -> String {
        let mut s = self.lines(caos, Notation::Text).join("\n");
        s.push('\n');
        s
    }

    /// LaTeX `eqnarray*` body in double-bracket notation.
    pub fn to_latex(&self, caos: &CaoSet) -> String {
        let mut s = String::from("\\begin{eqnarray*}\n");
        let lines = self.lines(caos, Notation::Latex);
        let count = lines.len();
        for (i, l) in lines.into_iter().enumerate() {
            let l = l.replacen(" = ", " &=& ", 1);
            s.push_str(&l);
            if i + 1 < count {
                s.push_str(" \\\\");
            }
            s.push('\n');
        }
        s.push_str("\\end{eqnarray*}\n");
        s
    }

    /// SHA-256 of the plain-text emission.
    pub fn digest(&self, caos: &CaoSet) -> String {
        let mut h = Sha256::new();
        h.update(self.to_text(caos).as_bytes());
        h.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Expansion of `[[[[x_a, x_b]], x_c]]`, reordering the inner bracket if needed.
    pub fn triple_value(&self, caos: &CaoSet, a: usize, b: usize, c: usize) -> SparseVec {
        let n = caos.element_count();
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let pos = caos.symbol_index(lo, hi) * n + c;
        let t = &self.triple[pos];
        debug_assert_eq!((t.a, t.b, t.c), (lo, hi, c));
        if a <= b {
            t.expansion.clone()
        } else {
            let s = -crate::supermatrix::koszul_sign(caos.element_parity(a), caos.element_parity(b));
            crate::supermatrix::sparse_scale(&t.expansion, &s)
        }
    }
}
