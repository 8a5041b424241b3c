//! Node deletion, G0-module decomposition and the search for Z-gradings
//! G = G₋₂ ⊕ G₋₁ ⊕ G₀ ⊕ G₊₁ ⊕ G₊₂ compatible with ω.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::algebras::{AlgebraModel, Root};
use crate::error::Result;
use crate::rootsys::{name_root_set, retained_root_span, Diagram, SubalgebraName};
use crate::supermatrix::{Echelon, SparseVec};

/// A regular subalgebra: the Cartan subalgebra plus a set of root vectors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubalgebraSpan {
    /// Model basis indices, always including every Cartan index.
    pub basis_indices: BTreeSet<usize>,
    /// Root-vector ids contained in the span.
    pub roots: BTreeSet<usize>,
    pub name: SubalgebraName,
}

impl SubalgebraSpan {
    fn from_roots(model: &AlgebraModel, roots: BTreeSet<usize>, cartan_excess: usize) -> Result<SubalgebraSpan> {
        let root_list: Vec<Root> = roots.iter().map(|&i| model.root_vectors[i].root.clone()).collect();
        let name = name_root_set(&root_list, cartan_excess)?;
        let basis_indices =
            (0..model.cartan_dim()).chain(roots.iter().map(|&i| model.root_basis_index(i))).collect();
        Ok(SubalgebraSpan { basis_indices, roots, name })
    }

    pub fn dim(&self) -> usize {
        self.basis_indices.len()
    }
}

/// A G0-module spanned by root vectors, with the block that ω maps it onto.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleBlock {
    pub roots: Vec<usize>,
    pub omega_partner: usize,
}

impl ModuleBlock {
    pub fn basis_indices(&self, model: &AlgebraModel) -> Vec<usize> {
        self.roots.iter().map(|&i| model.root_basis_index(i)).collect()
    }

    pub fn is_self_paired(&self, own_index: usize) -> bool {
        self.omega_partner == own_index
    }
}

/// Grade assignment with G0 in degree zero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Grading {
    pub g0: SubalgebraSpan,
    pub blocks: Vec<ModuleBlock>,
    /// Grade of each block (same order as `blocks`).
    pub assignment: Vec<i64>,
    /// Grade of every root vector, indexed by root id.
    pub root_grades: Vec<i64>,
    pub length: u8,
}

impl Grading {
    /// Grading from per-root grades (Cartan elements sit in degree 0).
    pub fn from_root_grades(g0: SubalgebraSpan, blocks: Vec<ModuleBlock>, root_grades: Vec<i64>) -> Grading {
        let assignment = blocks.iter().map(|b| b.roots.first().map_or(0, |&r| root_grades[r])).collect();
        let top = root_grades.iter().map(|g| g.unsigned_abs()).max().unwrap_or(0);
        let length = (2 * top + 1).min(u8::MAX as u64) as u8;
        Grading { g0, blocks, assignment, root_grades, length }
    }

    /// Root ids in grade `k`, ascending.
    pub fn roots_in_grade(&self, k: i64) -> Vec<usize> {
        (0..self.root_grades.len()).filter(|&i| self.root_grades[i] == k).collect()
    }

    /// Basis indices in grade `k` (Cartan included for k = 0).
    pub fn basis_in_grade(&self, model: &AlgebraModel, k: i64) -> Vec<usize> {
        let mut out: Vec<usize> = if k == 0 { (0..model.cartan_dim()).collect() } else { Vec::new() };
        out.extend(self.roots_in_grade(k).into_iter().map(|i| model.root_basis_index(i)));
        out
    }

    pub fn grade_of_basis(&self, model: &AlgebraModel, idx: usize) -> i64 {
        match model.basis_element(idx) {
            crate::algebras::BasisElement::Cartan(_) => 0,
            crate::algebras::BasisElement::Root(i) => self.root_grades[i],
        }
    }

    /// N = dim G₋₁.
    pub fn n_pairs(&self) -> usize {
        self.roots_in_grade(-1).len()
    }

    /// The same grading with all signs reversed.
    pub fn negated(&self) -> Grading {
        let mut g = self.clone();
        g.assignment.iter_mut().for_each(|x| *x = -*x);
        g.root_grades.iter_mut().for_each(|x| *x = -*x);
        g
    }
}

/// Close a root set under nonzero brackets.
fn bracket_closure(model: &AlgebraModel, roots: &mut BTreeSet<usize>) {
    loop {
        let current: Vec<usize> = roots.iter().copied().collect();
        let mut added = false;
        for &a in &current {
            for &b in &current {
                if !model.roots_bracket_nonzero(a, b) {
                    continue;
                }
                let sum = model.root_vectors[a].root.add(&model.root_vectors[b].root);
                if let Some(c) = model.root_id(&sum) {
                    added |= roots.insert(c);
                }
            }
        }
        if !added {
            return;
        }
    }
}

/// H plus the root vectors whose roots lie in the Z-span of the retained nodes.
pub fn delete_to_subalgebra(
    model: &AlgebraModel,
    diagram: &Diagram,
    deleted: &BTreeSet<usize>,
) -> Result<SubalgebraSpan> {
    let span = retained_root_span(diagram, deleted);
    let roots: BTreeSet<usize> = span.iter().filter_map(|r| model.root_id(r)).collect();
    let excess = if diagram.extended { deleted.len().saturating_sub(1) } else { deleted.len() };
    SubalgebraSpan::from_roots(model, roots, excess)
}

/// Connected components of the complement of G0 under the adjoint action of G0, in a
/// canonical order (by their sorted root lists).
pub fn decompose_modules(model: &AlgebraModel, g0: &SubalgebraSpan) -> Vec<ModuleBlock> {
    let comp: Vec<usize> = (0..model.root_vectors.len()).filter(|i| !g0.roots.contains(i)).collect();
    let pos: BTreeMap<usize, usize> = comp.iter().enumerate().map(|(k, &i)| (i, k)).collect();
    let mut parent: Vec<usize> = (0..comp.len()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for &b in &comp {
        for &a in &g0.roots {
            if !model.roots_bracket_nonzero(a, b) {
                continue;
            }
            let sum = model.root_vectors[a].root.add(&model.root_vectors[b].root);
            if let Some(c) = model.root_id(&sum) {
                if let Some(&pc) = pos.get(&c) {
                    let (x, y) = (find(&mut parent, pos[&b]), find(&mut parent, pc));
                    parent[x] = y;
                }
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (k, &i) in comp.iter().enumerate() {
        let g = find(&mut parent, k);
        groups.entry(g).or_default().push(i);
    }
    let mut blocks: Vec<Vec<usize>> = groups.into_values().collect();
    let key = |b: &Vec<usize>| {
        let mut rs: Vec<Root> = b.iter().map(|&i| model.root_vectors[i].root.clone()).collect();
        rs.sort();
        rs
    };
    blocks.sort_by_cached_key(key);
    let owner: BTreeMap<usize, usize> =
        blocks.iter().enumerate().flat_map(|(bi, b)| b.iter().map(move |&i| (i, bi))).collect();
    blocks
        .iter()
        .map(|b| {
            let neg = model.omega_table[b[0]].0;
            ModuleBlock { roots: b.clone(), omega_partner: owner[&neg] }
        })
        .collect()
}

/// Merge ω-invariant blocks into G0 (re-closing under brackets) until none remain.
pub fn absorb_invariant_modules(
    model: &AlgebraModel,
    g0: &SubalgebraSpan,
    blocks: &[ModuleBlock],
) -> Result<(SubalgebraSpan, Vec<ModuleBlock>)> {
    let mut g0 = g0.clone();
    let mut blocks = blocks.to_vec();
    loop {
        let invariant: Vec<&ModuleBlock> =
            blocks.iter().enumerate().filter(|(i, b)| b.is_self_paired(*i)).map(|(_, b)| b).collect();
        if invariant.is_empty() {
            return Ok((g0, blocks));
        }
        let mut roots = g0.roots.clone();
        for b in invariant {
            roots.extend(b.roots.iter().copied());
        }
        bracket_closure(model, &mut roots);
        g0 = SubalgebraSpan::from_roots(model, roots, g0.name.cartan_excess)?;
        blocks = decompose_modules(model, &g0);
    }
}

/// Block-level bracket constraints: grade(p) + grade(q) = grade(r), where `None` is G0.
struct Constraints {
    triples: BTreeSet<Triple>,
}

fn block_constraints(model: &AlgebraModel, blocks: &[ModuleBlock]) -> Constraints {
    let mut owner: Vec<Option<usize>> = vec![None; model.root_vectors.len()];
    for (bi, b) in blocks.iter().enumerate() {
        for &r in &b.roots {
            owner[r] = Some(bi);
        }
    }
    let mut triples = BTreeSet::new();
    let n = model.root_vectors.len();
    for a in 0..n {
        for b in 0..n {
            if !model.roots_bracket_nonzero(a, b) {
                continue;
            }
            let sum = model.root_vectors[a].root.add(&model.root_vectors[b].root);
            let target = if sum.is_zero() { None } else { owner[model.root_id(&sum).expect("closed root system")] };
            triples.insert((owner[a], owner[b], target));
        }
    }
    Constraints { triples }
}

/// All valid gradings of the given blocks, with the first block in negative degree.
pub fn search_gradings(model: &AlgebraModel, g0: &SubalgebraSpan, blocks: &[ModuleBlock]) -> Vec<Grading> {
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    let mut seen = BTreeSet::new();
    for (i, b) in blocks.iter().enumerate() {
        if seen.contains(&i) {
            continue;
        }
        if b.omega_partner == i {
            return Vec::new();
        }
        seen.insert(i);
        seen.insert(b.omega_partner);
        pairs.push((i, b.omega_partner));
    }
    if pairs.is_empty() {
        return Vec::new();
    }
    let cons = block_constraints(model, blocks);
    // each constraint is checked at the first pair index where all its blocks are assigned
    let mut pair_of = vec![0usize; blocks.len()];
    for (k, &(i, j)) in pairs.iter().enumerate() {
        pair_of[i] = k;
        pair_of[j] = k;
    }
    let mut due: Vec<Vec<Triple>> = vec![Vec::new(); pairs.len()];
    for &t in &cons.triples {
        let level = [t.0, t.1, t.2].iter().flatten().map(|&b| pair_of[b]).max().unwrap_or(0);
        due[level].push(t);
    }
    let mut grades = vec![0i64; blocks.len()];
    let mut found = Vec::new();
    assign(0, &pairs, &due, &mut grades, &mut found);

    let mut out = Vec::new();
    for grades in found {
        let mut root_grades = vec![0i64; model.root_vectors.len()];
        for (bi, b) in blocks.iter().enumerate() {
            for &r in &b.roots {
                root_grades[r] = grades[bi];
            }
        }
        if root_level_generation(model, &root_grades) {
            out.push(Grading::from_root_grades(g0.clone(), blocks.to_vec(), root_grades));
        }
    }
    out.sort_by(|a, b| a.assignment.cmp(&b.assignment));
    out
}

type Triple = (Option<usize>, Option<usize>, Option<usize>);

/// Depth-first assignment of ±1, ±2 to ω-pairs, block 0 negative.
fn assign(k: usize, pairs: &[(usize, usize)], due: &[Vec<Triple>], grades: &mut [i64], out: &mut Vec<Vec<i64>>) {
    if k == pairs.len() {
        out.push(grades.to_vec());
        return;
    }
    let (i, j) = pairs[k];
    for g in [-1i64, -2, 1, 2] {
        if i == 0 && g > 0 {
            continue;
        }
        grades[i] = g;
        grades[j] = -g;
        let grade = |o: Option<usize>| o.map_or(0, |b| grades[b]);
        if due[k].iter().all(|&(p, q, r)| grade(p) + grade(q) == grade(r)) {
            assign(k + 1, pairs, due, grades, out);
        }
    }
    grades[i] = 0;
    grades[j] = 0;
}

/// G₊₁ ≠ 0, every root of G₊₂ (resp. G₀) is hit by a nonzero bracket [G₊₁,G₊₁]
/// (resp. [G₊₁,G₋₁]); root spaces are one-dimensional so this is the span condition.
fn root_level_generation(model: &AlgebraModel, grades: &[i64]) -> bool {
    let plus: Vec<usize> = (0..grades.len()).filter(|&i| grades[i] == 1).collect();
    let minus: Vec<usize> = (0..grades.len()).filter(|&i| grades[i] == -1).collect();
    if plus.is_empty() {
        return false;
    }
    let mut hit = BTreeSet::new();
    for (xs, ys) in [(&plus, &plus), (&plus, &minus)] {
        for &a in xs {
            for &b in ys {
                if model.roots_bracket_nonzero(a, b) {
                    let sum = model.root_vectors[a].root.add(&model.root_vectors[b].root);
                    if let Some(c) = model.root_id(&sum) {
                        hit.insert(c);
                    }
                }
            }
        }
    }
    (0..grades.len()).filter(|&i| grades[i] == 2 || grades[i] == 0).all(|i| hit.contains(&i))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub checks: Vec<CheckResult>,
    /// Whether H ⊆ [[G₊₁, G₋₁]] (recorded, not required).
    pub cartan_in_bracket: bool,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<&CheckResult> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }
}

fn span_of_brackets(model: &AlgebraModel, xs: &[usize], ys: &[usize]) -> Echelon {
    let mut e = Echelon::new();
    for &a in xs {
        for &b in ys {
            let v = model.bracket_coords(a, b);
            if !v.is_empty() {
                e.insert(v);
            }
        }
    }
    e
}

fn unit(idx: usize) -> SparseVec {
    SparseVec::from([(idx, crate::ExactScalar::from(1))])
}

/// Full check of a grading against the structure constants.
pub fn validate_grading(model: &AlgebraModel, grading: &Grading) -> ValidationReport {
    let mut checks = Vec::new();
    let mut push = |name: &str, passed: bool, detail: String| {
        checks.push(CheckResult { name: name.to_string(), passed, detail });
    };

    let max = grading.root_grades.iter().map(|g| g.abs()).max().unwrap_or(0);
    push(
        "grade range",
        max <= 2,
        if max <= 2 { String::new() } else { format!("|grade|>2: a root vector sits in degree ±{max}") },
    );

    // direct sum: G0 ∪ blocks partition the basis and G0 is exactly the degree-zero part
    let mut covered = grading.g0.basis_indices.clone();
    let mut disjoint = true;
    for b in &grading.blocks {
        for idx in b.basis_indices(model) {
            disjoint &= covered.insert(idx);
        }
    }
    let degree_zero: BTreeSet<usize> = grading.basis_in_grade(model, 0).into_iter().collect();
    let direct = disjoint && covered.len() == model.dim() && degree_zero == grading.g0.basis_indices;
    push("direct sum", direct, if direct { String::new() } else { "subspaces do not partition the basis".into() });

    let mut closure_detail = String::new();
    'outer: for i in 0..model.dim() {
        for j in 0..model.dim() {
            let v = model.bracket_coords(i, j);
            if v.is_empty() {
                continue;
            }
            let s = grading.grade_of_basis(model, i) + grading.grade_of_basis(model, j);
            if let Some((&k, _)) = v.iter().find(|(&k, _)| grading.grade_of_basis(model, k) != s) {
                closure_detail = format!(
                    "[[b{i}, b{j}]] has a component on b{k} of degree {} instead of {s}",
                    grading.grade_of_basis(model, k)
                );
                break 'outer;
            }
        }
    }
    push("bracket closure", closure_detail.is_empty(), closure_detail);

    let mut omega_detail = String::new();
    for idx in 0..model.dim() {
        let g = grading.grade_of_basis(model, idx);
        let img = model.omega_vec(&unit(idx));
        if img.keys().any(|&k| grading.grade_of_basis(model, k) != -g) {
            omega_detail = format!("ω(b{idx}) is not in degree {}", -g);
            break;
        }
    }
    push("omega pairing", omega_detail.is_empty(), omega_detail);

    let plus = grading.basis_in_grade(model, 1);
    let minus = grading.basis_in_grade(model, -1);
    push(
        "nonempty G±1",
        !plus.is_empty() && plus.len() == minus.len(),
        format!("dim G+1 = {}, dim G-1 = {}", plus.len(), minus.len()),
    );

    for sign in [1i64, -1] {
        let ones = grading.basis_in_grade(model, sign);
        let twos = grading.basis_in_grade(model, 2 * sign);
        let span = span_of_brackets(model, &ones, &ones);
        let ok = span.rank() == twos.len() && twos.iter().all(|&t| span.contains(&unit(t)));
        push(
            if sign > 0 { "G+2 = [[G+1,G+1]]" } else { "G-2 = [[G-1,G-1]]" },
            ok,
            format!("rank {} vs dim {}", span.rank(), twos.len()),
        );
    }

    let span = span_of_brackets(model, &plus, &minus);
    let g0_roots: Vec<usize> = grading.g0.roots.iter().map(|&r| model.root_basis_index(r)).collect();
    let roots_ok = g0_roots.iter().all(|&t| span.contains(&unit(t)));
    push(
        "G0 root part in [[G+1,G-1]]",
        roots_ok,
        if roots_ok { String::new() } else { "some G0 root vector is not generated".into() },
    );
    let cartan_in_bracket = (0..model.cartan_dim()).all(|h| span.contains(&unit(h)));
    ValidationReport { checks, cartan_in_bracket }
}

/// Grading of a plain diagram by the sum of coefficients on the deleted nodes (1-based labels).
pub fn coefficient_grading(
    model: &AlgebraModel,
    diagram: &Diagram,
    deleted: &BTreeSet<usize>,
) -> Result<Grading> {
    let simple: Vec<Root> = diagram.nodes.iter().filter(|n| n.label != 0).map(|n| n.root.clone()).collect();
    let mut grades = Vec::with_capacity(model.root_vectors.len());
    for rv in &model.root_vectors {
        let c = crate::rootsys::integer_coefficients(&simple, &rv.root)
            .ok_or_else(|| crate::GqsError::Internal(format!("root {} not in the root lattice", rv.root)))?;
        grades.push(deleted.iter().map(|&l| c[l - 1]).sum::<i64>());
    }
    let g0 = delete_to_subalgebra(model, diagram, deleted)?;
    let blocks = decompose_modules(model, &g0);
    Ok(Grading::from_root_grades(g0, blocks, grades))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebras::Family;
    use crate::rootsys::{diagram_of, distinguished_system, name_of_types, SimpleType};

    fn setup(family: Family, extended: bool) -> (AlgebraModel, Diagram) {
        let model = AlgebraModel::build(family).unwrap();
        let diagram = diagram_of(&distinguished_system(family), extended);
        (model, diagram)
    }

    fn del(labels: &[usize]) -> BTreeSet<usize> {
        labels.iter().copied().collect()
    }

    #[test]
    fn a11_middle_node_leaves_two_sl2() {
        let (model, d) = setup(Family::a(1, 1).unwrap(), false);
        let g0 = delete_to_subalgebra(&model, &d, &del(&[2])).unwrap();
        assert_eq!(g0.name.key(), name_of_types(&[SimpleType::Sl(2, 0), SimpleType::Sl(0, 2)]).key());
        let complement: Vec<usize> = (0..model.root_vectors.len()).filter(|r| !g0.roots.contains(r)).collect();
        assert_eq!(complement.len(), 8);
        assert!(complement.iter().all(|&r| model.root_vectors[r].parity == 1));
    }

    #[test]
    fn b0_last_node_leaves_sl_n() {
        for n in 1..=3 {
            let (model, d) = setup(Family::b0(n).unwrap(), false);
            let g0 = delete_to_subalgebra(&model, &d, &del(&[n])).unwrap();
            assert_eq!(g0.name.key(), name_of_types(&[SimpleType::Sl(n, 0)]).key());
        }
    }

    #[test]
    fn single_node_deletion_in_a_gives_one_length_three_grading() {
        let (model, d) = setup(Family::a(1, 1).unwrap(), false);
        for i in 1..=3 {
            let g0 = delete_to_subalgebra(&model, &d, &del(&[i])).unwrap();
            let blocks = decompose_modules(&model, &g0);
            assert_eq!(blocks.len(), 2);
            let gs = search_gradings(&model, &g0, &blocks);
            assert_eq!(gs.len(), 1);
            assert_eq!(gs[0].length, 3);
            assert_eq!(gs[0].n_pairs(), i * (4 - i));
        }
    }

    #[test]
    fn two_node_deletion_in_a_gives_three_gradings() {
        let (model, d) = setup(Family::a(1, 1).unwrap(), false);
        let g0 = delete_to_subalgebra(&model, &d, &del(&[1, 2])).unwrap();
        let blocks = decompose_modules(&model, &g0);
        assert_eq!(blocks.len(), 6);
        let gs = search_gradings(&model, &g0, &blocks);
        assert_eq!(gs.len(), 3);
        assert!(gs.iter().all(|g| g.length == 5));
        for g in &gs {
            assert!(validate_grading(&model, g).passed());
        }
    }

    #[test]
    fn adjacent_extended_deletion_in_b_absorbs_an_invariant_module() {
        let (model, d) = setup(Family::b(1, 2).unwrap(), true);
        let g0 = delete_to_subalgebra(&model, &d, &del(&[1, 2])).unwrap();
        let blocks = decompose_modules(&model, &g0);
        assert_eq!(blocks.len(), 7);
        assert_eq!(blocks.iter().enumerate().filter(|(i, b)| b.is_self_paired(*i)).count(), 1);
        let (g0, blocks) = absorb_invariant_modules(&model, &g0, &blocks).unwrap();
        assert_eq!(g0.name.key(), name_of_types(&[SimpleType::B(1, 1)]).key());
        assert_eq!(blocks.len(), 4);
        let gs = search_gradings(&model, &g0, &blocks);
        assert_eq!(gs.len(), 1);
        assert_eq!(gs[0].length, 5);
    }

    #[test]
    fn absorbing_without_invariant_modules_is_identity() {
        let (model, d) = setup(Family::a(1, 1).unwrap(), false);
        let g0 = delete_to_subalgebra(&model, &d, &del(&[2])).unwrap();
        let blocks = decompose_modules(&model, &g0);
        let (g1, b1) = absorb_invariant_modules(&model, &g0, &blocks).unwrap();
        assert_eq!((g1, b1), (g0, blocks));
    }

    #[test]
    fn first_node_of_d_gives_one_length_five_grading() {
        let (model, d) = setup(Family::d(2, 2).unwrap(), false);
        let g0 = delete_to_subalgebra(&model, &d, &del(&[1])).unwrap();
        let blocks = decompose_modules(&model, &g0);
        assert_eq!(blocks.len(), 4);
        let gs = search_gradings(&model, &g0, &blocks);
        assert_eq!(gs.len(), 1);
        assert_eq!(gs[0].length, 5);
        assert_eq!(gs[0].n_pairs(), 2 * (2 + 2 - 1));
    }

    #[test]
    fn para_bose_grading_validates() {
        let (model, d) = setup(Family::b0(1).unwrap(), false);
        let g0 = delete_to_subalgebra(&model, &d, &del(&[1])).unwrap();
        let gs = search_gradings(&model, &g0, &decompose_modules(&model, &g0));
        assert_eq!(gs.len(), 1);
        let report = validate_grading(&model, &gs[0]);
        assert!(report.passed(), "{:?}", report.failures());
        assert_eq!(gs[0].length, 5);
        assert!(report.cartan_in_bracket);
    }

    #[test]
    fn flipping_one_block_breaks_omega_pairing() {
        let (model, d) = setup(Family::a(1, 1).unwrap(), false);
        let g0 = delete_to_subalgebra(&model, &d, &del(&[2])).unwrap();
        let blocks = decompose_modules(&model, &g0);
        let mut g = search_gradings(&model, &g0, &blocks).remove(0);
        for &r in &g.blocks[0].roots {
            g.root_grades[r] = -g.root_grades[r];
        }
        let report = validate_grading(&model, &g);
        assert!(report.failures().iter().any(|c| c.name == "omega pairing"));
    }

    #[test]
    fn three_plain_deletions_in_b_exceed_grade_two() {
        let (model, d) = setup(Family::b(2, 2).unwrap(), false);
        let deleted = del(&[1, 2, 3]);
        let g0 = delete_to_subalgebra(&model, &d, &deleted).unwrap();
        assert!(search_gradings(&model, &g0, &decompose_modules(&model, &g0)).is_empty());
        let g = coefficient_grading(&model, &d, &deleted).unwrap();
        let report = validate_grading(&model, &g);
        assert!(report.failures().iter().any(|c| c.detail.contains("|grade|>2")));
    }

    #[test]
    fn root_grades_are_additive() {
        let (model, d) = setup(Family::a(1, 1).unwrap(), false);
        let g0 = delete_to_subalgebra(&model, &d, &del(&[1, 3])).unwrap();
        for g in search_gradings(&model, &g0, &decompose_modules(&model, &g0)) {
            for a in 0..model.root_vectors.len() {
                for b in 0..model.root_vectors.len() {
                    let sum = model.root_vectors[a].root.add(&model.root_vectors[b].root);
                    if let Some(c) = model.root_id(&sum) {
                        assert_eq!(g.root_grades[c], g.root_grades[a] + g.root_grades[b]);
                    }
                }
            }
        }
    }
}
