//! Enumeration of all GQS of an algebra and bucketing by (G0 name, length, N).

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{cao_set, generate_relations, generation_check};
use crate::algebras::{AlgebraModel, Family};
use crate::error::Result;
use crate::grading::{
    absorb_invariant_modules, decompose_modules, delete_to_subalgebra, search_gradings, validate_grading, Grading,
    ModuleBlock, SubalgebraSpan,
};
use crate::rootsys::{diagram_of, distinguished_system, enumerate_simple_systems, Diagram, SubalgebraName};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationOptions {
    pub include_nondistinguished: bool,
    pub include_extended: bool,
    /// Largest deletion set (1..=3 for classification; larger values are used by negative checks).
    pub max_delete: usize,
    /// Compute a relation digest for each bucket.
    pub relation_digests: bool,
}

impl Default for EnumerationOptions {
    fn default() -> Self {
        EnumerationOptions { include_nondistinguished: false, include_extended: true, max_delete: 3, relation_digests: true }
    }
}

/// Where a grading came from: simple system, diagram type, deleted labels, grading index.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Provenance {
    pub system: usize,
    pub extended: bool,
    pub deleted: Vec<usize>,
    pub grading: usize,
}

impl Provenance {
    pub fn selector(&self) -> String {
        let d: Vec<String> = self.deleted.iter().map(|x| x.to_string()).collect();
        format!("system={} {} deleted={} grading={}", self.system, if self.extended { "extended" } else { "plain" }, d.join(","), self.grading)
    }
}

/// One valid grading with its checks.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Witness {
    pub provenance: Provenance,
    pub g0_name: SubalgebraName,
    pub length: u8,
    pub n_pairs: usize,
    pub odd_only: bool,
    pub validation_passed: bool,
    pub failed_checks: Vec<String>,
    pub generation: bool,
    pub cartan_in_bracket: bool,
    #[serde(skip)]
    pub grading: Option<Grading>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClassificationCase {
    pub family: Family,
    pub g0_name: SubalgebraName,
    pub length: u8,
    #[serde(rename = "N")]
    pub n_pairs: usize,
    /// Some witness has only odd operators (its grading is consistent with the Z2-grading).
    pub odd_only: bool,
    /// Every witness passed validation and the generation check.
    pub validated: bool,
    pub provenance: Vec<Provenance>,
    pub relation_digest: Option<String>,
}

impl ClassificationCase {
    pub fn key(&self) -> (String, u8, usize) {
        (self.g0_name.key(), self.length, self.n_pairs)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub schema_version: u32,
    pub family: String,
    pub include_nondistinguished: bool,
    pub include_extended: bool,
    pub max_delete: usize,
    pub systems: usize,
    pub cases: Vec<ClassificationCase>,
}

impl ClassificationReport {
    pub fn all_validated(&self) -> bool {
        self.cases.iter().all(|c| c.validated)
    }

    pub fn keys(&self) -> BTreeSet<(String, u8, usize)> {
        self.cases.iter().map(ClassificationCase::key).collect()
    }
}

/// Outcome of deleting a node set: final G0, its modules and all valid gradings.
#[derive(Clone, Debug)]
pub struct DeletionAnalysis {
    pub g0: SubalgebraSpan,
    pub blocks: Vec<ModuleBlock>,
    pub absorbed: bool,
    pub gradings: Vec<Grading>,
}

pub fn analyze_deletion(model: &AlgebraModel, diagram: &Diagram, deleted: &BTreeSet<usize>) -> Result<DeletionAnalysis> {
    let g0 = delete_to_subalgebra(model, diagram, deleted)?;
    let blocks = decompose_modules(model, &g0);
    let (g0_final, blocks_final) = absorb_invariant_modules(model, &g0, &blocks)?;
    let absorbed = g0_final.roots.len() != g0.roots.len();
    let gradings = search_gradings(model, &g0_final, &blocks_final);
    Ok(DeletionAnalysis { g0: g0_final, blocks: blocks_final, absorbed, gradings })
}

/// All k-subsets of `items` for k in 1..=max, in lexicographic order.
pub fn deletion_sets(items: &[usize], max: usize) -> Vec<BTreeSet<usize>> {
    fn rec(items: &[usize], start: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<BTreeSet<usize>>) {
        if cur.len() == k {
            out.push(cur.iter().copied().collect());
            return;
        }
        for i in start..items.len() {
            cur.push(items[i]);
            rec(items, i + 1, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    for k in 1..=max.min(items.len()) {
        rec(items, 0, k, &mut Vec::new(), &mut out);
    }
    out
}

fn witness(model: &AlgebraModel, grading: Grading, provenance: Provenance) -> Witness {
    let report = validate_grading(model, &grading);
    let caos = cao_set(model, &grading);
    Witness {
        provenance,
        g0_name: grading.g0.name.clone(),
        length: grading.length,
        n_pairs: grading.n_pairs(),
        odd_only: caos.odd_only(),
        validation_passed: report.passed(),
        failed_checks: report.failures().iter().map(|c| c.name.clone()).collect(),
        generation: generation_check(model, &caos),
        cartan_in_bracket: report.cartan_in_bracket,
        grading: Some(grading),
    }
}

/// Every valid grading over the selected systems and deletion sets, in job order.
pub fn enumerate_witnesses(model: &AlgebraModel, opts: &EnumerationOptions) -> Result<(usize, Vec<Witness>)> {
    let systems = if opts.include_nondistinguished {
        enumerate_simple_systems(model.family)?
    } else {
        vec![distinguished_system(model.family)]
    };
    let mut jobs: Vec<(usize, Diagram, BTreeSet<usize>)> = Vec::new();
    for (si, sys) in systems.iter().enumerate() {
        let kinds: &[bool] = if opts.include_extended { &[false, true] } else { &[false] };
        for &ext in kinds {
            let d = diagram_of(sys, ext);
            for del in deletion_sets(&d.deletable_labels(), opts.max_delete) {
                jobs.push((si, d.clone(), del));
            }
        }
    }
    let results: Vec<Result<Vec<Witness>>> = jobs
        .par_iter()
        .map(|(si, d, del)| {
            let a = analyze_deletion(model, d, del)?;
            Ok(a.gradings
                .into_iter()
                .enumerate()
                .map(|(gi, g)| {
                    let p = Provenance { system: *si, extended: d.extended, deleted: del.iter().copied().collect(), grading: gi };
                    witness(model, g, p)
                })
                .collect())
        })
        .collect();
    let mut out = Vec::new();
    for r in results {
        out.extend(r?);
    }
    Ok((systems.len(), out))
}

/// Bucket witnesses by (G0 name, length, N); cases come out sorted by that key.
pub fn bucket(model: &AlgebraModel, witnesses: &[Witness], digests: bool) -> Result<Vec<ClassificationCase>> {
    let mut buckets: BTreeMap<(String, u8, usize), Vec<&Witness>> = BTreeMap::new();
    for w in witnesses {
        buckets.entry((w.g0_name.key(), w.length, w.n_pairs)).or_default().push(w);
    }
    let cases: Vec<Result<ClassificationCase>> = buckets
        .into_par_iter()
        .map(|((_, length, n_pairs), ws)| {
            let first = ws[0];
            let relation_digest = match (&first.grading, digests) {
                (Some(g), true) => {
                    let caos = cao_set(model, g);
                    Some(generate_relations(model, &caos)?.digest(&caos))
                }
                _ => None,
            };
            Ok(ClassificationCase {
                family: model.family,
                g0_name: first.g0_name.clone(),
                length,
                n_pairs,
                odd_only: ws.iter().any(|w| w.odd_only),
                validated: ws.iter().all(|w| w.validation_passed && w.generation),
                provenance: ws.iter().map(|w| w.provenance.clone()).collect(),
                relation_digest,
            })
        })
        .collect();
    cases.into_iter().collect()
}

pub fn enumerate_all(model: &AlgebraModel, opts: &EnumerationOptions) -> Result<ClassificationReport> {
    let (systems, ws) = enumerate_witnesses(model, opts)?;
    let cases = bucket(model, &ws, opts.relation_digests)?;
    Ok(ClassificationReport {
        schema_version: SCHEMA_VERSION,
        family: model.family.label(),
        include_nondistinguished: opts.include_nondistinguished,
        include_extended: opts.include_extended,
        max_delete: opts.max_delete,
        systems,
        cases,
    })
}

/// Cases that admit a grading with odd operators only.
pub fn odd_only_filter(cases: &[ClassificationCase]) -> Vec<ClassificationCase> {
    cases.iter().filter(|c| c.odd_only).cloned().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootsys::{name_of_types, SimpleType};

    fn run(family: Family, opts: &EnumerationOptions) -> ClassificationReport {
        enumerate_all(&AlgebraModel::build(family).unwrap(), opts).unwrap()
    }

    #[test]
    fn b02_has_two_cases() {
        let r = run(Family::b0(2).unwrap(), &EnumerationOptions::default());
        let keys: Vec<_> = r.keys().into_iter().collect();
        let a = name_of_types(&[SimpleType::Sl(1, 0), SimpleType::B(0, 1)]).key();
        let b = name_of_types(&[SimpleType::Sl(2, 0)]).key();
        let mut want = vec![(a, 5, 3), (b, 5, 2)];
        want.sort();
        assert_eq!(keys, want);
        assert!(r.all_validated());
    }

    #[test]
    fn c3_values_of_n() {
        let r = run(Family::c(3).unwrap(), &EnumerationOptions::default());
        let ns: BTreeSet<usize> = r.cases.iter().map(|c| c.n_pairs).collect();
        assert_eq!(ns, BTreeSet::from([4, 5]));
    }

    #[test]
    fn d21_extra_case_needs_other_systems() {
        let family = Family::d(2, 1).unwrap();
        let model = AlgebraModel::build(family).unwrap();
        let opts = EnumerationOptions { include_nondistinguished: true, ..EnumerationOptions::default() };
        let (systems, ws) = enumerate_witnesses(&model, &opts).unwrap();
        assert!(systems > 1);
        // sl(1|0) + C(2), realized from a non-distinguished system
        let key = name_of_types(&[SimpleType::Sl(1, 0), SimpleType::D(1, 1)]).key();
        assert!(ws.iter().any(|w| w.provenance.system > 0 && w.g0_name.key() == key));
    }

    #[test]
    fn deletion_sets_are_lexicographic() {
        let s = deletion_sets(&[1, 2, 3], 2);
        let v: Vec<Vec<usize>> = s.iter().map(|x| x.iter().copied().collect()).collect();
        assert_eq!(v, vec![vec![1], vec![2], vec![3], vec![1, 2], vec![1, 3], vec![2, 3]]);
    }

    #[test]
    fn odd_only_filter_keeps_para_bose() {
        let r = run(Family::b0(3).unwrap(), &EnumerationOptions::default());
        let odd = odd_only_filter(&r.cases);
        assert_eq!(odd.len(), 1);
        assert_eq!(odd[0].n_pairs, 3);
    }
}
