//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Tolerances: every comparison is exact (Q(√2) arithmetic, set equality, byte equality).

use std::collections::{BTreeMap, BTreeSet};
use std::process::Command;
use std::time::Instant;

use gqs::algebras::{AlgebraModel, Family, FamilyTag};
use gqs::cli::{families_up_to, random_triples};
use gqs::gqs::{
    analyze_deletion, deletion_sets, enumerate_all, enumerate_witnesses, expected_rows,
    nondistinguished_rows, odd_only_filter, odd_only_rows, verify_closed_form, CaseKey, ClassificationReport,
    ClosedFormCase, EnumerationOptions,
};
use gqs::rootsys::{diagram_of, distinguished_system, enumerate_simple_systems, name_of_types, SimpleType};

const JACOBI_SAMPLES: usize = 500;
const JACOBI_SEED: u64 = 20_240_601;
const CLOSED_FORM_BUDGET_S: f64 = 60.0;
const CONSTRUCTION_BUDGET_S: f64 = 120.0;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

/// Classification reports at ranks ≤ 2, over distinguished + extended systems and over all systems.
struct Reports {
    distinguished: Vec<(Family, ClassificationReport)>,
    full: Vec<(Family, ClassificationReport)>,
}

fn reports() -> Reports {
    let mut distinguished = Vec::new();
    let mut full = Vec::new();
    for family in families_up_to(2) {
        let model = AlgebraModel::build(family).unwrap();
        let opts = EnumerationOptions { relation_digests: false, ..EnumerationOptions::default() };
        distinguished.push((family, enumerate_all(&model, &opts).unwrap()));
        let opts = EnumerationOptions { include_nondistinguished: true, ..opts };
        full.push((family, enumerate_all(&model, &opts).unwrap()));
    }
    Reports { distinguished, full }
}

fn closed_form_runs() -> Vec<(ClosedFormCase, usize, usize, Option<usize>)> {
    use ClosedFormCase::*;
    let mut runs = Vec::new();
    for n in 1..=3 {
        runs.push((PBose, 0, n, None));
        runs.push((Sl1n, 0, n, None));
    }
    for m in 0..=2 {
        for n in 0..=2 {
            runs.push((A1, m, n, None));
            runs.push((A2, m, n, None));
            if m + n > 0 {
                runs.push((ADouble, m, n, None));
            }
        }
    }
    for m in 0..=3usize {
        for n in 0..=3 - m {
            for i in 1..=m + n {
                runs.push((A21R, m, n, Some(i)));
            }
        }
    }
    for m in 0..=2 {
        for n in 1..=2 {
            runs.push((GB3, m, n, None));
            if m > 0 {
                runs.push((PBose, m, n, None));
                runs.push((PFermi, m, n, None));
            }
        }
    }
    for n in 2..=3 {
        runs.push((CS1, 0, n, None));
        runs.push((CS2, 0, n, None));
    }
    runs
}

fn criterion_closed_forms() -> Outcome {
    let start = Instant::now();
    let mut instances = 0;
    let mut failures = Vec::new();
    let mut incomplete = Vec::new();
    for (case, m, n, i) in closed_form_runs() {
        let r = verify_closed_form(case, m, n, i).unwrap();
        instances += r.instance_count();
        if !r.identities_hold() {
            failures.push(format!("{} on {}", r.case, r.algebra));
        }
        if r.missing_quadratic > 0 {
            incomplete.push(format!("{}@{}(+{})", r.case, r.algebra, r.missing_quadratic));
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let ok = failures.is_empty() && secs < CLOSED_FORM_BUDGET_S;
    let mut detail = format!("{instances} identity instances, {} failing, {secs:.1}s", failures.len());
    if !failures.is_empty() {
        detail.push_str(&format!("; failing: {}", failures.join(", ")));
    }
    if !incomplete.is_empty() {
        detail.push_str(&format!("; quadratic relations beyond the closed forms: {}", incomplete.join(" ")));
    }
    outcome(ok, detail)
}

fn criterion_table2(r: &Reports) -> Outcome {
    let mut bad = Vec::new();
    let mut rows = 0;
    for (family, rep) in &r.distinguished {
        let expected = expected_rows(*family);
        let reachable: BTreeSet<CaseKey> = expected.difference(&nondistinguished_rows(*family)).cloned().collect();
        rows += reachable.len();
        if rep.keys() != reachable {
            bad.push(format!("{family} (distinguished+extended)"));
        }
    }
    for (family, rep) in &r.full {
        if rep.keys() != expected_rows(*family) {
            bad.push(format!("{family} (all systems)"));
        }
    }
    outcome(
        bad.is_empty(),
        format!("{} algebras, {rows} rows from distinguished diagrams, exact set equality; mismatches: {:?}", r.full.len(), bad),
    )
}

fn criterion_nondistinguished() -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;
    for (m, n) in [(2usize, 1usize), (2, 2)] {
        let family = Family::d(m, n).unwrap();
        let model = AlgebraModel::build(family).unwrap();
        let opts = EnumerationOptions { include_nondistinguished: true, relation_digests: false, ..Default::default() };
        let (systems, ws) = enumerate_witnesses(&model, &opts).unwrap();
        for l in 0..n {
            let key = name_of_types(&[SimpleType::Sl(m - 1, l), SimpleType::D(1, n - l)]).key();
            let found: BTreeSet<(u8, usize)> = ws
                .iter()
                .filter(|w| w.provenance.system > 0 && w.g0_name.key() == key)
                .map(|w| (w.length, w.n_pairs))
                .collect();
            ok &= !found.is_empty();
            notes.push(format!("{family} l={l}: {key} {:?} over {systems} systems", found));
        }
        let dist = enumerate_all(&model, &EnumerationOptions { relation_digests: false, ..Default::default() }).unwrap();
        for row in nondistinguished_rows(family) {
            ok &= !dist.keys().contains(&row);
        }
    }
    for n in 1..=3 {
        let count = enumerate_simple_systems(Family::b0(n).unwrap()).unwrap().len();
        ok &= count == 1;
        notes.push(format!("B(0|{n}): {count} system"));
    }
    outcome(ok, notes.join("; "))
}

fn criterion_definition(r: &Reports) -> Outcome {
    let mut total = 0;
    let mut failing = Vec::new();
    for (family, rep) in r.distinguished.iter().chain(&r.full) {
        for c in &rep.cases {
            total += 1;
            if !c.validated {
                failing.push(format!("{family} {} l={} N={}", c.g0_name, c.length, c.n_pairs));
            }
        }
    }
    outcome(failing.is_empty(), format!("{total} cases checked, {} failing {:?}", failing.len(), failing))
}

fn criterion_negative_space() -> Outcome {
    let mut checked = 0;
    let mut offenders = Vec::new();
    let mut families = families_up_to(2);
    families.extend([Family::a(1, 2), Family::a(2, 1), Family::b(1, 2), Family::b(2, 1), Family::d(2, 1)].map(Result::unwrap));
    families.sort();
    families.dedup();
    for family in families {
        let model = AlgebraModel::build(family).unwrap();
        for extended in [false, true] {
            let d = diagram_of(&distinguished_system(family), extended);
            let labels = d.deletable_labels();
            for del in deletion_sets(&labels, labels.len()) {
                let k = del.len();
                let excluded = k < 3 || (extended && k == 3 && family.tag == FamilyTag::A);
                if excluded {
                    continue;
                }
                checked += 1;
                let a = analyze_deletion(&model, &d, &del).unwrap();
                if !a.gradings.is_empty() {
                    offenders.push(format!("{family} {} {:?}", if extended { "ext" } else { "plain" }, del));
                }
            }
        }
    }
    outcome(offenders.is_empty(), format!("{checked} deletions of >= 3 nodes, {} with a grading {:?}", offenders.len(), offenders))
}

fn construction_families() -> Vec<Family> {
    let mut out = Vec::new();
    for m in 0..=2 {
        for n in 0..=2 - m {
            out.push(Family::a(m, n).unwrap());
        }
    }
    for (m, n) in [(1, 1), (1, 2), (2, 1)] {
        out.push(Family::b(m, n).unwrap());
    }
    for n in 1..=3 {
        out.push(Family::b0(n).unwrap());
    }
    out.push(Family::d(2, 1).unwrap());
    for n in 2..=3 {
        out.push(Family::c(n).unwrap());
    }
    out
}

fn criterion_construction() -> Outcome {
    let start = Instant::now();
    let mut bad = Vec::new();
    let fams = construction_families();
    for family in &fams {
        let model = AlgebraModel::build(*family).unwrap();
        if model.dim() != family.expected_dim() {
            bad.push(format!("{family} dimension {}", model.dim()));
        }
        let jac = random_triples(model.dim(), JACOBI_SAMPLES, JACOBI_SEED)
            .into_iter()
            .filter(|&(x, y, z)| !model.jacobi_residual(x, y, z).is_empty())
            .count();
        if jac > 0 {
            bad.push(format!("{family} super-Jacobi {jac}"));
        }
        if !model.omega_anti_failures().is_empty() {
            bad.push(format!("{family} omega"));
        }
        if !model.grading_failures().is_empty() {
            bad.push(format!("{family} root additivity"));
        }
    }
    let secs = start.elapsed().as_secs_f64();
    outcome(
        bad.is_empty() && secs < CONSTRUCTION_BUDGET_S,
        format!("{} algebras of rank <= 3, {JACOBI_SAMPLES} triples each (seed {JACOBI_SEED}), {secs:.1}s; failures {:?}", fams.len(), bad),
    )
}

fn criterion_odd_only(r: &Reports) -> Outcome {
    let mut bad = BTreeMap::new();
    for (family, rep) in &r.distinguished {
        let got: BTreeSet<CaseKey> = odd_only_filter(&rep.cases).iter().map(|c| c.key()).collect();
        let want = odd_only_rows(*family);
        if got != want {
            bad.insert(family.label(), (got, want));
        }
    }
    outcome(bad.is_empty(), format!("{} algebras, mismatches {:?}", r.distinguished.len(), bad))
}

fn criterion_determinism() -> Outcome {
    let args = ["classify", "D", "--m", "2", "--n", "2", "--nondistinguished", "--extended"];
    let run = |jobs: &str| Command::new(env!("CARGO_BIN_EXE_gqs")).args(args).env("GQS_JOBS", jobs).output().unwrap();
    let (a, b, c) = (run("1"), run("1"), run("4"));
    let ok = a.status.success() && a.stdout == b.stdout && a.stdout == c.stdout && !a.stdout.is_empty();
    outcome(ok, format!("`gqs {}` three runs, {} bytes, byte-identical: {ok}", args.join(" "), a.stdout.len()))
}

fn main() {
    let start = Instant::now();
    let shared = reports();
    let results = [
        ("1 closed-form relations", criterion_closed_forms()),
        ("2 classification table", criterion_table2(&shared)),
        ("3 non-distinguished systems", criterion_nondistinguished()),
        ("4 grading and generation checks", criterion_definition(&shared)),
        ("5 negative space", criterion_negative_space()),
        ("6 algebra construction", criterion_construction()),
        ("7 odd-only filter", criterion_odd_only(&shared)),
        ("8 determinism", criterion_determinism()),
    ];
    let mut failed = 0;
    for (name, o) in &results {
        println!("[{}] criterion {name}: {}", if o.passed { "PASS" } else { "FAIL" }, o.detail);
        failed += usize::from(!o.passed);
    }
    println!("acceptance: {}/{} criteria passed in {:.1}s", results.len() - failed, results.len(), start.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
