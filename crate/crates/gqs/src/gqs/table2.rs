//! Expected classification rows per family: (G0 name, grading length, N).

use std::collections::BTreeSet;

use crate::algebras::{Family, FamilyTag};
use crate::rootsys::{name_of_types, SimpleType};

/// (normalized G0 name key, length, N)
pub type CaseKey = (String, u8, usize);

fn key(parts: &[SimpleType], length: u8, n: usize) -> CaseKey {
    (name_of_types(parts).key(), length, n)
}

/// All rows of the classification summary for one algebra.
pub fn expected_rows(family: Family) -> BTreeSet<CaseKey> {
    use SimpleType::{Sl, B, D};
    let (m, n) = (family.m, family.n);
    let mut s = BTreeSet::new();
    match family.tag {
        FamilyTag::A => {
            let (mm, nn) = (m + 1, n + 1);
            for k in 0..=mm {
                for l in 0..=nn {
                    let (p, q) = (mm - k, nn - l);
                    if k + l > 0 && p + q > 0 {
                        s.insert(key(&[Sl(k, l), Sl(p, q)], 3, (k + l) * (p + q)));
                    }
                }
            }
            for (k, l, p, q, r, t) in a_triples(m, n) {
                let parts = [Sl(k, l), Sl(p, q), Sl(r, t)];
                let (x, y, z) = (k + l, p + q, r + t);
                for v in [x * (y + z), y * (x + z), z * (x + y)] {
                    s.insert(key(&parts, 5, v));
                }
            }
        }
        FamilyTag::B => {
            for k in 0..=m {
                for l in 0..=n {
                    if (k, l) == (0, 0) || (k, l) == (1, 0) {
                        continue;
                    }
                    let rest = 2 * (m - k) + 2 * (n - l) + 1;
                    s.insert(key(&[Sl(k, l), B(m - k, n - l)], 5, (k + l) * rest));
                }
            }
            s.insert(key(&[B(m - 1, n)], 3, 2 * m + 2 * n - 1));
        }
        FamilyTag::B0 => {
            for i in 1..=n {
                s.insert(key(&[Sl(i, 0), B(0, n - i)], 5, i * (2 * n - 2 * i + 1)));
            }
        }
        FamilyTag::D => {
            for k in 0..=m {
                for l in 0..=n {
                    if [(0, 0), (1, 0), (m - 1, n), (m, n)].contains(&(k, l)) {
                        continue;
                    }
                    s.insert(key(&[Sl(k, l), D(m - k, n - l)], 5, 2 * (k + l) * (m + n - k - l)));
                }
            }
            let tri = (m + n) * (m + n + 1) / 2 - m;
            s.insert(key(&[D(m - 1, n)], 3, 2 * (m + n - 1)));
            s.insert(key(&[Sl(m, n)], 3, tri));
            s.insert(key(&[Sl(m - 1, n)], 5, tri));
            s.insert(key(&[Sl(m - 1, n)], 5, 2 * (m + n - 1)));
        }
        FamilyTag::C => {
            for k in 0..=1 {
                for l in 1..n.saturating_sub(1) {
                    s.insert(key(&[Sl(k, l), D(1 - k, n - 1 - l)], 5, 2 * (k + l) * (n - k - l)));
                }
            }
            let tri = n * (n + 1) / 2 - 1;
            s.insert(key(&[D(0, n - 1)], 3, 2 * (n - 1)));
            s.insert(key(&[Sl(1, n - 1)], 3, tri));
            s.insert(key(&[Sl(n - 1, 0)], 5, tri));
            s.insert(key(&[Sl(n - 1, 0)], 5, 2 * (n - 1)));
        }
    }
    s
}

/// Splittings of (m+1 | n+1) into three nonzero sl(k|l) blocks.
fn a_triples(m: usize, n: usize) -> Vec<(usize, usize, usize, usize, usize, usize)> {
    let (mm, nn) = (m + 1, n + 1);
    let mut out = Vec::new();
    for k in 0..=mm {
        for p in 0..=mm - k {
            let r = mm - k - p;
            for l in 0..=nn {
                for q in 0..=nn - l {
                    let t = nn - l - q;
                    if k + l > 0 && p + q > 0 && r + t > 0 {
                        out.push((k, l, p, q, r, t));
                    }
                }
            }
        }
    }
    out
}

/// Rows that only non-distinguished simple systems realize: the A triples whose three
/// blocks all mix even and odd indices, and the D rows sl(m-1|l)+C(n-l+1) with 1 ≤ l ≤ n-1.
pub fn nondistinguished_rows(family: Family) -> BTreeSet<CaseKey> {
    use SimpleType::{Sl, D};
    let (m, n) = (family.m, family.n);
    let mut s = BTreeSet::new();
    match family.tag {
        FamilyTag::A => {
            for (k, l, p, q, r, t) in a_triples(m, n) {
                if [k, l, p, q, r, t].iter().all(|&x| x > 0) {
                    let parts = [Sl(k, l), Sl(p, q), Sl(r, t)];
                    let (x, y, z) = (k + l, p + q, r + t);
                    for v in [x * (y + z), y * (x + z), z * (x + y)] {
                        s.insert(key(&parts, 5, v));
                    }
                }
            }
        }
        FamilyTag::D => {
            for l in 1..n {
                s.insert(key(&[Sl(m - 1, l), D(1, n - l)], 5, 2 * (m - 1 + l) * (n - l + 1)));
            }
        }
        _ => {}
    }
    s
}

/// The odd-operator cases: consistent gradings listed per family.
pub fn odd_only_rows(family: Family) -> BTreeSet<CaseKey> {
    use SimpleType::{Sl, B, D};
    let (m, n) = (family.m, family.n);
    let mut s = BTreeSet::new();
    match family.tag {
        FamilyTag::A => {
            let v = (m + 1) * (n + 1);
            s.insert(key(&[Sl(m + 1, 0), Sl(0, n + 1)], 3, v));
            for i in 1..=m {
                s.insert(key(&[Sl(i, 0), Sl(m + 1 - i, 0), Sl(0, n + 1)], 5, v));
            }
            for k in 1..=n {
                s.insert(key(&[Sl(m + 1, 0), Sl(0, k), Sl(0, n + 1 - k)], 5, v));
            }
        }
        FamilyTag::B => {
            s.insert(key(&[Sl(0, n), B(m, 0)], 5, 2 * n * m + n));
        }
        FamilyTag::B0 => {
            s.insert(key(&[Sl(n, 0)], 5, n));
        }
        FamilyTag::D => {
            s.insert(key(&[Sl(0, n), D(m, 0)], 5, 2 * n * m));
            s.insert(key(&[Sl(m, 0), D(0, n)], 5, 2 * n * m));
        }
        FamilyTag::C => {
            s.insert(key(&[D(0, n - 1)], 3, 2 * (n - 1)));
            s.insert(key(&[Sl(n - 1, 0)], 5, 2 * (n - 1)));
        }
    }
    s
}
