//! Simple root systems, odd reflections, (extended) Dynkin diagrams and names of regular
//! subalgebras.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::OnceLock;

use num_rational::Ratio;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::algebras::{Family, FamilyTag, Root};
use crate::error::{GqsError, Result};

type Q = Ratio<i64>;

/// The standard form: (ε_i, ε_j) = δ_ij, (δ_i, δ_j) = −δ_ij, (ε_i, δ_j) = 0.
pub fn inner_product(a: &Root, b: &Root) -> i64 {
    let e: i64 = a.eps.iter().zip(&b.eps).map(|(x, y)| (*x as i64) * (*y as i64)).sum();
    let d: i64 = a.delta.iter().zip(&b.delta).map(|(x, y)| (*x as i64) * (*y as i64)).sum();
    e - d
}

pub fn is_isotropic_odd(r: &Root) -> bool {
    r.parity() == 1 && inner_product(r, r) == 0
}

/// Root systems by combinatorial description, matching the matrix realizations.
pub fn abstract_roots(family: Family) -> Vec<Root> {
    let (p, q) = (family.eps_len(), family.delta_len());
    match family.tag {
        FamilyTag::A => sl_roots(p, q),
        FamilyTag::B | FamilyTag::B0 => osp_roots(p, q, true),
        FamilyTag::C | FamilyTag::D => osp_roots(p, q, false),
    }
}

/// Roots of sl(p|q) on coordinates ε₁..ε_p, δ₁..δ_q.
pub fn sl_roots(p: usize, q: usize) -> Vec<Root> {
    let eta: Vec<(bool, usize)> = (1..=p).map(|i| (true, i)).chain((1..=q).map(|i| (false, i))).collect();
    let mut out = Vec::new();
    for &(ea, a) in &eta {
        for &(eb, b) in &eta {
            if (ea, a) == (eb, b) {
                continue;
            }
            let mut r = Root::zero(p, q);
            if ea {
                r.eps[a - 1] += 1;
            } else {
                r.delta[a - 1] += 1;
            }
            if eb {
                r.eps[b - 1] -= 1;
            } else {
                r.delta[b - 1] -= 1;
            }
            out.push(r);
        }
    }
    out
}

/// Roots of osp(2p+1|2q) (`odd_size`) or osp(2p|2q).
pub fn osp_roots(p: usize, q: usize, odd_size: bool) -> Vec<Root> {
    let mut out = BTreeSet::new();
    let signs = [(1, 1), (1, -1), (-1, 1), (-1, -1)];
    for i in 1..=p {
        for j in i + 1..=p {
            for (s, t) in signs {
                out.insert(Root::from_terms(p, q, &[(i, s), (j, t)], &[]));
            }
        }
        if odd_size {
            out.insert(Root::from_terms(p, q, &[(i, 1)], &[]));
            out.insert(Root::from_terms(p, q, &[(i, -1)], &[]));
        }
        for k in 1..=q {
            for (s, t) in signs {
                out.insert(Root::from_terms(p, q, &[(i, s)], &[(k, t)]));
            }
        }
    }
    for k in 1..=q {
        for l in k..=q {
            for (s, t) in signs {
                if k == l && s != t {
                    continue;
                }
                out.insert(Root::from_terms(p, q, &[], &[(k, s), (l, t)]));
            }
        }
        if odd_size {
            out.insert(Root::from_terms(p, q, &[], &[(k, 1)]));
            out.insert(Root::from_terms(p, q, &[], &[(k, -1)]));
        }
    }
    out.into_iter().collect()
}

/// Rational coefficients of `target` over `gens` (free directions set to zero), if solvable.
pub fn solve_coefficients(gens: &[Root], target: &Root) -> Option<Vec<Q>> {
    let rows: Vec<Vec<i32>> = {
        let dim = target.eps.len() + target.delta.len();
        (0..dim)
            .map(|d| gens.iter().map(|g| g.coords().nth(d).unwrap_or(0)).collect())
            .collect()
    };
    let k = gens.len();
    let mut m: Vec<Vec<Q>> = rows
        .iter()
        .zip(target.coords())
        .map(|(row, t)| row.iter().map(|&x| Q::from_integer(x as i64)).chain([Q::from_integer(t as i64)]).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..k {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c];
                for j in 0..=k {
                    let v = m[r][j];
                    m[i][j] -= f * v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if m[r..].iter().any(|row| !row[k].is_zero()) {
        return None;
    }
    let mut sol = vec![Q::zero(); k];
    for (i, &c) in pivots.iter().enumerate() {
        sol[c] = m[i][k];
    }
    Some(sol)
}

/// Integer coefficients of `target` over linearly independent `gens`, if it lies in their Z-span.
pub fn integer_coefficients(gens: &[Root], target: &Root) -> Option<Vec<i64>> {
    let sol = solve_coefficients(gens, target)?;
    sol.iter().map(|q| q.is_integer().then(|| q.to_integer())).collect()
}

/// Rank of a set of roots over Q.
pub fn root_rank(roots: &[Root]) -> usize {
    let Some(first) = roots.first() else { return 0 };
    let dim = first.eps.len() + first.delta.len();
    let mut basis: Vec<Vec<Q>> = Vec::new();
    let mut pivots: Vec<usize> = Vec::new();
    for r in roots {
        let mut v: Vec<Q> = r.coords().map(|x| Q::from_integer(x as i64)).collect();
        for (b, &p) in basis.iter().zip(&pivots) {
            if !v[p].is_zero() {
                let f = v[p];
                for j in 0..dim {
                    v[j] -= f * b[j];
                }
            }
        }
        if let Some(p) = (0..dim).find(|&j| !v[j].is_zero()) {
            let inv = v[p].recip();
            for x in v.iter_mut() {
                *x *= inv;
            }
            basis.push(v);
            pivots.push(p);
        }
    }
    basis.len()
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SimpleSystem {
    pub family: Family,
    pub simple_roots: Vec<Root>,
}

impl SimpleSystem {
    /// Coefficients of a root over the simple roots.
    pub fn coefficients(&self, root: &Root) -> Option<Vec<i64>> {
        integer_coefficients(&self.simple_roots, root)
    }

    pub fn is_positive(&self, root: &Root) -> bool {
        self.coefficients(root).is_some_and(|c| c.iter().all(|&x| x >= 0) && c.iter().any(|&x| x > 0))
    }

    /// Every root must have integer coefficients all of one sign.
    pub fn validate(&self, roots: &[Root]) -> Result<()> {
        if self.simple_roots.len() != self.family.rank() {
            return Err(GqsError::Internal(format!("{}: wrong number of simple roots", self.family)));
        }
        for r in roots {
            let ok = self
                .coefficients(r)
                .is_some_and(|c| c.iter().all(|&x| x >= 0) || c.iter().all(|&x| x <= 0));
            if !ok {
                return Err(GqsError::Internal(format!("{}: root {r} not expressible over the simple system", self.family)));
            }
        }
        Ok(())
    }

    /// The positive root of maximal height; it dominates every other positive root.
    pub fn highest_root(&self) -> Root {
        let roots = abstract_roots(self.family);
        let mut best: Option<(i64, Root, Vec<i64>)> = None;
        for r in roots {
            let Some(c) = self.coefficients(&r) else { continue };
            if c.iter().all(|&x| x >= 0) {
                let h: i64 = c.iter().sum();
                if best.as_ref().is_none_or(|(bh, br, _)| h > *bh || (h == *bh && r > *br)) {
                    best = Some((h, r, c));
                }
            }
        }
        best.expect("nonempty root system").1
    }

    pub fn lowest_root(&self) -> Root {
        self.highest_root().neg()
    }

    pub fn key(&self) -> BTreeSet<Root> {
        self.simple_roots.iter().cloned().collect()
    }
}

impl fmt::Display for SimpleSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.simple_roots.iter().map(|r| r.to_string()).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// The distinguished simple roots in their conventional order.
pub fn distinguished_system(family: Family) -> SimpleSystem {
    let (p, q) = (family.eps_len(), family.delta_len());
    let e = |i: usize, c: i32| (i, c);
    let root = |eps: &[(usize, i32)], delta: &[(usize, i32)]| Root::from_terms(p, q, eps, delta);
    let mut s = Vec::new();
    match family.tag {
        FamilyTag::A => {
            for i in 1..p {
                s.push(root(&[e(i, 1), e(i + 1, -1)], &[]));
            }
            s.push(root(&[e(p, 1)], &[e(1, -1)]));
            for i in 1..q {
                s.push(root(&[], &[e(i, 1), e(i + 1, -1)]));
            }
        }
        FamilyTag::B0 => {
            for i in 1..q {
                s.push(root(&[], &[e(i, 1), e(i + 1, -1)]));
            }
            s.push(root(&[], &[e(q, 1)]));
        }
        FamilyTag::B | FamilyTag::D => {
            for i in 1..q {
                s.push(root(&[], &[e(i, 1), e(i + 1, -1)]));
            }
            s.push(root(&[e(1, -1)], &[e(q, 1)]));
            for i in 1..p {
                s.push(root(&[e(i, 1), e(i + 1, -1)], &[]));
            }
            if family.tag == FamilyTag::B {
                s.push(root(&[e(p, 1)], &[]));
            } else {
                s.push(root(&[e(p - 1, 1), e(p, 1)], &[]));
            }
        }
        FamilyTag::C => {
            s.push(root(&[e(1, 1)], &[e(1, -1)]));
            for i in 1..q {
                s.push(root(&[], &[e(i, 1), e(i + 1, -1)]));
            }
            s.push(root(&[], &[e(q, 2)]));
        }
    }
    SimpleSystem { family, simple_roots: s }
}

/// Odd reflection at the isotropic odd simple root with 0-based position `index`.
pub fn odd_reflect(system: &SimpleSystem, index: usize) -> Result<SimpleSystem> {
    let alpha = system.simple_roots.get(index).ok_or(GqsError::NotIsotropicOdd(index))?;
    if !is_isotropic_odd(alpha) {
        return Err(GqsError::NotIsotropicOdd(index));
    }
    let simple_roots = system
        .simple_roots
        .iter()
        .enumerate()
        .map(|(j, beta)| {
            if j == index {
                alpha.neg()
            } else if inner_product(alpha, beta) != 0 {
                beta.add(alpha)
            } else {
                beta.clone()
            }
        })
        .collect();
    Ok(SimpleSystem { family: system.family, simple_roots })
}

/// All simple systems reachable from the distinguished one by odd reflections, in BFS order
/// (index 0 is the distinguished system), deduplicated as sets of simple roots.
pub fn enumerate_simple_systems(family: Family) -> Result<Vec<SimpleSystem>> {
    let roots = abstract_roots(family);
    let start = distinguished_system(family);
    start.validate(&roots)?;
    let mut seen: HashSet<BTreeSet<Root>> = HashSet::from([start.key()]);
    let mut out = vec![start.clone()];
    let mut queue = VecDeque::from([start]);
    while let Some(sys) = queue.pop_front() {
        for i in 0..sys.simple_roots.len() {
            if !is_isotropic_odd(&sys.simple_roots[i]) {
                continue;
            }
            let next = odd_reflect(&sys, i)?;
            if seen.insert(next.key()) {
                next.validate(&roots)?;
                out.push(next.clone());
                queue.push_back(next);
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NodeKind {
    White,
    Gray,
    Black,
}

impl NodeKind {
    pub fn of(root: &Root) -> NodeKind {
        match (root.parity(), inner_product(root, root) == 0) {
            (0, _) => NodeKind::White,
            (_, true) => NodeKind::Gray,
            (_, false) => NodeKind::Black,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            NodeKind::White => 'O',
            NodeKind::Gray => 'X',
            NodeKind::Black => '●',
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagramNode {
    /// 1..r for simple roots; 0 for the extension node.
    pub label: usize,
    pub root: Root,
    pub kind: NodeKind,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagramEdge {
    pub a: usize,
    pub b: usize,
    pub multiplicity: u32,
    pub product: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagram {
    pub family: Family,
    pub nodes: Vec<DiagramNode>,
    pub edges: Vec<DiagramEdge>,
    pub extended: bool,
    pub lowest_root: Option<Root>,
}

fn edge_multiplicity(a: &Root, b: &Root) -> u32 {
    let ab = inner_product(a, b);
    if ab == 0 {
        return 0;
    }
    let mut best = 0;
    for r in [a, b] {
        let n = inner_product(r, r);
        if n != 0 {
            best = best.max((2 * ab / n).unsigned_abs() as u32);
        }
    }
    if best == 0 {
        ab.unsigned_abs() as u32
    } else {
        best
    }
}

pub fn diagram_of(system: &SimpleSystem, extended: bool) -> Diagram {
    let mut nodes = Vec::new();
    let lowest_root = extended.then(|| system.lowest_root());
    if let Some(low) = &lowest_root {
        nodes.push(DiagramNode { label: 0, root: low.clone(), kind: NodeKind::of(low) });
    }
    for (i, r) in system.simple_roots.iter().enumerate() {
        nodes.push(DiagramNode { label: i + 1, root: r.clone(), kind: NodeKind::of(r) });
    }
    let mut edges = Vec::new();
    for i in 0..nodes.len() {
        for j in i + 1..nodes.len() {
            let mult = edge_multiplicity(&nodes[i].root, &nodes[j].root);
            if mult > 0 {
                edges.push(DiagramEdge {
                    a: nodes[i].label,
                    b: nodes[j].label,
                    multiplicity: mult,
                    product: inner_product(&nodes[i].root, &nodes[j].root),
                });
            }
        }
    }
    Diagram { family: system.family, nodes, edges, extended, lowest_root }
}

impl Diagram {
    pub fn node(&self, label: usize) -> Option<&DiagramNode> {
        self.nodes.iter().find(|n| n.label == label)
    }

    pub fn labels(&self) -> Vec<usize> {
        self.nodes.iter().map(|n| n.label).collect()
    }

    /// Deletable labels: simple-root nodes only (removing the extension node just gives back
    /// the plain diagram).
    pub fn deletable_labels(&self) -> Vec<usize> {
        self.nodes.iter().map(|n| n.label).filter(|&l| l != 0).collect()
    }

    /// Lexicographically minimal encoding of (kind, norm, pairwise products) over all node orders.
    pub fn canonical_form(&self) -> Vec<i64> {
        let k = self.nodes.len();
        let gram: Vec<Vec<i64>> = self
            .nodes
            .iter()
            .map(|a| self.nodes.iter().map(|b| inner_product(&a.root, &b.root)).collect())
            .collect();
        let kind: Vec<i64> = self.nodes.iter().map(|n| n.kind as i64).collect();
        let encode = |perm: &[usize]| -> Vec<i64> {
            let mut out = Vec::with_capacity(k * (k + 3) / 2);
            for &i in perm {
                out.push(kind[i]);
                out.push(gram[i][i]);
            }
            for a in 0..k {
                for b in a + 1..k {
                    out.push(gram[perm[a]][perm[b]]);
                }
            }
            out
        };
        let mut perm: Vec<usize> = (0..k).collect();
        let mut best = encode(&perm);
        // Heap's algorithm over all orderings; diagrams here have at most ~9 nodes.
        let mut c = vec![0usize; k];
        let mut i = 1;
        while i < k {
            if c[i] < i {
                if i % 2 == 0 {
                    perm.swap(0, i);
                } else {
                    perm.swap(c[i], i);
                }
                let e = encode(&perm);
                if e < best {
                    best = e;
                }
                c[i] += 1;
                i = 1;
            } else {
                c[i] = 0;
                i += 1;
            }
        }
        best
    }

    /// One-line ASCII rendering along the node order, followed by any non-consecutive edges.
    pub fn render_ascii(&self, deleted: &BTreeSet<usize>) -> String {
        let mult = |a: usize, b: usize| {
            self.edges
                .iter()
                .find(|e| (e.a == a && e.b == b) || (e.a == b && e.b == a))
                .map_or(0, |e| e.multiplicity)
        };
        let mut line = String::new();
        for (i, node) in self.nodes.iter().enumerate() {
            if i > 0 {
                let prev = self.nodes[i - 1].label;
                line.push_str(match mult(prev, node.label) {
                    0 => " ",
                    1 => "-",
                    2 => "=",
                    _ => "≡",
                });
            }
            if deleted.contains(&node.label) {
                line.push('/');
            } else {
                line.push(node.kind.symbol());
            }
        }
        let consecutive: HashSet<(usize, usize)> =
            self.nodes.windows(2).map(|w| (w[0].label.min(w[1].label), w[0].label.max(w[1].label))).collect();
        let extra: Vec<String> = self
            .edges
            .iter()
            .filter(|e| !consecutive.contains(&(e.a.min(e.b), e.a.max(e.b))))
            .map(|e| format!("{}~{}(x{})", e.a, e.b, e.multiplicity))
            .collect();
        if !extra.is_empty() {
            line.push_str("  also ");
            line.push_str(&extra.join(" "));
        }
        let labels: Vec<String> = self.nodes.iter().map(|n| format!("{}:{}", n.label, n.root)).collect();
        format!("{line}   [{}]", labels.join(", "))
    }
}

/// Normalized name of a regular subalgebra: sorted simple summands plus the Cartan excess.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SubalgebraName {
    pub summands: Vec<String>,
    pub cartan_excess: usize,
}

impl SubalgebraName {
    /// Summands joined by "+", or "0" when only Cartan elements remain.
    pub fn key(&self) -> String {
        if self.summands.is_empty() {
            "0".to_string()
        } else {
            self.summands.join("+")
        }
    }
}

impl fmt::Display for SubalgebraName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "H+{}", self.key())
    }
}

/// Connected pieces of a root subsystem: α ~ β when α+β ∈ R ∪ {0} or α−β ∈ R.
pub fn root_components(roots: &[Root]) -> Vec<Vec<Root>> {
    let set: HashSet<&Root> = roots.iter().collect();
    let mut parent: Vec<usize> = (0..roots.len()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for i in 0..roots.len() {
        for j in i + 1..roots.len() {
            let s = roots[i].add(&roots[j]);
            if s.is_zero() || set.contains(&s) || set.contains(&roots[i].sub(&roots[j])) {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a] = b;
            }
        }
    }
    let mut groups: HashMap<usize, Vec<Root>> = HashMap::new();
    for (i, r) in roots.iter().enumerate() {
        let g = find(&mut parent, i);
        groups.entry(g).or_default().push(r.clone());
    }
    let mut out: Vec<Vec<Root>> = groups.into_values().collect();
    for g in out.iter_mut() {
        g.sort();
    }
    out.sort();
    out
}

fn even_simple_name(comp: &[Root]) -> Result<String> {
    let r = root_rank(comp);
    let c = comp.len();
    if c == r * (r + 1) {
        return Ok(format!("sl({})", r + 1));
    }
    if r >= 4 && c == 2 * r * (r - 1) {
        return Ok(format!("D_{r}"));
    }
    if c == 2 * r * r {
        if r == 2 {
            return Ok("B_2".into());
        }
        let norms: Vec<i64> = comp.iter().map(|x| inner_product(x, x).abs()).collect();
        let max = *norms.iter().max().expect("nonempty");
        let long = norms.iter().filter(|&&v| v == max).count();
        return Ok(if long == 2 * r { format!("C_{r}") } else { format!("B_{r}") });
    }
    Err(GqsError::Internal(format!("unrecognized even root system: rank {r}, {c} roots")))
}

type Fingerprint = (usize, usize, usize, String);

fn fingerprint(comp: &[Root]) -> Result<Fingerprint> {
    let odd: Vec<&Root> = comp.iter().filter(|r| r.parity() == 1).collect();
    let even: Vec<Root> = comp.iter().filter(|r| r.parity() == 0).cloned().collect();
    let non_iso = odd.iter().filter(|r| inner_product(r, r) != 0).count();
    Ok((root_rank(comp), odd.len(), non_iso, name_summands(&even)?.join("+")))
}

/// Abstract simple types used to build the recognition table and expected names.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SimpleType {
    /// sl(k|l)
    Sl(usize, usize),
    /// B(k|l) = osp(2k+1|2l)
    B(usize, usize),
    /// D(k|l) = osp(2k|2l); D(1|l) = C(l+1)
    D(usize, usize),
}

impl SimpleType {
    pub fn roots(self) -> Vec<Root> {
        match self {
            SimpleType::Sl(k, l) => sl_roots(k, l),
            SimpleType::B(k, l) => osp_roots(k, l, true),
            SimpleType::D(k, l) => osp_roots(k, l, false),
        }
    }

    pub fn eps_delta(self) -> (usize, usize) {
        match self {
            SimpleType::Sl(k, l) | SimpleType::B(k, l) | SimpleType::D(k, l) => (k, l),
        }
    }
}

const TABLE_MAX_RANK: usize = 9;

fn super_table() -> &'static HashMap<Fingerprint, String> {
    static TABLE: OnceLock<HashMap<Fingerprint, String>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut cands: Vec<(String, SimpleType)> = Vec::new();
        for total in 2..=TABLE_MAX_RANK + 1 {
            for k in (1..=total).rev() {
                let l = total - k;
                if l >= 1 && k >= l {
                    cands.push((format!("sl({k}|{l})"), SimpleType::Sl(k, l)));
                }
            }
        }
        for a in 0..TABLE_MAX_RANK {
            for b in 1..=TABLE_MAX_RANK - a {
                cands.push((format!("B({a}|{b})"), SimpleType::B(a, b)));
                if a >= 2 {
                    cands.push((format!("D({a}|{b})"), SimpleType::D(a, b)));
                }
                if a == 1 {
                    cands.push((format!("C({})", b + 1), SimpleType::D(a, b)));
                }
            }
        }
        let mut table = HashMap::new();
        for (name, t) in cands {
            let roots = t.roots();
            let fp = fingerprint(&roots).expect("table entries are recognizable");
            // the first name wins on a collision, e.g. C(2) ≅ sl(2|1)
            table.entry(fp).or_insert(name);
        }
        table
    })
}

/// Names of the simple summands of a root subsystem, sorted; abelian parts vanish.
pub fn name_summands(roots: &[Root]) -> Result<Vec<String>> {
    let mut parts = Vec::new();
    for comp in root_components(roots) {
        if comp.iter().all(|r| r.parity() == 0) {
            parts.push(even_simple_name(&comp)?);
        } else {
            let fp = fingerprint(&comp)?;
            let name = super_table()
                .get(&fp)
                .cloned()
                .ok_or_else(|| GqsError::Internal(format!("unrecognized component fingerprint {fp:?}")))?;
            parts.push(name);
        }
    }
    parts.sort();
    Ok(parts)
}

pub fn name_root_set(roots: &[Root], cartan_excess: usize) -> Result<SubalgebraName> {
    Ok(SubalgebraName { summands: name_summands(roots)?, cartan_excess })
}

/// Normalized name of a direct sum of abstract types (trivial summands such as sl(1) vanish).
pub fn name_of_types(parts: &[SimpleType]) -> SubalgebraName {
    let total_eps: usize = parts.iter().map(|t| t.eps_delta().0).sum();
    let total_delta: usize = parts.iter().map(|t| t.eps_delta().1).sum();
    let mut all = Vec::new();
    let (mut oe, mut od) = (0, 0);
    for t in parts {
        let (k, l) = t.eps_delta();
        for r in t.roots() {
            let mut full = Root::zero(total_eps, total_delta);
            full.eps[oe..oe + k].copy_from_slice(&r.eps);
            full.delta[od..od + l].copy_from_slice(&r.delta);
            all.push(full);
        }
        oe += k;
        od += l;
    }
    name_root_set(&all, 0).expect("abstract types are recognizable")
}

/// Roots of the family lying in the Z-span of the retained (independent) diagram nodes.
pub fn retained_root_span(diagram: &Diagram, deleted: &BTreeSet<usize>) -> Vec<Root> {
    let gens: Vec<Root> =
        diagram.nodes.iter().filter(|n| !deleted.contains(&n.label)).map(|n| n.root.clone()).collect();
    if gens.is_empty() {
        return Vec::new();
    }
    abstract_roots(diagram.family).into_iter().filter(|r| integer_coefficients(&gens, r).is_some()).collect()
}

/// Name of the regular subalgebra left after deleting `deleted` (labels) from the diagram.
pub fn classify_components(diagram: &Diagram, deleted: &BTreeSet<usize>) -> Result<SubalgebraName> {
    if !diagram.extended && deleted.is_empty() {
        return Err(GqsError::Internal("no node deleted from a plain diagram".into()));
    }
    let roots = retained_root_span(diagram, deleted);
    let excess = if diagram.extended { deleted.len().saturating_sub(1) } else { deleted.len() };
    name_root_set(&roots, excess)
}

impl fmt::Display for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render_ascii(&BTreeSet::new()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(f: Family, eps: &[(usize, i32)], delta: &[(usize, i32)]) -> Root {
        Root::from_terms(f.eps_len(), f.delta_len(), eps, delta)
    }

    #[test]
    fn inner_product_examples() {
        let f = Family::a(2, 1).unwrap();
        let a = r(f, &[(1, 1)], &[(1, -1)]);
        assert_eq!(inner_product(&a, &a), 0);
        let d = r(f, &[], &[(1, 1)]);
        assert_eq!(inner_product(&d, &d), -1);
        assert_eq!(inner_product(&r(f, &[(1, 1), (2, -1)], &[]), &r(f, &[(2, 1), (3, -1)], &[])), -1);
    }

    #[test]
    fn distinguished_examples() {
        let f = Family::a(1, 1).unwrap();
        let s = distinguished_system(f);
        assert_eq!(s.to_string(), "{ε1-ε2, ε2-δ1, δ1-δ2}");
        assert_eq!(distinguished_system(Family::b0(2).unwrap()).to_string(), "{δ1-δ2, δ2}");
        assert_eq!(distinguished_system(Family::c(2).unwrap()).to_string(), "{ε1-δ1, 2δ1}");
    }

    #[test]
    fn reflect_rejects_even_nodes() {
        let s = distinguished_system(Family::a(1, 0).unwrap());
        assert!(matches!(odd_reflect(&s, 0), Err(GqsError::NotIsotropicOdd(0))));
        let t = odd_reflect(&s, 1).unwrap();
        assert_eq!(t.to_string(), "{ε1-δ1, -ε2+δ1}");
        assert_eq!(diagram_of(&t, false).nodes[0].kind, NodeKind::Gray);
    }

    #[test]
    fn system_counts() {
        assert_eq!(enumerate_simple_systems(Family::a(1, 0).unwrap()).unwrap().len(), 3);
        assert_eq!(enumerate_simple_systems(Family::a(1, 1).unwrap()).unwrap().len(), 6);
        for n in 1..=3 {
            assert_eq!(enumerate_simple_systems(Family::b0(n).unwrap()).unwrap().len(), 1);
        }
    }

    #[test]
    fn names_of_common_isomorphisms() {
        use SimpleType::*;
        assert_eq!(name_of_types(&[D(1, 1)]).key(), "sl(2|1)");
        assert_eq!(name_of_types(&[D(2, 0)]).key(), "sl(2)+sl(2)");
        assert_eq!(name_of_types(&[D(0, 2)]).key(), "B_2");
        assert_eq!(name_of_types(&[D(3, 0)]).key(), "sl(4)");
        assert_eq!(name_of_types(&[Sl(1, 0), B(0, 1)]).key(), "B(0|1)");
        assert_eq!(name_of_types(&[Sl(0, 3)]).key(), "sl(3)");
        assert_eq!(name_of_types(&[Sl(1, 2)]).key(), "sl(2|1)");
        assert_eq!(name_of_types(&[B(2, 0)]).key(), "B_2");
        assert_eq!(name_of_types(&[B(3, 0)]).key(), "B_3");
        assert_eq!(name_of_types(&[D(0, 3)]).key(), "C_3");
        assert_eq!(name_of_types(&[D(1, 0)]).key(), "0");
    }

    #[test]
    fn abstract_roots_sizes() {
        let f = Family::b(2, 1).unwrap();
        assert_eq!(abstract_roots(f).len() + f.rank(), f.expected_dim());
        let f = Family::c(3).unwrap();
        assert_eq!(abstract_roots(f).len() + f.rank(), f.expected_dim());
    }

    #[test]
    fn highest_roots() {
        let a = distinguished_system(Family::a(1, 1).unwrap());
        assert_eq!(a.highest_root().to_string(), "ε1-δ2");
        let b = distinguished_system(Family::b(1, 1).unwrap());
        assert_eq!(b.highest_root().to_string(), "2δ1");
        let c = distinguished_system(Family::c(3).unwrap());
        assert_eq!(c.highest_root().to_string(), "ε1+δ1");
    }
}
