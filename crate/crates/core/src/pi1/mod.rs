//! Simple-connectivity certificates for the complex `M(G)` whose simplices are
//! the sets of elements lying in a common proper coset.
//!
//! The standard presentation of `π_1(M(G))` has a generator per ordered edge,
//! the star at the identity as spanning tree, and one relation per 2-simplex.
//! Since `(u,v)(v,u) = 1`, everything here works with unordered edges.

use std::collections::VecDeque;
use std::fmt::Write as _;

use fixedbitset::FixedBitSet;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{Elem, FiniteGroup};
use crate::poset::SimplicialComplex;

/// An edge-path presentation of `π_1(M(G))` with a chosen spanning tree.
#[derive(Clone, Debug)]
pub struct EdgePresentation<'g> {
    group: &'g FiniteGroup,
    tree: Vec<(Elem, Elem)>,
    edges: FixedBitSet,
    edge_count: usize,
}

/// The presentation whose tree is the star at the identity; needs a non-cyclic group.
pub fn standard_presentation(g: &FiniteGroup) -> Result<EdgePresentation<'_>> {
    if g.is_cyclic() {
        return Err(Error::CyclicGroup);
    }
    let b = g.identity();
    let tree = g.elements().filter(|&x| x != b).map(|x| edge(b, x)).collect();
    Ok(EdgePresentation::with_tree(g, tree))
}

/// A presentation with a breadth-first spanning tree from the identity, for any group
/// whose `M(G)` is connected; the tree is a forest otherwise.
pub fn spanning_presentation(g: &FiniteGroup) -> EdgePresentation<'_> {
    let n = g.order();
    let mut seen = FixedBitSet::with_capacity(n);
    let mut tree = Vec::new();
    let mut probe = EdgePresentation { group: g, tree: Vec::new(), edges: FixedBitSet::new(), edge_count: 0 };
    probe.edges = probe.edge_set();
    for root in g.elements() {
        if seen.put(root as usize) {
            continue;
        }
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for v in g.elements() {
                if !seen.contains(v as usize) && probe.is_edge(u, v) {
                    seen.insert(v as usize);
                    tree.push(edge(u, v));
                    queue.push_back(v);
                }
            }
        }
    }
    EdgePresentation::with_tree(g, tree)
}

impl<'g> EdgePresentation<'g> {
    fn with_tree(group: &'g FiniteGroup, tree: Vec<(Elem, Elem)>) -> Self {
        let mut p = Self { group, tree, edges: FixedBitSet::new(), edge_count: 0 };
        p.edges = p.edge_set();
        p.edge_count = p.edges.count_ones(..);
        p
    }

    fn edge_set(&self) -> FixedBitSet {
        let n = self.vertex_count();
        let mut e = FixedBitSet::with_capacity(n * n);
        for u in 0..n as Elem {
            for v in u + 1..n as Elem {
                if self.is_edge(u, v) {
                    e.insert(u as usize * n + v as usize);
                }
            }
        }
        e
    }

    pub fn group(&self) -> &'g FiniteGroup {
        self.group
    }

    pub fn vertex_count(&self) -> usize {
        self.group.order()
    }

    /// The identity, root of the spanning tree.
    pub fn base(&self) -> Elem {
        self.group.identity()
    }

    /// `{u, v}` is an edge iff `⟨u⁻¹v⟩ ≠ G`; always true for distinct vertices of a non-cyclic group.
    pub fn is_edge(&self, u: Elem, v: Elem) -> bool {
        let d = self.group.ldiv(u, v);
        u != v && !self.group.generates_pair(d, d)
    }

    /// `{u, v, w}` is a 2-simplex iff `⟨u⁻¹v, u⁻¹w⟩ ≠ G`.
    pub fn is_triangle(&self, u: Elem, v: Elem, w: Elem) -> bool {
        u != v && v != w && u != w && !self.group.generates_pair(self.group.ldiv(u, v), self.group.ldiv(u, w))
    }

    /// The same test by closing `⟨u⁻¹v, u⁻¹w⟩` directly, independent of the lattice.
    pub fn is_triangle_direct(&self, u: Elem, v: Elem, w: Elem) -> bool {
        let g = self.group;
        u != v && v != w && u != w && g.generated_subgroup(&[g.ldiv(u, v), g.ldiv(u, w)]).order() < g.order()
    }

    /// Spanning tree edges as `(min, max)` pairs.
    pub fn tree_edges(&self) -> &[(Elem, Elem)] {
        &self.tree
    }

    /// Unordered edges of the 1-skeleton.
    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn edges(&self) -> impl Iterator<Item = (Elem, Elem)> + '_ {
        let n = self.vertex_count();
        self.edges.ones().map(move |i| ((i / n) as Elem, (i % n) as Elem))
    }

    /// Ordered-edge generators of the presentation.
    pub fn generator_count(&self) -> usize {
        2 * self.edge_count()
    }

    pub fn triangle_count(&self) -> usize {
        let n = self.vertex_count() as Elem;
        (0..n)
            .into_par_iter()
            .map(|u| {
                let mut c = 0;
                for v in u + 1..n {
                    for w in v + 1..n {
                        c += self.is_triangle(u, v, w) as usize;
                    }
                }
                c
            })
            .sum()
    }

    /// The 2-skeleton of `M(G)`, marked as truncated so homology is exact through dimension 1.
    pub fn two_skeleton(&self) -> Result<SimplicialComplex> {
        let n = self.vertex_count() as Elem;
        let vertices = (0..n).map(|v| vec![v]).collect();
        let edges = self.edges().map(|(u, v)| vec![u, v]).collect();
        let triangles: Vec<Vec<Elem>> = (0..n)
            .into_par_iter()
            .flat_map_iter(|u| {
                (u + 1..n).flat_map(move |v| {
                    (v + 1..n).filter(move |&w| self.is_triangle(u, v, w)).map(move |w| vec![u, v, w])
                })
            })
            .collect();
        SimplicialComplex::from_faces(n as usize, vec![vertices, edges, triangles], Some(2))
    }
}

fn edge(u: Elem, v: Elem) -> (Elem, Elem) {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

/// One derivation: `edge` is trivial because of the 2-simplex `edge ∪ {via}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Step {
    pub edge: (Elem, Elem),
    pub via: Elem,
}

impl Step {
    /// The two previously trivial edges used.
    pub fn using(&self) -> [(Elem, Elem); 2] {
        [edge(self.edge.0, self.via), edge(self.via, self.edge.1)]
    }
}

/// Proof that every generator of the standard presentation is trivial.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TrivialityCertificate {
    pub group: String,
    pub vertices: usize,
    pub base: Elem,
    pub steps: Vec<Step>,
}

impl TrivialityCertificate {
    /// One line per derivation: `edge u-v <- triangle(u,v,w) using u-w w-v`.
    pub fn to_log(&self) -> String {
        let mut s = format!("# group {} vertices {} base {}\n", self.group, self.vertices, self.base);
        for st in &self.steps {
            let (u, v) = st.edge;
            let [a, b] = st.using();
            let _ = writeln!(s, "edge {u}-{v} <- triangle({u},{v},{}) using {}-{} {}-{}", st.via, a.0, a.1, b.0, b.1);
        }
        s
    }

    pub fn from_log(text: &str) -> Result<Self> {
        let bad = |line: usize, what: &str| Error::Parse(format!("certificate line {line}: {what}"));
        let mut lines = text.lines().enumerate();
        let (_, header) = lines.next().ok_or_else(|| bad(1, "missing header"))?;
        let h: Vec<&str> = header.split_whitespace().collect();
        if h.len() != 7 || h[0] != "#" || h[1] != "group" || h[3] != "vertices" || h[5] != "base" {
            return Err(bad(1, "malformed header"));
        }
        let vertices = h[4].parse().map_err(|_| bad(1, "vertex count"))?;
        let base = h[6].parse().map_err(|_| bad(1, "base"))?;
        let pair = |s: &str, line: usize| -> Result<(Elem, Elem)> {
            let (a, b) = s.split_once('-').ok_or_else(|| bad(line, "expected u-v"))?;
            Ok((a.parse().map_err(|_| bad(line, "vertex"))?, b.parse().map_err(|_| bad(line, "vertex"))?))
        };
        let mut steps = Vec::new();
        for (i, line) in lines {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let t: Vec<&str> = line.split_whitespace().collect();
            if t.len() != 7 || t[0] != "edge" || t[2] != "<-" || t[4] != "using" {
                return Err(bad(i + 1, "malformed step"));
            }
            let (u, v) = pair(t[1], i + 1)?;
            let tri = t[3]
                .strip_prefix("triangle(")
                .and_then(|s| s.strip_suffix(')'))
                .ok_or_else(|| bad(i + 1, "triangle"))?;
            let ids: Vec<Elem> = tri
                .split(',')
                .map(|x| x.parse())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| bad(i + 1, "triangle"))?;
            if ids.len() != 3 || (ids[0], ids[1]) != (u, v) {
                return Err(bad(i + 1, "triangle does not match edge"));
            }
            let step = Step { edge: (u, v), via: ids[2] };
            if [pair(t[5], i + 1)?, pair(t[6], i + 1)?] != step.using() {
                return Err(bad(i + 1, "support edges do not match triangle"));
            }
            steps.push(step);
        }
        Ok(Self { group: h[2].to_string(), vertices, base, steps })
    }
}

/// The fixpoint of triangle propagation from the tree edges.
#[derive(Clone, Debug)]
pub struct Propagation {
    vertices: usize,
    trivial: FixedBitSet,
    edges: FixedBitSet,
    pub steps: Vec<Step>,
    pub certificate: Option<TrivialityCertificate>,
}

impl Propagation {
    pub fn is_trivial(&self, u: Elem, v: Elem) -> bool {
        let (a, b) = edge(u, v);
        u == v || self.trivial.contains(a as usize * self.vertices + b as usize)
    }

    pub fn trivial_count(&self) -> usize {
        self.trivial.count_ones(..)
    }

    /// Edges not proved trivial.
    pub fn residual(&self) -> Vec<(Elem, Elem)> {
        let n = self.vertices;
        self.edges.difference(&self.trivial).map(|i| ((i / n) as Elem, (i % n) as Elem)).collect()
    }
}

/// Vertices by `(element order, index)`, the default scan order.
fn default_order(g: &FiniteGroup) -> Vec<Elem> {
    let mut v: Vec<Elem> = g.elements().collect();
    v.sort_by_key(|&x| (g.element_order(x), x));
    v
}

pub fn propagate_triviality(p: &EdgePresentation<'_>) -> Propagation {
    propagate_triviality_ordered(p, &default_order(p.group))
}

/// Propagation scanning vertices in `order`; the final trivial set does not depend on it.
pub fn propagate_triviality_ordered(p: &EdgePresentation<'_>, order: &[Elem]) -> Propagation {
    let mut prop =
        propagate_with(p.vertex_count(), p.edges.clone(), p.tree_edges(), order, |u, v, w| p.is_triangle(u, v, w));
    if prop.trivial_count() == p.edge_count() {
        prop.certificate = Some(TrivialityCertificate {
            group: p.group.name().replace(char::is_whitespace, "_"),
            vertices: p.vertex_count(),
            base: p.base(),
            steps: prop.steps.clone(),
        });
    }
    prop
}

/// Propagation on a graph with edge set `edges` (indexed `u * n + v`, `u < v`)
/// and the given 2-simplices, seeded by `tree`.
pub(crate) fn propagate_with(
    n: usize,
    edges: FixedBitSet,
    tree: &[(Elem, Elem)],
    order: &[Elem],
    is_triangle: impl Fn(Elem, Elem, Elem) -> bool,
) -> Propagation {
    let mut trivial = FixedBitSet::with_capacity(n * n);
    let idx = |(a, b): (Elem, Elem)| a as usize * n + b as usize;
    let mut rank = vec![0usize; n];
    for (i, &x) in order.iter().enumerate() {
        rank[x as usize] = i;
    }
    let mut seeds = tree.to_vec();
    seeds.sort_by_key(|&(a, b)| (rank[a as usize].min(rank[b as usize]), rank[a as usize].max(rank[b as usize])));
    let mut queue = VecDeque::new();
    for e in seeds {
        trivial.insert(idx(e));
        queue.push_back(e);
    }
    let mut steps = Vec::new();
    while let Some((a, b)) = queue.pop_front() {
        for &w in order {
            if w == a || w == b || !is_triangle(a, b, w) {
                continue;
            }
            let (ea, eb) = (edge(a, w), edge(b, w));
            let (ta, tb) = (trivial.contains(idx(ea)), trivial.contains(idx(eb)));
            // the triangle {a, b, w} now has two trivial edges
            let target = match (ta, tb) {
                (true, false) => Some((eb, a)),
                (false, true) => Some((ea, b)),
                _ => None,
            };
            if let Some((e, via)) = target {
                trivial.insert(idx(e));
                queue.push_back(e);
                steps.push(Step { edge: e, via });
            }
        }
    }
    Propagation { vertices: n, trivial, edges, steps, certificate: None }
}

/// Re-derives every edge from the tree, checking each 2-simplex by direct closure.
pub fn replay(p: &EdgePresentation<'_>, cert: &TrivialityCertificate) -> Result<()> {
    let n = p.vertex_count();
    if cert.vertices != n || cert.base != p.base() {
        return Err(Error::InvalidCertificate("certificate is for a different presentation".into()));
    }
    let idx = |(a, b): (Elem, Elem)| a as usize * n + b as usize;
    let mut trivial = FixedBitSet::with_capacity(n * n);
    for &e in p.tree_edges() {
        trivial.insert(idx(e));
    }
    for (i, st) in cert.steps.iter().enumerate() {
        let (u, v) = st.edge;
        if u >= v || v as usize >= n || st.via as usize >= n {
            return Err(Error::InvalidCertificate(format!("step {i}: malformed edge {u}-{v}")));
        }
        if !p.is_triangle_direct(u, v, st.via) {
            return Err(Error::InvalidCertificate(format!("step {i}: ({u},{v},{}) is not a 2-simplex", st.via)));
        }
        if let Some(e) = st.using().into_iter().find(|&e| !trivial.contains(idx(e))) {
            return Err(Error::InvalidCertificate(format!("step {i}: edge {}-{} not yet trivial", e.0, e.1)));
        }
        trivial.insert(idx(st.edge));
    }
    let missing = p.edges.difference(&trivial).count();
    if missing > 0 {
        return Err(Error::InvalidCertificate(format!("{missing} edges never derived")));
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Condition2Report {
    pub pass: bool,
    /// Unordered generating pairs examined.
    pub pairs_checked: usize,
    /// `(x, y, z)` with `⟨z,x⟩`, `⟨z,y⟩`, `⟨z⁻¹x, z⁻¹y⟩` all proper.
    pub witnesses: Vec<(Elem, Elem, Elem)>,
    pub failures: Vec<(Elem, Elem)>,
}

/// For every generating pair `(x, y)`, searches for `z` with `⟨z,x⟩`,
/// `⟨z,y⟩`, `⟨z⁻¹x, z⁻¹y⟩ ≠ G`.
pub fn condition2_search(g: &FiniteGroup) -> Result<Condition2Report> {
    if g.is_cyclic() {
        return Err(Error::CyclicGroup);
    }
    let n = g.order() as Elem;
    type Row = (usize, Vec<(Elem, Elem, Elem)>, Vec<(Elem, Elem)>);
    let rows: Vec<Row> = (0..n)
        .into_par_iter()
        .map(|x| {
            let (mut checked, mut wit, mut fail) = (0, Vec::new(), Vec::new());
            for y in x + 1..n {
                if !g.generates_pair(x, y) {
                    continue;
                }
                checked += 1;
                let z = g.elements().find(|&z| {
                    !g.generates_pair(z, x) && !g.generates_pair(z, y) && !g.generates_pair(g.ldiv(z, x), g.ldiv(z, y))
                });
                match z {
                    Some(z) => wit.push((x, y, z)),
                    None => fail.push((x, y)),
                }
            }
            (checked, wit, fail)
        })
        .collect();
    let mut r = Condition2Report { pass: true, pairs_checked: 0, witnesses: Vec::new(), failures: Vec::new() };
    for (c, w, f) in rows {
        r.pairs_checked += c;
        r.witnesses.extend(w);
        r.failures.extend(f);
    }
    r.pass = r.failures.is_empty();
    Ok(r)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NLocalVerdict {
    pub n: u64,
    pub pass: bool,
    /// Edges with an endpoint of order `n`.
    pub edges_checked: usize,
    pub residual: Vec<(Elem, Elem)>,
}

/// Every generator `(g, h)` with `o(g) = n` is trivial after propagation.
///
/// Cyclic groups use [`spanning_presentation`].
pub fn n_local_check(g: &FiniteGroup, n: u64) -> Result<NLocalVerdict> {
    let p = if g.is_cyclic() { spanning_presentation(g) } else { standard_presentation(g)? };
    let of_order = g.elements_of_order(n);
    if of_order.is_empty() {
        return Err(Error::NoElementsOfOrder(n));
    }
    let prop = propagate_triviality(&p);
    let mut seen = FixedBitSet::with_capacity(g.order() * g.order());
    let mut residual = Vec::new();
    let mut edges_checked = 0;
    for &x in &of_order {
        for y in g.elements().filter(|&y| p.is_edge(x, y)) {
            let e = edge(x, y);
            if seen.put(e.0 as usize * g.order() + e.1 as usize) {
                continue;
            }
            edges_checked += 1;
            if !prop.is_trivial(x, y) {
                residual.push(e);
            }
        }
    }
    residual.sort_unstable();
    Ok(NLocalVerdict { n, pass: residual.is_empty(), edges_checked, residual })
}
