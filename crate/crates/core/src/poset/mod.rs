//! Finite posets, order complexes, atomized structure and homotopy-preserving reductions.
//!
//! Elements of a [`FinitePoset`] are always stored in a linear extension of the
//! order (`x < y` implies `index(x) < index(y)`), so chains are increasing index
//! sequences and order-complex faces come out already sorted.

mod atomized;
mod complex;
mod reduce;

use std::fmt::Write as _;

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::error::{Error, Result};

pub use atomized::{atomize, minimal_cover, minimal_cover_with, no_k_atoms_generate, AtomizedView, CoverPolicy, Join};
pub use complex::{
    chain_counts, chain_euler, order_complex, order_complex_budgeted, order_complex_truncated, SimplicialComplex,
};
pub use reduce::quillen_reduce;

/// Where a poset came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Generic,
    CosetPoset,
    SubgroupPoset,
    Relative,
    Invariant,
    Punctured,
    Reduced,
    NonSaturating,
}

#[derive(Clone, Debug)]
pub struct FinitePoset {
    labels: Vec<String>,
    /// `up[i]` = `{ j : i < j }`
    up: Vec<FixedBitSet>,
    provenance: Provenance,
    /// For group posets: the lattice id of the subgroup each element is (a coset of).
    subgroup_ids: Option<Vec<usize>>,
}

impl FinitePoset {
    /// Builds a poset from strict upper sets that are already transitive and
    /// compatible with index order.
    pub(crate) fn from_upsets(
        labels: Vec<String>,
        up: Vec<FixedBitSet>,
        provenance: Provenance,
        subgroup_ids: Option<Vec<usize>>,
    ) -> Self {
        debug_assert!(up.iter().enumerate().all(|(i, u)| u.ones().all(|j| j > i)));
        Self { labels, up, provenance, subgroup_ids }
    }

    /// Builds a poset from a list of relations `a < b` (not necessarily covers),
    /// taking the transitive closure and relabeling into a linear extension.
    pub fn from_relations(labels: Vec<String>, relations: &[(usize, usize)], provenance: Provenance) -> Result<Self> {
        let n = labels.len();
        let mut succ = vec![Vec::new(); n];
        let mut indeg = vec![0usize; n];
        for &(a, b) in relations {
            if a >= n || b >= n || a == b {
                return Err(Error::Parse(format!("bad relation {a} < {b}")));
            }
            succ[a].push(b);
            indeg[b] += 1;
        }
        // Kahn's algorithm, smallest index first for determinism
        let mut ready: std::collections::BTreeSet<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(&i) = ready.iter().next() {
            ready.remove(&i);
            order.push(i);
            for &j in &succ[i] {
                indeg[j] -= 1;
                if indeg[j] == 0 {
                    ready.insert(j);
                }
            }
        }
        if order.len() != n {
            return Err(Error::Parse("relation has a cycle".into()));
        }
        let mut pos = vec![0; n];
        for (k, &i) in order.iter().enumerate() {
            pos[i] = k;
        }
        let mut up = vec![FixedBitSet::with_capacity(n); n];
        for k in (0..n).rev() {
            let i = order[k];
            for &j in &succ[i] {
                let pj = pos[j];
                up[k].insert(pj);
                let above = up[pj].clone();
                up[k].union_with(&above);
            }
        }
        let labels = order.iter().map(|&i| labels[i].clone()).collect();
        Ok(Self { labels, up, provenance, subgroup_ids: None })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn with_provenance(mut self, p: Provenance) -> Self {
        self.provenance = p;
        self
    }

    pub fn subgroup_ids(&self) -> Option<&[usize]> {
        self.subgroup_ids.as_deref()
    }

    /// `i < j`
    #[inline]
    pub fn lt(&self, i: usize, j: usize) -> bool {
        self.up[i].contains(j)
    }

    /// Strict upper set `P_{>i}`.
    pub fn upper(&self, i: usize) -> &FixedBitSet {
        &self.up[i]
    }

    /// Strict lower set `P_{<i}`.
    pub fn lower(&self, i: usize) -> Vec<usize> {
        (0..i).filter(|&j| self.up[j].contains(i)).collect()
    }

    pub fn minimal_elements(&self) -> Vec<usize> {
        let mut has_lower = FixedBitSet::with_capacity(self.len());
        for u in &self.up {
            has_lower.union_with(u);
        }
        (0..self.len()).filter(|&i| !has_lower.contains(i)).collect()
    }

    pub fn maximal_elements(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.up[i].is_clear()).collect()
    }

    /// Cover relations `i ⋖ j`.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.len() {
            for j in self.up[i].ones() {
                // j covers i iff no k with i < k < j
                if !self.up[i].ones().any(|k| k < j && self.up[k].contains(j)) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn relation_count(&self) -> usize {
        self.up.iter().map(|u| u.count_ones(..)).sum()
    }

    /// The induced subposet on `keep`, preserving relative order.
    pub fn restrict(&self, keep: &FixedBitSet, provenance: Provenance) -> FinitePoset {
        let idx: Vec<usize> = keep.ones().collect();
        let mut new_of = vec![usize::MAX; self.len()];
        for (k, &i) in idx.iter().enumerate() {
            new_of[i] = k;
        }
        let m = idx.len();
        let up = idx
            .iter()
            .map(|&i| {
                let mut b = FixedBitSet::with_capacity(m);
                for j in self.up[i].ones() {
                    if new_of[j] != usize::MAX {
                        b.insert(new_of[j]);
                    }
                }
                b
            })
            .collect();
        let labels = idx.iter().map(|&i| self.labels[i].clone()).collect();
        let subgroup_ids = self.subgroup_ids.as_ref().map(|s| idx.iter().map(|&i| s[i]).collect());
        FinitePoset { labels, up, provenance, subgroup_ids }
    }

    /// Path components of the comparability graph, each sorted, ordered by least element.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for i in 0..n {
            for j in self.up[i].ones() {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
        let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for i in 0..n {
            let r = find(&mut parent, i);
            groups.entry(r).or_default().push(i);
        }
        groups.into_values().collect()
    }

    /// Text cover-list form: element count, then one `i < j` line per cover.
    pub fn to_cover_text(&self) -> String {
        let mut s = format!("{}\n", self.len());
        for (i, j) in self.covers() {
            let _ = writeln!(s, "{i} < {j}");
        }
        s
    }

    pub fn from_cover_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let n: usize =
            lines.next().and_then(|l| l.parse().ok()).ok_or_else(|| Error::Parse("expected element count".into()))?;
        let mut rel = Vec::new();
        for l in lines {
            let (a, b) = l.split_once('<').ok_or_else(|| Error::Parse(format!("bad cover line `{l}`")))?;
            let a = a.trim().parse().map_err(|_| Error::Parse(format!("bad index in `{l}`")))?;
            let b = b.trim().parse().map_err(|_| Error::Parse(format!("bad index in `{l}`")))?;
            rel.push((a, b));
        }
        Self::from_relations((0..n).map(|i| i.to_string()).collect(), &rel, Provenance::Generic)
    }
}
