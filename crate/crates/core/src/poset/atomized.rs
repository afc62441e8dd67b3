use std::collections::HashMap;

use fixedbitset::FixedBitSet;

use super::{FinitePoset, SimplicialComplex};
use crate::error::{Error, Result};

/// Result of a join: an element of the poset, or no upper bound at all.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Join {
    Element(usize),
    Whole,
}

/// An atomized poset: its atoms and, for each atom, the elements at or above it.
#[derive(Debug)]
pub struct AtomizedView<'a> {
    poset: &'a FinitePoset,
    atoms: Vec<usize>,
    atom_up: Vec<FixedBitSet>,
    /// Per element, the atoms (by position) below or equal to it.
    atoms_below: Vec<FixedBitSet>,
    maximal: Vec<usize>,
}

fn up_closed(p: &FinitePoset, i: usize) -> FixedBitSet {
    let mut u = p.upper(i).clone();
    u.grow(p.len());
    u.insert(i);
    u
}

/// The least element of an up-closed nonempty set, if it has one.
fn least(p: &FinitePoset, u: &FixedBitSet) -> Option<usize> {
    // in a linear extension a minimum must be the first member
    let m = u.ones().next()?;
    let count = u.count_ones(..);
    (p.upper(m).intersection(u).count() + 1 == count).then_some(m)
}

/// Checks that every bounded atom set has a join.
pub fn atomize(p: &FinitePoset) -> Result<AtomizedView<'_>> {
    let atoms = p.minimal_elements();
    let atom_up: Vec<FixedBitSet> = atoms.iter().map(|&a| up_closed(p, a)).collect();

    // joins reached so far, each with an atom set witnessing it
    let mut witness: HashMap<usize, Vec<usize>> = atoms.iter().map(|&a| (a, vec![a])).collect();
    let mut queue: Vec<usize> = atoms.clone();
    let mut head = 0;
    while head < queue.len() {
        let j = queue[head];
        head += 1;
        let uj = up_closed(p, j);
        for (k, &a) in atoms.iter().enumerate() {
            if uj.contains(a) {
                continue;
            }
            let mut u = uj.clone();
            u.intersect_with(&atom_up[k]);
            if u.is_clear() {
                continue;
            }
            match least(p, &u) {
                Some(m) => {
                    if !witness.contains_key(&m) {
                        let mut w = witness[&j].clone();
                        w.push(a);
                        witness.insert(m, w);
                        queue.push(m);
                    }
                }
                None => {
                    let mut w = witness[&j].clone();
                    w.push(a);
                    w.sort_unstable();
                    return Err(Error::NotAtomized { witness: w });
                }
            }
        }
    }

    let mut atoms_below = vec![FixedBitSet::with_capacity(atoms.len()); p.len()];
    for (k, u) in atom_up.iter().enumerate() {
        for x in u.ones() {
            atoms_below[x].insert(k);
        }
    }
    let maximal = p.maximal_elements();
    Ok(AtomizedView { poset: p, atoms, atom_up, atoms_below, maximal })
}

/// Face-enumeration limits for [`minimal_cover_with`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CoverPolicy {
    pub max_dim: Option<usize>,
    /// Stop after this many faces, keeping only complete dimensions.
    pub max_faces: Option<usize>,
}

impl CoverPolicy {
    pub const FULL: CoverPolicy = CoverPolicy { max_dim: None, max_faces: None };

    /// Full for at most 200 atoms, else dimension at most 4; always capped at 5M faces.
    pub fn default_for(atoms: usize) -> Self {
        Self { max_dim: if atoms <= 200 { None } else { Some(4) }, max_faces: Some(5_000_000) }
    }

    pub fn skeleton(d: usize) -> Self {
        Self { max_dim: Some(d), max_faces: None }
    }
}

impl<'a> AtomizedView<'a> {
    pub fn poset(&self) -> &FinitePoset {
        self.poset
    }

    /// Poset indices of the atoms; atom positions index this list.
    pub fn atoms(&self) -> &[usize] {
        &self.atoms
    }

    /// Elements at or above every atom of `s` (atom positions).
    pub fn upper_bounds(&self, s: &[usize]) -> FixedBitSet {
        let mut u = FixedBitSet::with_capacity(self.poset.len());
        u.insert_range(..);
        for &a in s {
            u.intersect_with(&self.atom_up[a]);
        }
        u
    }

    /// `⟨S⟩` for a set of atom positions; the empty set has no join here.
    pub fn atom_join(&self, s: &[usize]) -> Join {
        if s.is_empty() {
            return Join::Whole;
        }
        let u = self.upper_bounds(s);
        match least(self.poset, &u) {
            Some(m) => Join::Element(m),
            None => {
                debug_assert!(u.is_clear(), "atomized posets have joins of bounded sets");
                Join::Whole
            }
        }
    }

    /// Atoms at or below some element of the up-closed set `u`, at positions `> after`.
    fn candidates(&self, u: &FixedBitSet, after: usize) -> FixedBitSet {
        let mut c = FixedBitSet::with_capacity(self.atoms.len());
        for &m in &self.maximal {
            if u.contains(m) {
                c.union_with(&self.atoms_below[m]);
            }
        }
        c.set_range(..after + 1, false);
        c
    }
}

/// `M(P)`: faces are atom sets with an upper bound.
pub fn minimal_cover(v: &AtomizedView<'_>) -> SimplicialComplex {
    minimal_cover_with(v, CoverPolicy::default_for(v.atoms.len()))
}

pub fn minimal_cover_with(v: &AtomizedView<'_>, policy: CoverPolicy) -> SimplicialComplex {
    let n = v.atoms.len();
    let mut faces: Vec<Vec<u32>> = vec![Vec::new()];
    let mut total = 0usize;
    let budget = policy.max_faces.unwrap_or(usize::MAX);
    let mut over_budget = false;
    let mut truncated = false;
    let mut stack: Vec<u32> = Vec::new();

    struct Ctx<'b, 'a> {
        v: &'b AtomizedView<'a>,
        policy: CoverPolicy,
        budget: usize,
    }
    fn dfs(
        cx: &Ctx<'_, '_>,
        stack: &mut Vec<u32>,
        u: &FixedBitSet,
        faces: &mut Vec<Vec<u32>>,
        total: &mut usize,
        over: &mut bool,
        truncated: &mut bool,
    ) {
        let d = stack.len() - 1;
        if faces.len() <= d {
            faces.push(Vec::new());
        }
        faces[d].extend_from_slice(stack);
        *total += 1;
        if *total > cx.budget {
            *over = true;
            return;
        }
        let last = *stack.last().expect("nonempty") as usize;
        let cands = cx.v.candidates(u, last);
        if cx.policy.max_dim.is_some_and(|m| d >= m) {
            if !cands.is_clear() {
                *truncated = true;
            }
            return;
        }
        for b in cands.ones() {
            let mut u2 = u.clone();
            u2.intersect_with(&cx.v.atom_up[b]);
            if u2.is_clear() {
                continue;
            }
            stack.push(b as u32);
            dfs(cx, stack, &u2, faces, total, over, truncated);
            stack.pop();
            if *over {
                return;
            }
        }
    }

    let cx = Ctx { v, policy, budget };
    for a in 0..n {
        stack.push(a as u32);
        let u = v.atom_up[a].clone();
        dfs(&cx, &mut stack, &u, &mut faces, &mut total, &mut over_budget, &mut truncated);
        stack.pop();
        if over_budget {
            break;
        }
    }
    if over_budget {
        // DFS order is not dimension order, so retry with a lower dimension cap
        let d = faces.len().saturating_sub(2);
        let max_faces = if d == 0 { None } else { Some(budget) };
        return minimal_cover_with(v, CoverPolicy { max_dim: Some(d), max_faces });
    }
    if faces[0].is_empty() {
        faces.clear();
    }
    SimplicialComplex::from_sorted_flat(n, faces, if truncated { policy.max_dim } else { None })
}

/// `true` iff every `k` atoms have a common upper bound.
pub fn no_k_atoms_generate(v: &AtomizedView<'_>, k: usize) -> bool {
    let n = v.atoms.len();
    if k == 0 || k > n {
        return true;
    }
    // an unbounded set of size <= k extends to an unbounded k-set
    fn rec(v: &AtomizedView<'_>, start: usize, depth: usize, k: usize, u: &FixedBitSet) -> bool {
        if depth == k {
            return true;
        }
        for b in start..v.atoms.len() {
            let mut u2 = u.clone();
            u2.intersect_with(&v.atom_up[b]);
            if u2.is_clear() {
                return false;
            }
            if !rec(v, b + 1, depth + 1, k, &u2) {
                return false;
            }
        }
        true
    }
    let mut all = FixedBitSet::with_capacity(v.poset.len());
    all.insert_range(..);
    rec(v, 0, 0, k, &all)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::tests::poset;

    #[test]
    fn unique_minimum_is_atomized() {
        let p = poset(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]);
        let v = atomize(&p).unwrap();
        assert_eq!(v.atoms(), &[0]);
    }

    #[test]
    fn bowtie_is_rejected() {
        // a, b < c, d with no least bound of {a, b}
        let p = poset(4, &[(0, 2), (0, 3), (1, 2), (1, 3)]);
        match atomize(&p) {
            Err(Error::NotAtomized { witness }) => assert_eq!(witness, vec![0, 1]),
            other => panic!("expected rejection, got {other:?}"),
        }
    }

    #[test]
    fn joins() {
        let p = poset(4, &[(0, 2), (1, 2), (2, 3)]);
        let v = atomize(&p).unwrap();
        assert_eq!(v.atom_join(&[0]), Join::Element(0));
        assert_eq!(v.atom_join(&[0, 1]), Join::Element(2));
        let q = poset(2, &[]);
        let w = atomize(&q).unwrap();
        assert_eq!(w.atom_join(&[0, 1]), Join::Whole);
    }

    #[test]
    fn cover_of_two_bounded_atoms_is_an_edge() {
        let p = poset(3, &[(0, 2), (1, 2)]);
        let v = atomize(&p).unwrap();
        let m = minimal_cover(&v);
        assert_eq!(m.face_counts().by_dimension, vec![2, 1]);
        assert!(no_k_atoms_generate(&v, 2));
        let q = poset(2, &[]);
        let w = atomize(&q).unwrap();
        assert_eq!(minimal_cover(&w).face_counts().by_dimension, vec![2]);
        assert!(!no_k_atoms_generate(&w, 2));
    }

    #[test]
    fn skeleton_policy_truncates() {
        let p = poset(4, &[(0, 3), (1, 3), (2, 3)]);
        let v = atomize(&p).unwrap();
        let full = minimal_cover_with(&v, CoverPolicy::FULL);
        assert_eq!(full.face_counts().by_dimension, vec![3, 3, 1]);
        let sk = minimal_cover_with(&v, CoverPolicy::skeleton(1));
        assert_eq!(sk.face_counts().by_dimension, vec![3, 3]);
        assert_eq!(sk.truncated_at(), Some(1));
        let budget = minimal_cover_with(&v, CoverPolicy { max_dim: None, max_faces: Some(6) });
        assert_eq!(budget.face_counts().by_dimension, vec![3, 3]);
        assert_eq!(budget.truncated_at(), Some(1));
    }
}
