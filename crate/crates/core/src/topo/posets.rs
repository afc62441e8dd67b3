//! Posets built from a group: cosets, subgroups, and their relatives.

use std::collections::HashMap;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::group::{Elem, FiniteGroup, Subgroup};
use crate::poset::{FinitePoset, Provenance};

/// Left cosets `xI` (x in `ambient`) of every subgroup `I` in `family`, under inclusion.
///
/// `family` is given in lattice order, which makes the element order a linear extension.
pub fn coset_family_poset(g: &FiniteGroup, ambient: usize, family: &[usize], provenance: Provenance) -> FinitePoset {
    let lat = g.lattice();
    let amb = lat.get(ambient);
    let mut labels = Vec::new();
    let mut reps: Vec<Elem> = Vec::new();
    let mut subgroup_ids = Vec::new();
    // per family member: global coset label of each element, and label -> poset index
    let mut coset_of: Vec<Vec<u32>> = Vec::with_capacity(family.len());
    let mut index_of: Vec<HashMap<u32, usize>> = Vec::with_capacity(family.len());
    for &h in family {
        let (lab, _) = g.coset_labels(lat.get(h));
        let mut map = HashMap::new();
        for &x in amb.members() {
            let l = lab[x as usize];
            if let std::collections::hash_map::Entry::Vacant(e) = map.entry(l) {
                e.insert(labels.len());
                labels.push(format!("{x}H{h}"));
                reps.push(x);
                subgroup_ids.push(h);
            }
        }
        coset_of.push(lab);
        index_of.push(map);
    }
    let n = labels.len();
    let mut up = vec![FixedBitSet::with_capacity(n); n];
    for (fi, &h) in family.iter().enumerate() {
        for &i in index_of[fi].values() {
            let rep = reps[i];
            for (fj, &k) in family.iter().enumerate().skip(fi + 1) {
                if k != h && lat.le(h, k) {
                    let j = index_of[fj][&coset_of[fj][rep as usize]];
                    up[i].insert(j);
                }
            }
        }
    }
    FinitePoset::from_upsets(labels, up, provenance, Some(subgroup_ids))
}

/// Representative of a coset-poset element, read back from its label.
pub(crate) fn labels_rep(label: &str) -> Elem {
    label.split('H').next().and_then(|s| s.parse().ok()).expect("coset label starts with its representative")
}

/// Lattice ids of the proper subgroups of the subgroup `a` (including the trivial one).
pub fn proper_subgroups_of(g: &FiniteGroup, a: usize) -> Vec<usize> {
    let lat = g.lattice();
    (0..lat.len()).filter(|&i| i != a && lat.le(i, a)).collect()
}

/// `C(G)`: left cosets of all proper subgroups.
pub fn coset_poset(g: &FiniteGroup) -> FinitePoset {
    let lat = g.lattice();
    let family: Vec<usize> = lat.proper().collect();
    coset_family_poset(g, lat.whole_id(), &family, Provenance::CosetPoset)
}

/// The coset poset of a subgroup `a`, viewed as a group in its own right.
pub fn coset_poset_of(g: &FiniteGroup, a: usize) -> FinitePoset {
    coset_family_poset(g, a, &proper_subgroups_of(g, a), Provenance::CosetPoset)
}

/// Poset on the given subgroups (lattice ids in lattice order) under inclusion.
pub fn subgroup_family_poset(g: &FiniteGroup, family: &[usize], provenance: Provenance) -> FinitePoset {
    let lat = g.lattice();
    let n = family.len();
    let mut up = vec![FixedBitSet::with_capacity(n); n];
    for i in 0..n {
        for j in i + 1..n {
            if lat.le(family[i], family[j]) {
                up[i].insert(j);
            }
        }
    }
    let labels = family.iter().map(|h| format!("H{h}")).collect();
    FinitePoset::from_upsets(labels, up, provenance, Some(family.to_vec()))
}

/// `L(G)`: proper nontrivial subgroups.
pub fn subgroup_poset(g: &FiniteGroup) -> FinitePoset {
    let lat = g.lattice();
    let family: Vec<usize> = lat.proper().filter(|&i| i != lat.trivial_id()).collect();
    subgroup_family_poset(g, &family, Provenance::SubgroupPoset)
}

/// `L(A)` for a subgroup `a`.
pub fn subgroup_poset_of(g: &FiniteGroup, a: usize) -> FinitePoset {
    let family: Vec<usize> = proper_subgroups_of(g, a).into_iter().filter(|&i| i != 0).collect();
    subgroup_family_poset(g, &family, Provenance::SubgroupPoset)
}

/// `C(G)` with the singleton `{x}` removed.
pub fn punctured_coset_poset(g: &FiniteGroup, x: Elem) -> Result<FinitePoset> {
    if x as usize >= g.order() {
        return Err(Error::NotAMember);
    }
    let c = coset_poset(g);
    // singletons come first, indexed by their element
    let mut keep = FixedBitSet::with_capacity(c.len());
    keep.insert_range(..);
    keep.set(x as usize, false);
    Ok(c.restrict(&keep, Provenance::Punctured))
}

/// Checks that left multiplication by `y x^{-1}` is an isomorphism `C(G)_x → C(G)_y`.
pub fn punctures_isomorphic(g: &FiniteGroup, x: Elem, y: Elem) -> Result<bool> {
    let cx = punctured_coset_poset(g, x)?;
    let cy = punctured_coset_poset(g, y)?;
    if cx.len() != cy.len() {
        return Ok(false);
    }
    let t = g.mul(y, g.inv(x));
    let image = |p: &FinitePoset, i: usize| -> (usize, Elem) {
        let h = p.subgroup_ids().expect("coset poset")[i];
        (h, labels_rep(p.label(i)))
    };
    let lat = g.lattice();
    let mut target: HashMap<(usize, u32), usize> = HashMap::new();
    let mut labels_cache: HashMap<usize, Vec<u32>> = HashMap::new();
    let mut label = |h: usize, e: Elem| -> u32 {
        labels_cache.entry(h).or_insert_with(|| g.coset_labels(lat.get(h)).0)[e as usize]
    };
    for j in 0..cy.len() {
        let (h, r) = image(&cy, j);
        target.insert((h, label(h, r)), j);
    }
    let mut map = vec![0usize; cx.len()];
    for (i, m) in map.iter_mut().enumerate() {
        let (h, r) = image(&cx, i);
        match target.get(&(h, label(h, g.mul(t, r)))) {
            Some(&j) => *m = j,
            None => return Ok(false),
        }
    }
    for i in 0..cx.len() {
        for j in 0..cx.len() {
            if i != j && cx.lt(i, j) != cy.lt(map[i], map[j]) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn check_proper_normal(g: &FiniteGroup, n: usize) -> Result<&Subgroup> {
    let lat = g.lattice();
    if n == lat.trivial_id() || n == lat.whole_id() {
        return Err(Error::NotProper);
    }
    let s = lat.get(n);
    if !g.is_normal(s) {
        return Err(Error::NotNormal);
    }
    Ok(s)
}

/// `C(G, N)`: cosets `xH` with `HN = G`.
pub fn relative_coset_poset(g: &FiniteGroup, n: usize) -> Result<FinitePoset> {
    let ns = check_proper_normal(g, n)?;
    let lat = g.lattice();
    let c = coset_poset(g);
    let ids = c.subgroup_ids().expect("coset poset");
    let mut keep = FixedBitSet::with_capacity(c.len());
    for (i, &h) in ids.iter().enumerate() {
        let hs = lat.get(h);
        let meet = hs.bits().intersection(ns.bits()).count();
        if hs.order() * ns.order() == g.order() * meet {
            keep.insert(i);
        }
    }
    Ok(c.restrict(&keep, Provenance::Relative))
}

/// An internal semidirect decomposition `G = H ⋊ K` with `H` normal.
#[derive(Clone, Debug)]
pub struct SemidirectStructure {
    pub normal: usize,
    pub complement: usize,
    /// `f(g)`: the `H`-coordinate of `g = h k`.
    first: Vec<Elem>,
    /// `π(g)`: the `K`-coordinate of `g = h k`.
    projection: Vec<Elem>,
}

impl SemidirectStructure {
    pub fn new(g: &FiniteGroup, normal: usize, complement: usize) -> Result<Self> {
        let lat = g.lattice();
        let h = lat.get(normal);
        let k = lat.get(complement);
        if !g.is_normal(h) {
            return Err(Error::NotNormal);
        }
        if h.bits().intersection(k.bits()).count() != 1 || h.order() * k.order() != g.order() {
            return Err(Error::Precondition("subgroups do not form a semidirect decomposition".into()));
        }
        let mut first = vec![0; g.order()];
        let mut projection = vec![0; g.order()];
        for &a in h.members() {
            for &b in k.members() {
                let x = g.mul(a, b);
                first[x as usize] = a;
                projection[x as usize] = b;
            }
        }
        Ok(Self { normal, complement, first, projection })
    }

    pub fn f(&self, x: Elem) -> Elem {
        self.first[x as usize]
    }

    pub fn pi(&self, x: Elem) -> Elem {
        self.projection[x as usize]
    }

    /// Subgroups `I ≤ H` with `k I k^{-1} = I` for every `k ∈ K`, in lattice order.
    pub fn invariant_subgroups(&self, g: &FiniteGroup) -> Vec<usize> {
        let lat = g.lattice();
        let k = lat.get(self.complement);
        (0..lat.len())
            .filter(|&i| lat.le(i, self.normal))
            .filter(|&i| {
                let s = lat.get(i);
                k.witnesses().iter().all(|&y| s.witnesses().iter().all(|&x| s.contains(g.conjugate(y, x))))
            })
            .collect()
    }

    /// `f̂(S)`: the smallest `K`-invariant subgroup of `H` containing `S`.
    pub fn invariant_closure(&self, g: &FiniteGroup, set: &[Elem]) -> Subgroup {
        let k = g.lattice().get(self.complement);
        let mut cur = g.generated_subgroup(set);
        loop {
            let mut more: Vec<Elem> = cur.witnesses().to_vec();
            for &y in k.witnesses() {
                for &x in cur.witnesses() {
                    more.push(g.conjugate(y, x));
                }
            }
            let next = g.generated_subgroup(&more);
            if next.order() == cur.order() {
                return cur;
            }
            cur = next;
        }
    }

    /// `π(xT) = K` and `f̂(T) = H`.
    pub fn is_saturating(&self, g: &FiniteGroup, rep: Elem, t: usize) -> bool {
        let lat = g.lattice();
        let ts = lat.get(t);
        let k = lat.get(self.complement);
        let mut hit = FixedBitSet::with_capacity(g.order());
        for &m in ts.members() {
            hit.insert(self.pi(g.mul(rep, m)) as usize);
        }
        if hit.count_ones(..) != k.order() {
            return false;
        }
        let image: Vec<Elem> = ts.members().iter().map(|&m| self.f(m)).collect();
        self.invariant_closure(g, &image).order() == lat.get(self.normal).order()
    }
}

/// The posets attached to a semidirect decomposition.
#[derive(Clone, Debug)]
pub struct SemidirectPosets {
    /// Proper `K`-invariant subgroups of `H`, including the trivial one.
    pub invariant_subgroups: Vec<usize>,
    /// `L_K(H)`: proper nontrivial `K`-invariant subgroups.
    pub invariant_subgroup_poset: FinitePoset,
    /// `C_K(H)`: cosets in `H` of proper `K`-invariant subgroups.
    pub invariant_coset_poset: FinitePoset,
    /// `C_0(G)`: non-saturating proper cosets.
    pub non_saturating: FinitePoset,
    /// Saturating cosets as `(representative, subgroup id)`.
    pub saturating: Vec<(Elem, usize)>,
}

pub fn semidirect_posets(g: &FiniteGroup, s: &SemidirectStructure) -> SemidirectPosets {
    let invariant: Vec<usize> = s.invariant_subgroups(g).into_iter().filter(|&i| i != s.normal).collect();
    let nontrivial: Vec<usize> = invariant.iter().copied().filter(|&i| i != 0).collect();
    let invariant_subgroup_poset = subgroup_family_poset(g, &nontrivial, Provenance::Invariant);
    let invariant_coset_poset = coset_family_poset(g, s.normal, &invariant, Provenance::Invariant);
    let c = coset_poset(g);
    let ids = c.subgroup_ids().expect("coset poset");
    let mut keep = FixedBitSet::with_capacity(c.len());
    let mut saturating = Vec::new();
    for (i, &h) in ids.iter().enumerate() {
        let rep = labels_rep(c.label(i));
        if s.is_saturating(g, rep, h) {
            saturating.push((rep, h));
        } else {
            keep.insert(i);
        }
    }
    let non_saturating = c.restrict(&keep, Provenance::NonSaturating);
    SemidirectPosets {
        invariant_subgroups: invariant,
        invariant_subgroup_poset,
        invariant_coset_poset,
        non_saturating,
        saturating,
    }
}

/// Keeps cosets (or subgroups) whose subgroup is an intersection of maximal subgroups.
pub fn reduce_to_maximal_intersections(p: &FinitePoset, g: &FiniteGroup) -> Result<FinitePoset> {
    match p.provenance() {
        Provenance::CosetPoset | Provenance::SubgroupPoset => {}
        other => return Err(Error::Precondition(format!("expected a coset or subgroup poset, got {other:?}"))),
    }
    let ids = p.subgroup_ids().ok_or_else(|| Error::Precondition("poset carries no subgroup ids".into()))?;
    let inter = g.lattice().maximal_intersections();
    let mut keep = FixedBitSet::with_capacity(p.len());
    for (i, &h) in ids.iter().enumerate() {
        if inter.contains(h) {
            keep.insert(i);
        }
    }
    Ok(p.restrict(&keep, p.provenance()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::catalog_group;

    fn group(spec: &str) -> FiniteGroup {
        FiniteGroup::new(catalog_group(spec).unwrap()).unwrap()
    }

    fn subgroup_of_order(g: &FiniteGroup, n: usize) -> usize {
        g.lattice().subgroups().iter().position(|h| h.order() == n).unwrap()
    }

    #[test]
    fn coset_poset_sizes() {
        assert_eq!(coset_poset(&group("cyclic:2")).len(), 2);
        assert_eq!(coset_poset(&group("cyclic:2")).relation_count(), 0);
        let s3 = coset_poset(&group("sym:3"));
        assert_eq!(s3.len(), 17);
        // each of the 6 singletons lies in 3 order-2 cosets and 1 order-3 coset
        assert_eq!(s3.covers().len(), 24);
        assert_eq!(coset_poset(&group("alt:5")).len(), 1018);
    }

    #[test]
    fn coset_order_is_inclusion() {
        let g = group("alt:4");
        let c = coset_poset(&g);
        let lat = g.lattice();
        let members = |i: usize| -> FixedBitSet {
            let h = lat.get(c.subgroup_ids().unwrap()[i]);
            let r = labels_rep(c.label(i));
            let mut b = FixedBitSet::with_capacity(g.order());
            for &m in h.members() {
                b.insert(g.mul(r, m) as usize);
            }
            b
        };
        let sets: Vec<FixedBitSet> = (0..c.len()).map(members).collect();
        for i in 0..c.len() {
            for j in 0..c.len() {
                let inc = i != j && sets[i].is_subset(&sets[j]);
                assert_eq!(c.lt(i, j), inc, "{} {}", c.label(i), c.label(j));
            }
        }
    }

    #[test]
    fn subgroup_posets() {
        assert_eq!(subgroup_poset(&group("cyclic:6")).len(), 2);
        let s3 = subgroup_poset(&group("sym:3"));
        assert_eq!(s3.len(), 4);
        assert_eq!(s3.relation_count(), 0);
        assert_eq!(subgroup_poset(&group("alt:5")).len(), 57);
    }

    #[test]
    fn punctures() {
        let k = group("elem:2^2");
        let p = punctured_coset_poset(&k, 0).unwrap();
        assert_eq!(p.len(), 9);
        assert_eq!(p.connected_components().len(), 1);
        let s3 = group("sym:3");
        assert_eq!(punctured_coset_poset(&s3, 0).unwrap().connected_components().len(), 1);
        let z4 = group("cyclic:4");
        assert!(punctured_coset_poset(&z4, 0).unwrap().connected_components().len() > 1);
        for y in s3.elements() {
            assert!(punctures_isomorphic(&s3, 0, y).unwrap());
        }
        assert!(punctured_coset_poset(&s3, 99).is_err());
    }

    #[test]
    fn relative_posets() {
        let s3 = group("sym:3");
        let a3 = subgroup_of_order(&s3, 3);
        let r = relative_coset_poset(&s3, a3).unwrap();
        assert_eq!(r.len(), 9);
        assert!(r.subgroup_ids().unwrap().iter().all(|&h| s3.lattice().get(h).order() == 2));
        let z6 = group("cyclic:6");
        let z3 = subgroup_of_order(&z6, 3);
        assert_eq!(relative_coset_poset(&z6, z3).unwrap().len(), 3);
        let z2 = subgroup_of_order(&s3, 2);
        assert!(matches!(relative_coset_poset(&s3, z2), Err(Error::NotNormal)));
        assert!(matches!(relative_coset_poset(&s3, 0), Err(Error::NotProper)));
    }

    #[test]
    fn semidirect_s3() {
        let g = group("sym:3");
        let h = subgroup_of_order(&g, 3);
        let k = subgroup_of_order(&g, 2);
        let s = SemidirectStructure::new(&g, h, k).unwrap();
        let sp = semidirect_posets(&g, &s);
        assert_eq!(sp.invariant_subgroups, vec![0]);
        assert!(sp.invariant_subgroup_poset.is_empty());
        assert_eq!(sp.invariant_coset_poset.len(), 3);
        // exhaustive definition check over all 17 cosets
        let c = coset_poset(&g);
        let mut expected = Vec::new();
        for i in 0..c.len() {
            let t = c.subgroup_ids().unwrap()[i];
            let rep = labels_rep(c.label(i));
            let ts = g.lattice().get(t);
            let proj: std::collections::BTreeSet<Elem> = ts.members().iter().map(|&m| s.pi(g.mul(rep, m))).collect();
            let fimg: Vec<Elem> = ts.members().iter().map(|&m| s.f(m)).collect();
            // the only invariant subgroups of Z3 are 1 and Z3
            let gen = g.generated_subgroup(&fimg).order() == 3;
            if proj.len() == 2 && gen {
                expected.push((rep, t));
            }
        }
        assert_eq!(sp.saturating, expected);
        assert!(!sp.saturating.is_empty());
        assert_eq!(sp.non_saturating.len() + sp.saturating.len(), 17);
        assert!(SemidirectStructure::new(&g, k, h).is_err());
    }

    #[test]
    fn maximal_intersection_reduction() {
        let s3 = group("sym:3");
        let l = subgroup_poset(&s3);
        assert_eq!(reduce_to_maximal_intersections(&l, &s3).unwrap().len(), 4);
        let c = coset_poset(&s3);
        assert_eq!(reduce_to_maximal_intersections(&c, &s3).unwrap().len(), 17);
        let a5 = group("alt:5");
        let c = coset_poset(&a5);
        let r = reduce_to_maximal_intersections(&c, &a5).unwrap();
        let removed: std::collections::BTreeSet<usize> = c
            .subgroup_ids()
            .unwrap()
            .iter()
            .filter(|&&h| !r.subgroup_ids().unwrap().contains(&h))
            .map(|&h| a5.lattice().get(h).order())
            .collect();
        assert_eq!(removed.into_iter().collect::<Vec<_>>(), vec![4, 5]);
        let bad = crate::poset::FinitePoset::from_relations(vec!["a".into()], &[], Provenance::Generic).unwrap();
        assert!(reduce_to_maximal_intersections(&bad, &s3).is_err());
    }
}
