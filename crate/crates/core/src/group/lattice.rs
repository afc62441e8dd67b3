use std::collections::HashMap;

use fixedbitset::FixedBitSet;

use super::{Elem, FiniteGroup, Subgroup};

/// The complete subgroup lattice of a finite group.
///
/// Subgroups are sorted by `(order, member list)`, so index 0 is the trivial
/// subgroup and the last index is the whole group.
#[derive(Debug)]
pub struct SubgroupLattice {
    subgroups: Vec<Subgroup>,
    index: HashMap<FixedBitSet, usize>,
    /// `supers[i]` holds every `j` with `H_i ⊆ H_j` (including `i`).
    supers: Vec<FixedBitSet>,
    maximal: Vec<usize>,
    /// Per element, the maximal subgroups containing it.
    max_masks: Vec<FixedBitSet>,
}

impl SubgroupLattice {
    /// Seeds with every cyclic subgroup and closes under joins with cyclic subgroups.
    pub(super) fn enumerate(g: &FiniteGroup) -> Self {
        let mut index: HashMap<FixedBitSet, usize> = HashMap::new();
        let mut found: Vec<Subgroup> = Vec::new();
        let mut cyclic_gens: Vec<Elem> = Vec::new();
        for x in g.elements() {
            let c = g.generated_subgroup(&[x]);
            if !index.contains_key(c.bits()) {
                index.insert(c.bits().clone(), found.len());
                found.push(c);
                cyclic_gens.push(x);
            }
        }
        let mut i = 0;
        while i < found.len() {
            let h = found[i].clone();
            for &c in &cyclic_gens {
                if h.contains(c) {
                    continue;
                }
                let j = g.join_element(&h, c);
                if !index.contains_key(j.bits()) {
                    index.insert(j.bits().clone(), found.len());
                    found.push(j);
                }
            }
            i += 1;
        }
        found.sort_by(|a, b| a.order().cmp(&b.order()).then_with(|| a.members().cmp(b.members())));
        let index: HashMap<FixedBitSet, usize> = found.iter().enumerate().map(|(i, h)| (h.bits().clone(), i)).collect();

        let m = found.len();
        let mut supers = vec![FixedBitSet::with_capacity(m); m];
        for i in 0..m {
            for j in i..m {
                if found[i].is_subgroup_of(&found[j]) {
                    supers[i].insert(j);
                }
            }
        }
        let whole = m - 1;
        let maximal: Vec<usize> = (0..whole).filter(|&i| supers[i].ones().all(|j| j == i || j == whole)).collect();
        let mut max_masks = vec![FixedBitSet::with_capacity(maximal.len()); g.order()];
        for (k, &mi) in maximal.iter().enumerate() {
            for &x in found[mi].members() {
                max_masks[x as usize].insert(k);
            }
        }
        Self { subgroups: found, index, supers, maximal, max_masks }
    }

    pub fn len(&self) -> usize {
        self.subgroups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subgroups.is_empty()
    }

    pub fn subgroups(&self) -> &[Subgroup] {
        &self.subgroups
    }

    pub fn get(&self, i: usize) -> &Subgroup {
        &self.subgroups[i]
    }

    pub fn trivial_id(&self) -> usize {
        0
    }

    pub fn whole_id(&self) -> usize {
        self.subgroups.len() - 1
    }

    pub fn id_of(&self, h: &Subgroup) -> Option<usize> {
        self.index.get(h.bits()).copied()
    }

    pub fn id_of_bits(&self, bits: &FixedBitSet) -> Option<usize> {
        self.index.get(bits).copied()
    }

    /// `H_i ⊆ H_j`
    pub fn le(&self, i: usize, j: usize) -> bool {
        self.supers[i].contains(j)
    }

    /// Subgroups containing `H_i`, including itself.
    pub fn supergroups(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.supers[i].ones()
    }

    pub fn maximal_subgroups(&self) -> &[usize] {
        &self.maximal
    }

    /// `⟨a, b⟩ = G` iff no maximal subgroup contains both.
    pub fn pair_generates(&self, a: Elem, b: Elem) -> bool {
        if self.maximal.is_empty() {
            // trivial group: only ⟨1,1⟩ = G
            return true;
        }
        self.max_masks[a as usize].is_disjoint(&self.max_masks[b as usize])
    }

    /// Proper subgroups only (the whole group excluded).
    pub fn proper(&self) -> impl Iterator<Item = usize> {
        0..self.whole_id()
    }

    pub fn normal_subgroups(&self, g: &FiniteGroup) -> Vec<usize> {
        (0..self.len()).filter(|&i| g.is_normal(&self.subgroups[i])).collect()
    }

    /// The subgroups that are intersections of maximal subgroups (the whole group
    /// counts as the empty intersection).
    pub fn maximal_intersections(&self) -> FixedBitSet {
        let m = self.len();
        let mut out = FixedBitSet::with_capacity(m);
        out.insert(self.whole_id());
        let mut frontier: Vec<usize> = self.maximal.clone();
        for &i in &frontier {
            out.insert(i);
        }
        while let Some(i) = frontier.pop() {
            for &mx in &self.maximal {
                let mut bits = self.subgroups[i].bits().clone();
                bits.intersect_with(self.subgroups[mx].bits());
                let j = self.index[&bits];
                if !out.put(j) {
                    frontier.push(j);
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use crate::group::{catalog_group, FiniteGroup};

    fn lattice_len(spec: &str) -> usize {
        FiniteGroup::new(catalog_group(spec).unwrap()).unwrap().lattice().len()
    }

    #[test]
    fn subgroup_counts() {
        assert_eq!(lattice_len("cyclic:6"), 4);
        assert_eq!(lattice_len("sym:3"), 6);
        assert_eq!(lattice_len("alt:4"), 10);
        assert_eq!(lattice_len("sym:4"), 30);
        assert_eq!(lattice_len("dicyclic:2"), 6);
        assert_eq!(lattice_len("dihedral:4"), 10);
    }

    /// A5: 1 + 15·Z2 + 10·Z3 + 6·Z5 + 5·V4 + 10·S3 + 6·D10 + 5·A4 + 1 by conjugacy-class census.
    #[test]
    fn alt5_lattice_matches_census() {
        let g = FiniteGroup::new(catalog_group("alt:5").unwrap()).unwrap();
        let lat = g.lattice();
        assert_eq!(lat.len(), 1 + 15 + 10 + 6 + 5 + 10 + 6 + 5 + 1);
        let count = |o: usize| lat.subgroups().iter().filter(|h| h.order() == o).count();
        assert_eq!(
            [count(1), count(2), count(3), count(4), count(5), count(6), count(10), count(12), count(60)],
            [1, 15, 10, 5, 6, 10, 6, 5, 1]
        );
        let mut max_orders: Vec<usize> = lat.maximal_subgroups().iter().map(|&i| lat.get(i).order()).collect();
        max_orders.sort_unstable();
        max_orders.dedup();
        assert_eq!(max_orders, vec![6, 10, 12]);
    }

    #[test]
    fn lattice_is_sorted_and_duplicate_free() {
        let g = FiniteGroup::new(catalog_group("sym:4").unwrap()).unwrap();
        let lat = g.lattice();
        for w in lat.subgroups().windows(2) {
            assert!((w[0].order(), w[0].members()) < (w[1].order(), w[1].members()));
        }
        assert_eq!(lat.get(0).order(), 1);
        assert_eq!(lat.get(lat.whole_id()).order(), 24);
    }

    #[test]
    fn pair_generation_matches_closure() {
        let g = FiniteGroup::new(catalog_group("sym:4").unwrap()).unwrap();
        for a in g.elements() {
            for b in g.elements() {
                let closure = g.generated_subgroup(&[a, b]).order() == g.order();
                assert_eq!(g.generates_pair(a, b), closure);
            }
        }
    }
}
