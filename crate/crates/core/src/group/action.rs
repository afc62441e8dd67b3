use std::collections::HashMap;

use serde::Serialize;

use super::{Elem, FiniteGroup, PermGroup, Permutation};
use crate::error::{Error, Result};

/// A group acting on `0..points`, with a full action table and generator rows.
#[derive(Clone, Debug)]
pub struct PermAction {
    points: usize,
    table: Vec<Vec<u32>>,
    generators: Vec<usize>,
}

impl PermAction {
    /// The permutation group generated by `gens`, acting naturally.
    pub fn from_generators(points: usize, gens: Vec<Permutation>) -> Result<Self> {
        let pg = PermGroup::new("action", points, gens)?;
        let elements = pg.elements()?;
        let table: Vec<Vec<u32>> = elements.iter().map(|e| e.images().to_vec()).collect();
        let generators = pg.generators().iter().map(|g| elements.binary_search(g).expect("member")).collect();
        Ok(Self { points, table, generators })
    }

    pub fn points(&self) -> usize {
        self.points
    }

    /// Number of table rows (the acting group's order for faithful actions).
    pub fn group_order(&self) -> usize {
        self.table.len()
    }

    pub fn act(&self, row: usize, point: u32) -> u32 {
        self.table[row][point as usize]
    }

    pub fn row(&self, row: usize) -> &[u32] {
        &self.table[row]
    }

    pub fn generator_tables(&self) -> impl Iterator<Item = &[u32]> {
        self.generators.iter().map(|&r| self.table[r].as_slice())
    }
}

struct UnionFind {
    parent: Vec<u32>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self { parent: (0..n as u32).collect() }
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let up = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = up;
            x = up;
        }
        x
    }

    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb) as usize] = ra.min(rb);
        }
    }

    fn classes(&mut self) -> usize {
        (0..self.parent.len() as u32).filter(|&x| self.find(x) == x).count()
    }
}

/// Action of `G` on the left cosets of a proper subgroup by left multiplication.
pub fn coset_action(g: &FiniteGroup, subgroup: usize) -> Result<PermAction> {
    let h = g.lattice().get(subgroup);
    if g.is_whole(h) {
        return Err(Error::NotProper);
    }
    let (label, count) = g.coset_labels(h);
    let mut reps = vec![0; count];
    for x in g.elements().rev() {
        reps[label[x as usize] as usize] = x;
    }
    let table = g.elements().map(|x| reps.iter().map(|&r| label[g.mul(x, r) as usize]).collect()).collect();
    let generators = g.generators().iter().map(|&x| x as usize).collect();
    Ok(PermAction { points: count, table, generators })
}

pub fn orbit_count(a: &PermAction) -> usize {
    let mut uf = UnionFind::new(a.points);
    for gen in a.generator_tables() {
        for (x, &y) in gen.iter().enumerate() {
            uf.union(x as u32, y);
        }
    }
    uf.classes()
}

/// One orbit on ordered pairs of distinct points.
pub fn is_two_transitive(a: &PermAction) -> bool {
    let n = a.points;
    if n < 2 {
        return false;
    }
    let pair = |x: usize, y: usize| (x * n + y) as u32;
    let mut uf = UnionFind::new(n * n);
    for gen in a.generator_tables() {
        for x in 0..n {
            for y in 0..n {
                if x != y {
                    uf.union(pair(x, y), pair(gen[x] as usize, gen[y] as usize));
                }
            }
        }
    }
    let mut roots: Vec<u32> = Vec::new();
    for x in 0..n {
        for y in 0..n {
            if x != y {
                let r = uf.find(pair(x, y));
                if !roots.contains(&r) {
                    roots.push(r);
                    if roots.len() > 1 {
                        return false;
                    }
                }
            }
        }
    }
    true
}

#[derive(Clone, Debug, Serialize)]
pub struct PairClasses {
    pub a: u64,
    pub b: u64,
    /// Ordered generating pairs `(x, y)` with `o(x) = a`, `o(y) = b`.
    pub pairs: usize,
    /// Orbits of the automorphism action on those pairs.
    pub count: usize,
    pub representatives: Vec<(Elem, Elem)>,
}

/// Orbits of `aut` (acting on the element table of `g`) on generating pairs.
pub fn generating_pair_classes(g: &FiniteGroup, aut: &PermAction, a: u64, b: u64) -> Result<PairClasses> {
    if aut.points() != g.order() {
        return Err(Error::NotAutomorphic);
    }
    for gen in aut.generator_tables() {
        if gen[0] != 0 {
            return Err(Error::NotAutomorphic);
        }
        for x in g.elements() {
            for &s in g.generators() {
                if gen[g.mul(x, s) as usize] != g.mul(gen[x as usize], gen[s as usize]) {
                    return Err(Error::NotAutomorphic);
                }
            }
        }
    }
    let xs = g.elements_of_order(a);
    let ys = g.elements_of_order(b);
    if xs.is_empty() {
        return Err(Error::NoElementsOfOrder(a));
    }
    if ys.is_empty() {
        return Err(Error::NoElementsOfOrder(b));
    }
    let mut pairs: Vec<(Elem, Elem)> = Vec::new();
    for &x in &xs {
        for &y in &ys {
            if g.generates_pair(x, y) {
                pairs.push((x, y));
            }
        }
    }
    let index: HashMap<(Elem, Elem), u32> = pairs.iter().enumerate().map(|(i, &p)| (p, i as u32)).collect();
    let mut uf = UnionFind::new(pairs.len());
    for gen in aut.generator_tables() {
        for (i, &(x, y)) in pairs.iter().enumerate() {
            let j = index[&(gen[x as usize], gen[y as usize])];
            uf.union(i as u32, j);
        }
    }
    let representatives: Vec<(Elem, Elem)> =
        (0..pairs.len()).filter(|&i| uf.find(i as u32) == i as u32).map(|i| pairs[i]).collect();
    Ok(PairClasses { a, b, pairs: pairs.len(), count: representatives.len(), representatives })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{catalog_group, psl2, Psl2Model};

    fn group(spec: &str) -> FiniteGroup {
        FiniteGroup::new(catalog_group(spec).unwrap()).unwrap()
    }

    fn id_of_order(g: &FiniteGroup, order: usize) -> usize {
        g.lattice().subgroups().iter().position(|h| h.order() == order).unwrap()
    }

    /// Direct witness search: the pair (0, 1) can be sent to every ordered pair of distinct points.
    fn two_transitive_by_witness(a: &PermAction) -> bool {
        let n = a.points() as u32;
        n >= 2
            && (0..n).all(|y| {
                (0..n).filter(|&z| z != y).all(|z| (0..a.group_order()).any(|r| a.act(r, 0) == y && a.act(r, 1) == z))
            })
    }

    #[test]
    fn alt5_cosets_are_two_transitive() {
        let a5 = group("alt:5");
        let act = coset_action(&a5, id_of_order(&a5, 12)).unwrap();
        assert_eq!(act.points(), 5);
        assert!(is_two_transitive(&act));
        let act = coset_action(&a5, id_of_order(&a5, 10)).unwrap();
        assert_eq!(act.points(), 6);
        assert!(is_two_transitive(&act));
        assert!(coset_action(&a5, a5.lattice().whole_id()).is_err());
    }

    #[test]
    fn cyclic_regular_action_is_not_two_transitive() {
        let z4 = group("cyclic:4");
        let regular = coset_action(&z4, 0).unwrap();
        assert_eq!(regular.points(), 4);
        assert!(!is_two_transitive(&regular));
        assert!(!two_transitive_by_witness(&regular));
        assert_eq!(orbit_count(&regular), 1);
        // two points swapped: 2-transitive, however small
        let halves = coset_action(&z4, id_of_order(&z4, 2)).unwrap();
        assert!(is_two_transitive(&halves));
        assert!(two_transitive_by_witness(&halves));
    }

    #[test]
    fn pair_orbits_agree_with_witness_search() {
        for spec in ["sym:4", "alt:5", "dihedral:5", "alt:4"] {
            let g = group(spec);
            for (i, h) in g.lattice().subgroups().iter().enumerate() {
                if g.is_whole(h) {
                    continue;
                }
                let act = coset_action(&g, i).unwrap();
                if act.points() > 12 {
                    continue;
                }
                assert_eq!(is_two_transitive(&act), two_transitive_by_witness(&act), "{spec} subgroup {i}");
            }
        }
    }

    #[test]
    fn coset_action_is_an_action() {
        let g = group("sym:4");
        let act = coset_action(&g, id_of_order(&g, 3)).unwrap();
        for x in g.elements() {
            for y in g.elements() {
                for pt in 0..act.points() as u32 {
                    assert_eq!(act.act(g.mul(x, y) as usize, pt), act.act(x as usize, act.act(y as usize, pt)));
                }
            }
        }
        assert!((0..act.points() as u32).all(|pt| act.act(0, pt) == pt));
    }

    #[test]
    fn psl2_7_generating_pair_classes() {
        let g = FiniteGroup::new(psl2(7).unwrap()).unwrap();
        let aut = Psl2Model::new(&g, 7).unwrap().pgl2_conjugation_action().unwrap();
        assert_eq!(generating_pair_classes(&g, &aut, 2, 3).unwrap().count, 1);
        assert_eq!(generating_pair_classes(&g, &aut, 2, 4).unwrap().count, 1);
        assert_eq!(generating_pair_classes(&g, &aut, 2, 7).unwrap().count, 3);
        assert!(matches!(generating_pair_classes(&g, &aut, 2, 5), Err(Error::NoElementsOfOrder(5))));
    }

    #[test]
    fn non_automorphism_is_rejected() {
        // an automorphism of S3 fixing every transposition is trivial, so a single swap is never one
        let g = group("sym:3");
        let swap = Permutation::from_cycles(6, &[vec![1, 2]]).unwrap();
        let bogus = PermAction::from_generators(6, vec![swap]).unwrap();
        assert!(matches!(generating_pair_classes(&g, &bogus, 2, 3), Err(Error::NotAutomorphic)));
    }
}
