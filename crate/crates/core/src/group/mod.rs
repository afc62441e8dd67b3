//! Finite permutation groups with indexed elements, subgroup lattices and cosets.
//!
//! A [`PermGroup`] is the raw generator description. [`FiniteGroup`] materializes
//! the element table (elements sorted by image tuple, so the identity is index 0),
//! the Cayley table and, on demand, the complete subgroup lattice.

mod action;
mod catalog;
mod io;
mod iso;
mod lattice;
mod normal;
mod perm;
mod psl2;

use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::OnceLock;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};

pub use action::{coset_action, generating_pair_classes, is_two_transitive, orbit_count, PairClasses, PermAction};
pub use catalog::{catalog_group, default_catalog, direct_product, CatalogEntry};
pub use io::{parse_group_file, parse_semidirect_file, GROUP_FILE_GRAMMAR};
pub use iso::{are_isomorphic, is_coprime};
pub use lattice::SubgroupLattice;
pub use normal::{ChiefSeriesData, ComplementSet};
pub use perm::Permutation;
pub use psl2::{is_prime, order_from_trace, psl2, psl2_order, MobiusTransform, Psl2Model};

/// Default order cap for lattice-based computations.
pub const DEFAULT_ORDER_CAP: usize = 400;

/// Upper bound on element enumeration for raw permutation groups.
const ENUMERATION_LIMIT: usize = 200_000;

/// Index of an element in a [`FiniteGroup`]'s element table.
pub type Elem = u32;

/// A finite group given by permutation generators on `degree` points.
#[derive(Debug)]
pub struct PermGroup {
    name: String,
    degree: usize,
    generators: Vec<Permutation>,
    elements: OnceLock<Vec<Permutation>>,
}

impl Clone for PermGroup {
    fn clone(&self) -> Self {
        let elements = OnceLock::new();
        if let Some(e) = self.elements.get() {
            let _ = elements.set(e.clone());
        }
        Self { name: self.name.clone(), degree: self.degree, generators: self.generators.clone(), elements }
    }
}

impl PermGroup {
    pub fn new(name: impl Into<String>, degree: usize, generators: Vec<Permutation>) -> Result<Self> {
        if let Some(g) = generators.iter().find(|g| g.degree() != degree) {
            return Err(Error::InvalidPermutation(format!("generator {g} has degree {} not {degree}", g.degree())));
        }
        let generators = generators.into_iter().filter(|g| !g.is_identity()).collect();
        Ok(Self { name: name.into(), degree, generators, elements: OnceLock::new() })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    /// All elements, sorted by image tuple. Enumerated once on first use.
    pub fn elements(&self) -> Result<&[Permutation]> {
        if let Some(e) = self.elements.get() {
            return Ok(e);
        }
        let id = Permutation::identity(self.degree);
        let mut seen: HashSet<Permutation> = HashSet::from([id.clone()]);
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            for g in &self.generators {
                let y = x.compose(g);
                if !seen.contains(&y) {
                    if seen.len() >= ENUMERATION_LIMIT {
                        return Err(Error::CapExceeded { order: seen.len() + 1, cap: ENUMERATION_LIMIT });
                    }
                    seen.insert(y.clone());
                    queue.push_back(y);
                }
            }
        }
        let mut all: Vec<Permutation> = seen.into_iter().collect();
        all.sort();
        Ok(self.elements.get_or_init(|| all))
    }

    pub fn order(&self) -> Result<usize> {
        Ok(self.elements()?.len())
    }

    pub fn contains(&self, g: &Permutation) -> Result<bool> {
        Ok(g.degree() == self.degree && self.elements()?.binary_search(g).is_ok())
    }

    /// Order of a member element.
    pub fn element_order(&self, g: &Permutation) -> Result<u64> {
        if !self.contains(g)? {
            return Err(Error::NotAMember);
        }
        Ok(g.order())
    }
}

/// A subgroup of a [`FiniteGroup`], stored as a sorted member list plus a bitset.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subgroup {
    members: Vec<Elem>,
    bits: FixedBitSet,
    witnesses: Vec<Elem>,
}

impl Subgroup {
    fn from_bits(bits: FixedBitSet, witnesses: Vec<Elem>) -> Self {
        let members = bits.ones().map(|i| i as Elem).collect();
        Self { members, bits, witnesses }
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn members(&self) -> &[Elem] {
        &self.members
    }

    pub fn bits(&self) -> &FixedBitSet {
        &self.bits
    }

    /// Elements known to generate this subgroup.
    pub fn witnesses(&self) -> &[Elem] {
        &self.witnesses
    }

    #[inline]
    pub fn contains(&self, x: Elem) -> bool {
        self.bits.contains(x as usize)
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        self.bits.is_subset(&other.bits)
    }

    pub fn is_trivial(&self) -> bool {
        self.members.len() == 1
    }
}

/// A left coset `rep · H`. The representative is the smallest member index.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Coset {
    pub subgroup: usize,
    pub rep: Elem,
    pub members: Vec<Elem>,
}

/// A finite group with its Cayley table, under an order cap.
#[derive(Debug)]
pub struct FiniteGroup {
    perm: PermGroup,
    n: usize,
    mul: Vec<Elem>,
    inv: Vec<Elem>,
    orders: Vec<u32>,
    gens: Vec<Elem>,
    index: HashMap<Permutation, Elem>,
    lattice: OnceLock<SubgroupLattice>,
}

impl FiniteGroup {
    pub fn new(perm: PermGroup) -> Result<Self> {
        Self::with_cap(perm, DEFAULT_ORDER_CAP)
    }

    pub fn with_cap(perm: PermGroup, cap: usize) -> Result<Self> {
        let elements = perm.elements()?;
        let n = elements.len();
        if n > cap {
            return Err(Error::CapExceeded { order: n, cap });
        }
        let index: HashMap<Permutation, Elem> =
            elements.iter().enumerate().map(|(i, p)| (p.clone(), i as Elem)).collect();
        let mut mul = vec![0 as Elem; n * n];
        for (a, pa) in elements.iter().enumerate() {
            for (b, pb) in elements.iter().enumerate() {
                mul[a * n + b] = index[&pa.compose(pb)];
            }
        }
        let inv = elements.iter().map(|p| index[&p.inverse()]).collect();
        let orders = elements.iter().map(|p| p.order() as u32).collect();
        let gens = perm.generators().iter().map(|g| index[g]).collect();
        Ok(Self { perm, n, mul, inv, orders, gens, index, lattice: OnceLock::new() })
    }

    pub fn name(&self) -> &str {
        self.perm.name()
    }

    pub fn perm_group(&self) -> &PermGroup {
        &self.perm
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn identity(&self) -> Elem {
        0
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.mul[a as usize * self.n + b as usize]
    }

    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        self.inv[a as usize]
    }

    /// `a⁻¹ · b`
    #[inline]
    pub fn ldiv(&self, a: Elem, b: Elem) -> Elem {
        self.mul(self.inv(a), b)
    }

    pub fn conjugate(&self, g: Elem, x: Elem) -> Elem {
        self.mul(self.mul(g, x), self.inv(g))
    }

    #[inline]
    pub fn element_order(&self, a: Elem) -> u64 {
        self.orders[a as usize] as u64
    }

    pub fn perm(&self, a: Elem) -> &Permutation {
        // elements() is already materialized by the constructor
        &self.perm.elements().expect("materialized")[a as usize]
    }

    pub fn index_of(&self, p: &Permutation) -> Result<Elem> {
        self.index.get(p).copied().ok_or(Error::NotAMember)
    }

    pub fn elements(&self) -> std::ops::Range<Elem> {
        0..self.n as Elem
    }

    /// Generator indices of the defining permutation generators.
    pub fn generators(&self) -> &[Elem] {
        &self.gens
    }

    pub fn is_abelian(&self) -> bool {
        self.gens.iter().all(|&a| self.gens.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn is_cyclic(&self) -> bool {
        self.orders.iter().any(|&o| o as usize == self.n)
    }

    fn close(&self, mut bits: FixedBitSet, gens: &[Elem]) -> FixedBitSet {
        let mut queue: Vec<Elem> = bits.ones().map(|i| i as Elem).collect();
        while let Some(x) = queue.pop() {
            for &s in gens {
                let y = self.mul(x, s);
                if !bits.put(y as usize) {
                    queue.push(y);
                }
            }
        }
        bits
    }

    /// The subgroup generated by `set` (the trivial subgroup for an empty set).
    pub fn generated_subgroup(&self, set: &[Elem]) -> Subgroup {
        let mut bits = FixedBitSet::with_capacity(self.n);
        bits.insert(0);
        let mut witnesses: Vec<Elem> = set.iter().copied().filter(|&x| x != 0).collect();
        witnesses.sort_unstable();
        witnesses.dedup();
        let bits = self.close(bits, &witnesses);
        Subgroup::from_bits(bits, witnesses)
    }

    /// Joins `h` with one extra element, reusing `h`'s members as the seed.
    pub fn join_element(&self, h: &Subgroup, g: Elem) -> Subgroup {
        if h.contains(g) {
            return h.clone();
        }
        let mut witnesses = h.witnesses.clone();
        witnesses.push(g);
        let bits = self.close(h.bits.clone(), &witnesses);
        Subgroup::from_bits(bits, witnesses)
    }

    pub fn join(&self, a: &Subgroup, b: &Subgroup) -> Subgroup {
        let mut witnesses = a.witnesses.clone();
        witnesses.extend(b.witnesses.iter().copied().filter(|&x| !a.contains(x)));
        let mut bits = a.bits.clone();
        bits.union_with(&b.bits);
        let bits = self.close(bits, &witnesses);
        Subgroup::from_bits(bits, witnesses)
    }

    pub fn whole(&self) -> Subgroup {
        let mut bits = FixedBitSet::with_capacity(self.n);
        bits.insert_range(..);
        Subgroup::from_bits(bits, self.gens.clone())
    }

    pub fn is_whole(&self, h: &Subgroup) -> bool {
        h.order() == self.n
    }

    /// Subgroup from an arbitrary member set; closure is verified.
    pub fn subgroup_from_members(&self, members: &[Elem]) -> Result<Subgroup> {
        let h = self.generated_subgroup(members);
        if h.order() != {
            let mut m = members.to_vec();
            m.sort_unstable();
            m.dedup();
            m.len()
        } {
            return Err(Error::Precondition("member set is not closed under products".into()));
        }
        Ok(h)
    }

    pub fn lattice(&self) -> &SubgroupLattice {
        self.lattice.get_or_init(|| SubgroupLattice::enumerate(self))
    }

    /// `true` when `⟨a, b⟩ = G`. Uses the maximal-subgroup membership masks.
    pub fn generates_pair(&self, a: Elem, b: Elem) -> bool {
        self.lattice().pair_generates(a, b)
    }

    /// Left cosets of `h` (lattice index), in order of their smallest member.
    pub fn left_cosets(&self, subgroup: usize) -> Vec<Coset> {
        let h = &self.lattice().subgroups()[subgroup];
        let mut seen = FixedBitSet::with_capacity(self.n);
        let mut out = Vec::with_capacity(self.n / h.order());
        for x in 0..self.n as Elem {
            if seen.contains(x as usize) {
                continue;
            }
            let mut members: Vec<Elem> = h.members.iter().map(|&m| self.mul(x, m)).collect();
            members.sort_unstable();
            for &m in &members {
                seen.insert(m as usize);
            }
            out.push(Coset { subgroup, rep: x, members });
        }
        out
    }

    /// Every left coset of every proper subgroup, grouped by subgroup in lattice order.
    pub fn proper_cosets(&self) -> Vec<Coset> {
        let lat = self.lattice();
        (0..lat.len()).filter(|&i| i != lat.whole_id()).flat_map(|i| self.left_cosets(i)).collect()
    }

    /// Indices of elements of order `n`.
    pub fn elements_of_order(&self, n: u64) -> Vec<Elem> {
        self.elements().filter(|&x| self.element_order(x) == n).collect()
    }

    /// Derived subgroup of a subgroup.
    pub fn derived_subgroup(&self, h: &Subgroup) -> Subgroup {
        let mut comms = Vec::new();
        let mut bits = FixedBitSet::with_capacity(self.n);
        for &a in &h.members {
            for &b in &h.members {
                let c = self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b));
                if !bits.put(c as usize) {
                    comms.push(c);
                }
            }
        }
        self.generated_subgroup(&comms)
    }

    /// Solvability via the derived series.
    pub fn is_solvable(&self) -> bool {
        let mut h = self.whole();
        loop {
            if h.is_trivial() {
                return true;
            }
            let d = self.derived_subgroup(&h);
            if d.order() == h.order() {
                return false;
            }
            h = d;
        }
    }

    /// Simple (including prime-order cyclic groups); the trivial group is not simple.
    pub fn is_simple(&self) -> bool {
        self.n > 1 && self.lattice().normal_subgroups(self).len() == 2
    }
}
