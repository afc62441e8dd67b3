use serde::Serialize;

use super::{Elem, FiniteGroup, PermGroup, Permutation, Subgroup};
use crate::error::{Error, Result};

/// A chief series `1 = N_0 ◁ … ◁ N_k = G` with complement counts per factor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChiefSeriesData {
    /// Lattice ids of `N_0, …, N_k`.
    pub series: Vec<usize>,
    pub factor_orders: Vec<usize>,
    /// `c_i` = number of complements of `N_i/N_{i-1}` in `G/N_{i-1}`.
    pub complement_counts: Vec<usize>,
    /// Number of factors with a complement.
    pub complemented: usize,
    /// Series length `k`.
    pub length: usize,
}

#[derive(Clone, Debug)]
pub struct ComplementSet {
    pub normal: usize,
    pub complements: Vec<usize>,
}

impl ComplementSet {
    pub fn count(&self) -> usize {
        self.complements.len()
    }
}

impl FiniteGroup {
    pub fn is_normal(&self, h: &Subgroup) -> bool {
        self.gens.iter().all(|&g| h.witnesses().iter().all(|&x| h.contains(self.conjugate(g, x))))
    }

    /// Lattice ids of all normal subgroups, in lattice order.
    pub fn normal_subgroups(&self) -> Vec<usize> {
        self.lattice().normal_subgroups(self)
    }

    /// All subgroups `K` with `K ∩ N = 1` and `KN = G`.
    pub fn complements(&self, normal: usize) -> Result<ComplementSet> {
        let lat = self.lattice();
        let n = lat.get(normal);
        if !self.is_normal(n) {
            return Err(Error::NotNormal);
        }
        let complements = self.relative_complements(0, normal);
        Ok(ComplementSet { normal, complements })
    }

    /// Subgroups `K ⊇ A` with `K ∩ B = A` and `KB = G`, for `A ⊆ B` both normal.
    ///
    /// These correspond to the complements of `B/A` in `G/A`.
    fn relative_complements(&self, lower: usize, upper: usize) -> Vec<usize> {
        let lat = self.lattice();
        let a = lat.get(lower);
        let b = lat.get(upper);
        let target = self.order() * a.order() / b.order();
        lat.supergroups(lower)
            .filter(|&k| {
                let kk = lat.get(k);
                kk.order() == target && {
                    let mut meet = kk.bits().clone();
                    meet.intersect_with(b.bits());
                    meet.count_ones(..) == a.order()
                }
            })
            .collect()
    }

    /// A chief series, choosing at each step the normal subgroup of least order
    /// (then least lattice index) strictly above the previous term.
    pub fn chief_series(&self) -> ChiefSeriesData {
        let lat = self.lattice();
        let normals = self.normal_subgroups();
        let mut series = vec![lat.trivial_id()];
        let mut current = lat.trivial_id();
        while current != lat.whole_id() {
            let next = normals
                .iter()
                .copied()
                .filter(|&m| m != current && lat.le(current, m))
                .min_by_key(|&m| (lat.get(m).order(), m))
                .expect("G itself is normal");
            series.push(next);
            current = next;
        }
        let mut factor_orders = Vec::new();
        let mut complement_counts = Vec::new();
        for w in series.windows(2) {
            factor_orders.push(lat.get(w[1]).order() / lat.get(w[0]).order());
            complement_counts.push(self.relative_complements(w[0], w[1]).len());
        }
        let complemented = complement_counts.iter().filter(|&&c| c != 0).count();
        let length = series.len() - 1;
        ChiefSeriesData { series, factor_orders, complement_counts, complemented, length }
    }

    /// `G/N` as a permutation group on the left cosets of `N`, with the
    /// projection of every element.
    pub fn quotient_group(&self, normal: &Subgroup) -> Result<(PermGroup, Vec<Permutation>)> {
        if !self.is_normal(normal) {
            return Err(Error::NotNormal);
        }
        let (coset_of, count) = self.coset_labels(normal);
        let reps: Vec<Elem> = {
            let mut reps = vec![u32::MAX; count];
            for x in self.elements() {
                let c = coset_of[x as usize] as usize;
                if reps[c] == u32::MAX {
                    reps[c] = x;
                }
            }
            reps
        };
        let projection: Vec<Permutation> = self
            .elements()
            .map(|g| {
                let images = reps.iter().map(|&r| coset_of[self.mul(g, r) as usize]).collect();
                Permutation::from_images(images).expect("left multiplication permutes cosets")
            })
            .collect();
        let gens = self.generators().iter().map(|&g| projection[g as usize].clone()).collect();
        let name = format!("{}/N{}", self.name(), normal.order());
        Ok((PermGroup::new(name, count, gens)?, projection))
    }

    /// Label of the left coset `xH` for each element `x`, plus the coset count.
    pub fn coset_labels(&self, h: &Subgroup) -> (Vec<u32>, usize) {
        let mut label = vec![u32::MAX; self.order()];
        let mut next = 0u32;
        for x in self.elements() {
            if label[x as usize] != u32::MAX {
                continue;
            }
            for &m in h.members() {
                label[self.mul(x, m) as usize] = next;
            }
            next += 1;
        }
        (label, next as usize)
    }

    /// `Some(N)` for the first proper nontrivial normal subgroup without a complement.
    pub fn uncomplemented_normal(&self) -> Option<usize> {
        let lat = self.lattice();
        self.normal_subgroups()
            .into_iter()
            .filter(|&n| n != lat.trivial_id() && n != lat.whole_id())
            .find(|&n| self.relative_complements(0, n).is_empty())
    }
}
