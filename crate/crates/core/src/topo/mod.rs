//! Topology of posets attached to a finite group, with brute-force verifiers.

mod classify;
mod covers;
mod lemmas;
mod posets;
mod predict;
mod zeta;

use std::sync::OnceLock;

use crate::error::Result;
use crate::group::FiniteGroup;
use crate::homology::{reduced_homology, HomologySummary};
use crate::poset::{chain_euler, order_complex_budgeted, quillen_reduce, FinitePoset};

pub use classify::{
    classify_connectivity, coprime_closure_check, hom_inequality_report, mv_rank_bounds, BoundInstance, BoundKind,
    ConnectivityClassification, CoprimeClosure, FreeRankPrediction, InequalityRow, Pi1Status, Verdict,
};
pub use covers::{cover_check, CoverVerdict};
pub use lemmas::{
    coprime_subgroup_check, direct_factors, direct_product_join_check, general_extension_check, product_with_factors,
    quotient_by, semidirect_check, subgroup_group, wedge_decomposition_check, LemmaCheck,
};
pub use posets::{
    coset_family_poset, coset_poset, coset_poset_of, proper_subgroups_of, punctured_coset_poset, punctures_isomorphic,
    reduce_to_maximal_intersections, relative_coset_poset, semidirect_posets, subgroup_family_poset, subgroup_poset,
    subgroup_poset_of, SemidirectPosets, SemidirectStructure,
};
pub use predict::{
    family_membership, is_complemented, is_elementary_abelian, predict_coset_spheres, predict_subgroup_spheres,
    Complemented, FamilyMembership, PosetTarget, SpherePrediction,
};
pub use zeta::{euler_psl_formula, mobius_table, prob_zeta, zeta_report, EulerPslValue, MobiusTable, ZetaReport};

/// How to turn a poset into homology.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HomologyPolicy {
    /// Largest order complex (all dimensions kept) before truncating to a skeleton.
    pub max_faces: usize,
    /// Apply [`quillen_reduce`] first.
    pub reduce: bool,
}

impl Default for HomologyPolicy {
    fn default() -> Self {
        Self { max_faces: 3_000_000, reduce: true }
    }
}

/// Reduced homology of `Δ(P)`; Euler characteristics are exact even when truncated.
pub fn poset_homology(p: &FinitePoset, policy: HomologyPolicy) -> Result<HomologySummary> {
    let reduced;
    let q = if policy.reduce {
        reduced = quillen_reduce(p);
        &reduced
    } else {
        p
    };
    let k = order_complex_budgeted(q, policy.max_faces);
    let mut h = reduced_homology(&k)?;
    if k.truncated_at().is_some() {
        (h.euler, h.reduced_euler) = chain_euler(q);
    }
    Ok(h)
}

/// Lazily computed homology of the standard posets of one group.
pub struct GroupTopology<'g> {
    pub group: &'g FiniteGroup,
    pub policy: HomologyPolicy,
    coset: OnceLock<HomologySummary>,
    subgroup: OnceLock<HomologySummary>,
    punctured: OnceLock<HomologySummary>,
}

impl<'g> GroupTopology<'g> {
    pub fn new(group: &'g FiniteGroup) -> Self {
        Self::with_policy(group, HomologyPolicy::default())
    }

    pub fn with_policy(group: &'g FiniteGroup, policy: HomologyPolicy) -> Self {
        Self { group, policy, coset: OnceLock::new(), subgroup: OnceLock::new(), punctured: OnceLock::new() }
    }

    fn cached(
        cell: &OnceLock<HomologySummary>,
        f: impl FnOnce() -> Result<HomologySummary>,
    ) -> Result<&HomologySummary> {
        if let Some(h) = cell.get() {
            return Ok(h);
        }
        let h = f()?;
        Ok(cell.get_or_init(|| h))
    }

    /// `H̃_*(Δ(C(G)))`.
    pub fn coset_homology(&self) -> Result<&HomologySummary> {
        Self::cached(&self.coset, || poset_homology(&coset_poset(self.group), self.policy))
    }

    /// `H̃_*(Δ(L(G)))`.
    pub fn subgroup_homology(&self) -> Result<&HomologySummary> {
        Self::cached(&self.subgroup, || poset_homology(&subgroup_poset(self.group), self.policy))
    }

    /// `H̃_*(Δ(C(G)_1))`.
    pub fn punctured_homology(&self) -> Result<&HomologySummary> {
        Self::cached(&self.punctured, || {
            poset_homology(&punctured_coset_poset(self.group, self.group.identity())?, self.policy)
        })
    }

    /// Precomputed coset homology, e.g. from a cache.
    pub fn set_coset_homology(&self, h: HomologySummary) {
        let _ = self.coset.set(h);
    }

    pub fn set_subgroup_homology(&self, h: HomologySummary) {
        let _ = self.subgroup.set(h);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::catalog_group;
    use crate::homology::RankList;

    fn group(spec: &str) -> FiniteGroup {
        FiniteGroup::new(catalog_group(spec).unwrap()).unwrap()
    }

    #[test]
    fn coset_homology_matches_predictions() {
        for spec in ["cyclic:4", "cyclic:6", "elem:2^2", "sym:3", "alt:4"] {
            let g = group(spec);
            let t = GroupTopology::new(&g);
            let h = t.coset_homology().unwrap();
            assert!(h.is_torsion_free());
            assert_eq!(h.rank_list(), predict_coset_spheres(&g).unwrap().rank_list(), "{spec}");
        }
    }

    #[test]
    fn subgroup_homology_matches_predictions() {
        for spec in ["cyclic:4", "sym:3", "alt:4", "cyclic:5", "elem:2^2"] {
            let g = group(spec);
            let t = GroupTopology::new(&g);
            let h = t.subgroup_homology().unwrap();
            assert_eq!(h.rank_list(), predict_subgroup_spheres(&g).unwrap().rank_list(), "{spec}");
        }
    }

    #[test]
    fn reduction_and_truncation_keep_low_homology() {
        let g = group("sym:3");
        let c = coset_poset(&g);
        let full = poset_homology(&c, HomologyPolicy { max_faces: usize::MAX, reduce: false }).unwrap();
        let red = poset_homology(&c, HomologyPolicy::default()).unwrap();
        assert_eq!(full.rank_list(), red.rank_list());
        assert_eq!(full.rank_list(), RankList::from_dims(&[0, 8]));
        let a4 = group("alt:4");
        let c = coset_poset(&a4);
        let counts = crate::poset::chain_counts(&c);
        assert_eq!(counts.len(), 3);
        let budget = (counts[0] + counts[1]) as usize;
        let trunc = poset_homology(&c, HomologyPolicy { max_faces: budget, reduce: false }).unwrap();
        let full = poset_homology(&c, HomologyPolicy::default()).unwrap();
        assert_eq!(trunc.valid_through, 0);
        assert_eq!(trunc.reduced_euler, full.reduced_euler);
        assert_eq!(trunc.rank(0), 0);
    }
}
