//! Homotopy equivalences checked at the level of reduced Betti numbers.

use serde::Serialize;

use super::posets::{
    coset_poset, coset_poset_of, relative_coset_poset, semidirect_posets, subgroup_family_poset, subgroup_poset,
    SemidirectStructure,
};
use super::{poset_homology, HomologyPolicy};
use crate::error::{Error, Result};
use crate::group::{direct_product, is_coprime, FiniteGroup, Permutation};
use crate::homology::{join_betti, suspension_betti, wedge_betti, HomologySummary, RankList};
use crate::poset::{FinitePoset, Provenance};

/// One instance of a homotopy equivalence, compared through reduced Betti numbers.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LemmaCheck {
    pub name: String,
    pub instance: String,
    /// Betti numbers of the left-hand side; `None` when not computed or truncated.
    pub lhs: Option<RankList>,
    pub rhs: Option<RankList>,
    pub holds: Option<bool>,
}

impl LemmaCheck {
    fn new(name: &str, instance: String, lhs: Option<RankList>, rhs: Option<RankList>) -> Self {
        let holds = match (&lhs, &rhs) {
            (Some(a), Some(b)) => Some(a == b),
            _ => None,
        };
        Self { name: name.into(), instance, lhs, rhs, holds }
    }
}

/// Rank list when the summary is exact in every dimension.
fn exact(h: &HomologySummary) -> Option<RankList> {
    (h.valid_through >= h.dimension).then(|| h.rank_list())
}

fn betti(p: &FinitePoset, policy: HomologyPolicy) -> Result<Option<RankList>> {
    Ok(exact(&poset_homology(p, policy)?))
}

fn join(a: Option<RankList>, b: Option<RankList>) -> Option<RankList> {
    Some(join_betti(&a?, &b?))
}

/// `G/N` as a concrete group on the cosets of `N`.
pub fn quotient_by(g: &FiniteGroup, n: usize) -> Result<FiniteGroup> {
    let (q, _) = g.quotient_group(g.lattice().get(n))?;
    FiniteGroup::new(q)
}

/// A subgroup as a permutation group in its own right.
pub fn subgroup_group(g: &FiniteGroup, h: usize) -> Result<FiniteGroup> {
    let s = g.lattice().get(h);
    let gens = s.witnesses().iter().map(|&x| g.perm(x).clone()).collect();
    let pg = crate::group::PermGroup::new(format!("{}:H{h}", g.name()), g.perm_group().degree(), gens)?;
    FiniteGroup::new(pg)
}

/// Unordered pairs `(H, K)` of proper normal subgroups with `H ∩ K = 1` and `HK = G`.
pub fn direct_factors(g: &FiniteGroup) -> Vec<(usize, usize)> {
    let lat = g.lattice();
    let normals: Vec<usize> =
        g.normal_subgroups().into_iter().filter(|&n| n != lat.trivial_id() && n != lat.whole_id()).collect();
    let mut out = Vec::new();
    for (i, &h) in normals.iter().enumerate() {
        for &k in &normals[i + 1..] {
            let (hs, ks) = (lat.get(h), lat.get(k));
            if hs.order() * ks.order() == g.order() && hs.bits().intersection(ks.bits()).count() == 1 {
                out.push((h, k));
            }
        }
    }
    out
}

fn check_proper_nontrivial_normal(g: &FiniteGroup, n: usize) -> Result<()> {
    let lat = g.lattice();
    if n == lat.whole_id() || n == lat.trivial_id() {
        return Err(Error::NotProper);
    }
    if !g.is_normal(lat.get(n)) {
        return Err(Error::NotNormal);
    }
    Ok(())
}

/// `Δ(C(G)) ≃ Δ(C(G/N)) * Δ(C(G, N))`.
pub fn general_extension_check(g: &FiniteGroup, n: usize, policy: HomologyPolicy) -> Result<LemmaCheck> {
    check_proper_nontrivial_normal(g, n)?;
    let q = quotient_by(g, n)?;
    let lhs = betti(&coset_poset(g), policy)?;
    let rhs = join(betti(&coset_poset(&q), policy)?, betti(&relative_coset_poset(g, n)?, policy)?);
    let instance = format!("{} with normal subgroup of order {}", g.name(), g.lattice().get(n).order());
    Ok(LemmaCheck::new("general extension", instance, lhs, rhs))
}

/// `C_0(H ⋊ K) ≃ C_K(H) * C(K)`.
pub fn semidirect_check(
    g: &FiniteGroup,
    normal: usize,
    complement: usize,
    policy: HomologyPolicy,
) -> Result<LemmaCheck> {
    check_proper_nontrivial_normal(g, normal)?;
    let s = SemidirectStructure::new(g, normal, complement)?;
    let sp = semidirect_posets(g, &s);
    let lhs = betti(&sp.non_saturating, policy)?;
    let rhs = join(betti(&sp.invariant_coset_poset, policy)?, betti(&coset_poset_of(g, complement), policy)?);
    let lat = g.lattice();
    let instance = format!(
        "{} = H{normal} ⋊ H{complement} (orders {} and {})",
        g.name(),
        lat.get(normal).order(),
        lat.get(complement).order()
    );
    Ok(LemmaCheck::new("semidirect non-saturating join", instance, lhs, rhs))
}

fn embed(p: &Permutation, offset: usize, degree: usize) -> Permutation {
    let mut images: Vec<u32> = (0..degree as u32).collect();
    for (i, &j) in p.images().iter().enumerate() {
        images[offset + i] = offset as u32 + j;
    }
    Permutation::from_images(images).expect("embedding of a permutation")
}

/// `H × K` with the lattice ids of its two factors.
pub fn product_with_factors(h: &FiniteGroup, k: &FiniteGroup) -> Result<(FiniteGroup, usize, usize)> {
    let (hp, kp) = (h.perm_group(), k.perm_group());
    let name = format!("product:{},{}", h.name(), k.name());
    let g = FiniteGroup::new(direct_product(&[hp.clone(), kp.clone()], name)?)?;
    let degree = hp.degree() + kp.degree();
    let factor = |gens: &[Permutation], offset: usize| -> Result<usize> {
        let elems = gens.iter().map(|p| g.index_of(&embed(p, offset, degree))).collect::<Result<Vec<_>>>()?;
        let s = g.generated_subgroup(&elems);
        Ok(g.lattice().id_of(&s).expect("generated subgroups are in the lattice"))
    };
    let hid = factor(hp.generators(), 0)?;
    let kid = factor(kp.generators(), hp.degree())?;
    Ok((g, hid, kid))
}

/// Both claims for `H × K`: `C_0 ≃ C(H) * C(K)`, and `C(H × K) ≃ C(H) * C(K)` for coprime factors.
///
/// Without `compute_product` only the right-hand sides are computed.
pub fn direct_product_join_check(
    h: &FiniteGroup,
    k: &FiniteGroup,
    policy: HomologyPolicy,
    compute_product: bool,
) -> Result<Vec<LemmaCheck>> {
    if h.order() == 1 || k.order() == 1 {
        return Err(Error::Precondition("factors must be nontrivial".into()));
    }
    let rhs = join(betti(&coset_poset(h), policy)?, betti(&coset_poset(k), policy)?);
    let instance = format!("{} x {}", h.name(), k.name());
    let coprime = is_coprime(h, k)?;
    let (mut c0, mut full) = (None, None);
    if compute_product {
        let (g, hid, kid) = product_with_factors(h, k)?;
        let s = SemidirectStructure::new(&g, hid, kid)?;
        c0 = betti(&semidirect_posets(&g, &s).non_saturating, policy)?;
        if coprime {
            full = betti(&coset_poset(&g), policy)?;
        }
    }
    let mut out = vec![LemmaCheck::new("direct product non-saturating join", instance.clone(), c0, rhs.clone())];
    if coprime {
        out.push(LemmaCheck::new("coprime direct product join", instance, full, rhs));
    }
    Ok(out)
}

/// `L(H × K) ≃ Susp(L(H) * L(K))` for coprime `H`, `K`.
pub fn coprime_subgroup_check(h: &FiniteGroup, k: &FiniteGroup, policy: HomologyPolicy) -> Result<LemmaCheck> {
    if !is_coprime(h, k)? {
        return Err(Error::Precondition(format!("{} and {} are not coprime", h.name(), k.name())));
    }
    let (g, _, _) = product_with_factors(h, k)?;
    let lhs = betti(&subgroup_poset(&g), policy)?;
    let rhs =
        join(betti(&subgroup_poset(h), policy)?, betti(&subgroup_poset(k), policy)?).map(|r| suspension_betti(&r));
    Ok(LemmaCheck::new("coprime subgroup suspension", format!("{} x {}", h.name(), k.name()), lhs, rhs))
}

/// `L(G) ≃ ⋁_{H ∈ N^⊥} Susp(L(G/N) * L_H(N))`.
pub fn wedge_decomposition_check(g: &FiniteGroup, n: usize, policy: HomologyPolicy) -> Result<LemmaCheck> {
    check_proper_nontrivial_normal(g, n)?;
    let lat = g.lattice();
    let q = quotient_by(g, n)?;
    let lq = betti(&subgroup_poset(&q), policy)?;
    let mut parts = Some(Vec::new());
    for c in g.complements(n)?.complements {
        let s = SemidirectStructure::new(g, n, c)?;
        let inv: Vec<usize> =
            s.invariant_subgroups(g).into_iter().filter(|&i| i != n && i != lat.trivial_id()).collect();
        let lk = betti(&subgroup_family_poset(g, &inv, Provenance::Invariant), policy)?;
        parts = parts.zip(join(lq.clone(), lk)).map(|(mut v, j)| {
            v.push(suspension_betti(&j));
            v
        });
    }
    let rhs = parts.map(|v| wedge_betti(&v));
    let lhs = betti(&subgroup_poset(g), policy)?;
    let instance = format!("{} with normal subgroup of order {}", g.name(), lat.get(n).order());
    Ok(LemmaCheck::new("subgroup wedge decomposition", instance, lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::catalog_group;

    fn group(spec: &str) -> FiniteGroup {
        FiniteGroup::new(catalog_group(spec).unwrap()).unwrap()
    }

    fn normal_of_order(g: &FiniteGroup, n: usize) -> usize {
        let lat = g.lattice();
        g.normal_subgroups().into_iter().find(|&i| lat.get(i).order() == n).unwrap()
    }

    fn policy() -> HomologyPolicy {
        HomologyPolicy::default()
    }

    #[test]
    fn general_extension_instances() {
        for (spec, n) in [("sym:3", 3), ("alt:4", 4), ("sym:4", 12), ("cyclic:6", 2)] {
            let g = group(spec);
            let c = general_extension_check(&g, normal_of_order(&g, n), policy()).unwrap();
            assert_eq!(c.holds, Some(true), "{c:?}");
        }
        let a4 = group("alt:4");
        let c = general_extension_check(&a4, normal_of_order(&a4, 4), policy()).unwrap();
        assert_eq!(c.lhs, Some(RankList::from_dims(&[0, 30])));
    }

    #[test]
    fn semidirect_instances() {
        let s3 = group("sym:3");
        let lat = s3.lattice();
        let a3 = normal_of_order(&s3, 3);
        let z2 = s3.complements(a3).unwrap().complements[0];
        let c = semidirect_check(&s3, a3, z2, policy()).unwrap();
        assert_eq!(c.holds, Some(true), "{c:?}");
        assert!(lat.get(z2).order() == 2);
    }

    #[test]
    fn direct_product_join_instances() {
        let s3 = group("sym:3");
        let z5 = group("cyclic:5");
        let checks = direct_product_join_check(&s3, &z5, policy(), true).unwrap();
        assert_eq!(checks.len(), 2);
        for c in &checks {
            assert_eq!(c.holds, Some(true), "{c:?}");
            assert_eq!(c.rhs, Some(RankList::from_dims(&[0, 0, 32])));
        }
        // Z2 x Z2 is not coprime; only the first claim applies
        let z2 = group("cyclic:2");
        let checks = direct_product_join_check(&z2, &z2, policy(), true).unwrap();
        assert_eq!(checks.len(), 1);
        assert_eq!(checks[0].holds, Some(true));
    }

    #[test]
    fn coprime_subgroup_instance() {
        let c = coprime_subgroup_check(&group("sym:3"), &group("cyclic:5"), policy()).unwrap();
        assert_eq!(c.holds, Some(true));
        assert_eq!(c.lhs, Some(RankList::from_dims(&[0, 3])));
        assert!(coprime_subgroup_check(&group("cyclic:2"), &group("cyclic:4"), policy()).is_err());
    }

    #[test]
    fn wedge_instances() {
        for (spec, n) in [("sym:3", 3), ("alt:4", 4), ("sym:4", 4), ("cyclic:6", 3), ("product:sym:3,cyclic:5", 5)] {
            let g = group(spec);
            let c = wedge_decomposition_check(&g, normal_of_order(&g, n), policy()).unwrap();
            assert_eq!(c.holds, Some(true), "{c:?}");
        }
        // Z4 over Z2 has no complement: L(Z4) is contractible
        let z4 = group("cyclic:4");
        let c = wedge_decomposition_check(&z4, normal_of_order(&z4, 2), policy()).unwrap();
        assert_eq!(c.rhs, Some(RankList::point()));
        assert_eq!(c.holds, Some(true));
    }

    #[test]
    fn factors_and_quotients() {
        let g = group("cyclic:6");
        let f = direct_factors(&g);
        assert_eq!(f.len(), 1);
        let q = quotient_by(&g, normal_of_order(&g, 2)).unwrap();
        assert_eq!(q.order(), 3);
        let s3 = group("sym:3");
        assert!(direct_factors(&s3).is_empty());
        let h = subgroup_group(&s3, normal_of_order(&s3, 3)).unwrap();
        assert!(h.is_cyclic());
    }
}
