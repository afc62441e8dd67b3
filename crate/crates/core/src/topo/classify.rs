use serde::Serialize;

use super::lemmas::{direct_factors, subgroup_group};
use super::posets::{coset_poset, subgroup_poset};
use super::predict::{family_membership, predict_coset_spheres, FamilyMembership};
use super::{quotient_by, GroupTopology};
use crate::error::Result;
use crate::group::{is_prime, FiniteGroup};
use crate::homology::HomologySummary;

/// A yes/no verdict with the reason used and, when available, a computed cross-check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub value: bool,
    pub reason: String,
    /// `Some(true)` when a direct computation agrees, `Some(false)` when it disagrees.
    pub verified: Option<bool>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Pi1Status {
    CertifiedTrivial,
    CertifiedNontrivial,
    Inconclusive,
}

/// Free rank of `π_1(L(G))` predicted for `G = H ⋊ K` with `K` in F′ and maximal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FreeRankPrediction {
    /// Lattice id of `H`.
    pub normal: usize,
    /// Complements of `H` that are maximal in `G`.
    pub k: usize,
    /// `o(A)` for `K ≅ A ⋊ Z/p`.
    pub a_order: usize,
    /// `k (1 + o(A))`, as stated.
    pub formula_rank: u64,
    /// `k · (number of complements of A in K)`, the count from the wedge decomposition.
    pub wedge_rank: u64,
    /// Computed rank of `H̃_1(L(G))` (equal to the free rank when `π_1` is free).
    pub computed: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConnectivityClassification {
    pub coset_connected: Verdict,
    pub pi1: Pi1Status,
    /// Every reason supporting the π₁ verdict, each with its witness.
    pub pi1_reasons: Vec<String>,
    /// A certified verdict contradicted by computation.
    pub pi1_conflict: bool,
    pub subgroup_connected: Verdict,
    pub family: FamilyMembership,
    /// Whether the free-rank statement's hypotheses hold.
    pub free_rank_applies: bool,
    pub free_rank: Vec<FreeRankPrediction>,
    pub coset_h0: Option<u64>,
    pub coset_h1: Option<u64>,
    pub subgroup_h1: Option<u64>,
}

fn is_prime_power(n: usize) -> bool {
    if n < 2 {
        return false;
    }
    let p = (2..=n).find(|d| n.is_multiple_of(*d)).expect("n >= 2");
    let mut m = n;
    while m.is_multiple_of(p) {
        m /= p;
    }
    m == 1
}

fn rank_if_valid(h: &HomologySummary, d: isize) -> Option<u64> {
    (h.valid_through >= d || h.valid_through >= h.dimension).then(|| h.rank(d as usize))
}

/// Applies each connectivity criterion and cross-checks it against computed homology.
///
/// With `certify`, non-cyclic groups also get a triangle-propagation attempt on
/// the standard presentation, the only route to a "trivial" verdict.
pub fn classify_connectivity(t: &GroupTopology<'_>, certify: bool) -> Result<ConnectivityClassification> {
    let g = t.group;
    let lat = g.lattice();
    let cyclic = g.is_cyclic();

    let components = coset_poset(g).connected_components().len();
    let coset_connected = Verdict {
        value: !(cyclic && is_prime_power(g.order())),
        reason: "coset poset is connected unless the group is cyclic of prime-power order".into(),
        verified: Some(components == 1),
    };
    let coset_connected = Verdict { verified: Some(coset_connected.value == (components == 1)), ..coset_connected };

    let ch = t.coset_homology()?;
    let coset_h0 = rank_if_valid(ch, 0);
    let coset_h1 = rank_if_valid(ch, 1);
    let l_components = subgroup_poset(g).connected_components().len();
    let sh = t.subgroup_homology()?;
    let subgroup_h1 = rank_if_valid(sh, 1);

    let mut nontrivial = Vec::new();
    if let Some(r) = coset_h1.filter(|&r| r > 0) {
        nontrivial.push(format!("computed H1 of the coset poset has rank {r}"));
    }
    for (h, k) in direct_factors(g) {
        let (hs, ks) = (lat.get(h), lat.get(k));
        let cyc = |s: &crate::group::Subgroup| {
            is_prime_power(s.order()) && s.members().iter().any(|&x| g.element_order(x) as usize == s.order())
        };
        if cyc(hs) && cyc(ks) {
            nontrivial.push(format!(
                "direct product of cyclic prime-power factors of orders {} and {}",
                hs.order(),
                ks.order()
            ));
            break;
        }
    }
    if !cyclic {
        for &m in lat.maximal_subgroups() {
            let ms = lat.get(m);
            let is_cyclic = ms.members().iter().any(|&x| g.element_order(x) as usize == ms.order());
            if is_cyclic && is_prime_power(ms.order()) {
                nontrivial.push(format!("maximal subgroup H{m} is cyclic of prime-power order {}", ms.order()));
                break;
            }
        }
    }
    if l_components > 1 {
        nontrivial.push(format!("subgroup poset has {l_components} components"));
    }
    if let Ok(p) = predict_coset_spheres(g) {
        if p.dimension == 1 && p.count > 0 {
            nontrivial.push(format!("solvable bouquet of {} circles", p.count));
        }
    }

    let mut trivial = Vec::new();
    if certify && !cyclic {
        let pres = crate::pi1::standard_presentation(g)?;
        let prop = crate::pi1::propagate_triviality(&pres);
        if let Some(cert) = prop.certificate {
            if crate::pi1::replay(&pres, &cert).is_ok() {
                trivial.push(format!("triangle propagation certificate with {} steps", cert.steps.len()));
            }
        }
    }

    let (pi1, pi1_reasons, pi1_conflict) = match (trivial.is_empty(), nontrivial.is_empty()) {
        (false, true) => (Pi1Status::CertifiedTrivial, trivial, coset_h1.is_some_and(|r| r > 0)),
        (true, false) => (Pi1Status::CertifiedNontrivial, nontrivial, false),
        (true, true) => (Pi1Status::Inconclusive, Vec::new(), false),
        (false, false) => {
            let mut all = trivial;
            all.extend(nontrivial);
            (Pi1Status::Inconclusive, all, true)
        }
    };

    let family = family_membership(g);
    let simple = g.is_simple();
    let subgroup_connected = if simple {
        Verdict {
            value: l_components <= 1,
            reason: "simple group: decided by computation only".into(),
            verified: Some(true),
        }
    } else {
        let value = !family.in_f_prime;
        Verdict {
            value,
            reason: "non-simple group: subgroup poset is disconnected iff the group is in F'".into(),
            verified: Some(value == (l_components <= 1)),
        }
    };

    let (free_rank_applies, free_rank) = free_rank_predictions(g, &family, subgroup_h1)?;

    Ok(ConnectivityClassification {
        coset_connected,
        pi1,
        pi1_reasons,
        pi1_conflict,
        subgroup_connected,
        family,
        free_rank_applies,
        free_rank,
        coset_h0,
        coset_h1,
        subgroup_h1,
    })
}

fn free_rank_predictions(
    g: &FiniteGroup,
    family: &FamilyMembership,
    computed: Option<u64>,
) -> Result<(bool, Vec<FreeRankPrediction>)> {
    let lat = g.lattice();
    if g.is_simple() || family.in_f {
        return Ok((false, Vec::new()));
    }
    let normals = g.normal_subgroups();
    // exclude S ⋊ Z/p with S simple
    for &s in &normals {
        if s == lat.trivial_id() || s == lat.whole_id() || !is_prime(g.order() as u64 / lat.get(s).order() as u64) {
            continue;
        }
        let sg = subgroup_group(g, s)?;
        if sg.is_simple() && !g.complements(s)?.complements.is_empty() {
            return Ok((false, Vec::new()));
        }
    }
    let maximal = lat.maximal_subgroups();
    let mut out = Vec::new();
    for &h in &normals {
        if h == lat.trivial_id() || h == lat.whole_id() {
            continue;
        }
        let comps = g.complements(h)?.complements;
        let k = comps.iter().filter(|c| maximal.contains(c)).count();
        if k == 0 {
            continue;
        }
        let q = quotient_by(g, h)?;
        let fm = family_membership(&q);
        let Some((a, _, _)) = fm.witness.filter(|_| fm.in_f_prime) else {
            continue;
        };
        let a_order = q.lattice().get(a).order();
        let a_complements = q.complements(a)?.count();
        out.push(FreeRankPrediction {
            normal: h,
            k,
            a_order,
            formula_rank: (k * (1 + a_order)) as u64,
            wedge_rank: (k * a_complements) as u64,
            computed,
        });
    }
    Ok((true, out))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    /// `(p - 1)(G : M)` for a cyclic maximal subgroup of order `p^n`.
    MaximalCyclic,
    /// `n - 1` for `n` components of `L(G)`.
    SubgroupComponents,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundInstance {
    pub kind: BoundKind,
    /// The maximal subgroup, for [`BoundKind::MaximalCyclic`].
    pub subgroup: Option<usize>,
    pub bound: u64,
    pub computed: Option<u64>,
    pub holds: Option<bool>,
}

/// Lower bounds on rank `H̃_1(C(G))`, each paired with the computed rank.
pub fn mv_rank_bounds(t: &GroupTopology<'_>) -> Result<Vec<BoundInstance>> {
    let g = t.group;
    let lat = g.lattice();
    let computed = rank_if_valid(t.coset_homology()?, 1);
    let mut out = Vec::new();
    let mk = |kind, subgroup, bound: u64| BoundInstance {
        kind,
        subgroup,
        bound,
        computed,
        holds: computed.map(|c| c >= bound),
    };
    if !g.is_cyclic() {
        for &m in lat.maximal_subgroups() {
            let ms = lat.get(m);
            let cyclic = ms.members().iter().any(|&x| g.element_order(x) as usize == ms.order());
            if cyclic && is_prime_power(ms.order()) {
                let p = (2..=ms.order()).find(|d| ms.order().is_multiple_of(*d)).expect("order >= 2") as u64;
                out.push(mk(BoundKind::MaximalCyclic, Some(m), (p - 1) * (g.order() / ms.order()) as u64));
            }
        }
    }
    let n = subgroup_poset(g).connected_components().len() as u64;
    out.push(mk(BoundKind::SubgroupComponents, None, n.saturating_sub(1)));
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InequalityRow {
    pub n: usize,
    pub subgroup_rank: Option<u64>,
    pub coset_rank: Option<u64>,
    /// `rank H̃_n(L(G)) ≤ rank H̃_{n+1}(C(G))`.
    pub holds: Option<bool>,
    /// `H̃_n(C(G)_1) = 0`, which yields a surjection `H̃_{n+1}(C) → H̃_n(L)`.
    pub surjection_applies: Option<bool>,
}

pub fn hom_inequality_report(t: &GroupTopology<'_>, n_max: usize) -> Result<Vec<InequalityRow>> {
    let ch = t.coset_homology()?;
    let sh = t.subgroup_homology()?;
    let ph = t.punctured_homology()?;
    Ok((0..=n_max)
        .map(|n| {
            let subgroup_rank = rank_if_valid(sh, n as isize);
            let coset_rank = rank_if_valid(ch, n as isize + 1);
            let holds = match (subgroup_rank, coset_rank) {
                (Some(l), Some(c)) => Some(l <= c),
                _ => None,
            };
            let surjection_applies = rank_if_valid(ph, n as isize)
                .map(|r| r == 0 && ph.torsion.get(n).is_none_or(|t| t.is_empty()) && ph.betti_minus_one == 0);
            InequalityRow { n, subgroup_rank, coset_rank, holds, surjection_applies }
        })
        .collect())
}

/// Inequality rows for `H`, `K` and `H × K` up to `n_max`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoprimeClosure {
    pub factors_hold: bool,
    pub product_holds: bool,
    pub product_rows: Vec<InequalityRow>,
}

fn all_hold(rows: &[InequalityRow]) -> bool {
    rows.iter().all(|r| r.holds == Some(true))
}

/// Coprime factors satisfying the inequality give a product satisfying it.
pub fn coprime_closure_check(h: &FiniteGroup, k: &FiniteGroup, n_max: usize) -> Result<CoprimeClosure> {
    if !crate::group::is_coprime(h, k)? {
        return Err(crate::error::Error::Precondition(format!("{} and {} are not coprime", h.name(), k.name())));
    }
    let factors_hold = all_hold(&hom_inequality_report(&GroupTopology::new(h), n_max)?)
        && all_hold(&hom_inequality_report(&GroupTopology::new(k), n_max)?);
    let (g, _, _) = super::product_with_factors(h, k)?;
    let product_rows = hom_inequality_report(&GroupTopology::new(&g), n_max)?;
    Ok(CoprimeClosure { factors_hold, product_holds: all_hold(&product_rows), product_rows })
}
