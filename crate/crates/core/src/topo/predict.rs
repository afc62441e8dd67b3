use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{is_prime, FiniteGroup, Subgroup};
use crate::homology::RankList;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PosetTarget {
    CosetPoset,
    SubgroupPoset,
}

/// A predicted bouquet of equidimensional spheres.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpherePrediction {
    pub target: PosetTarget,
    /// Sphere dimension; `-1` means the empty space (one `(-1)`-sphere).
    pub dimension: isize,
    pub count: u64,
    /// Some complement count vanished, so the poset is contractible.
    pub contractible: bool,
    pub complement_counts: Vec<usize>,
    pub factor_orders: Vec<usize>,
}

impl SpherePrediction {
    /// Reduced Betti ranks from dimension `-1`.
    pub fn rank_list(&self) -> RankList {
        if self.contractible || self.count == 0 {
            return RankList::point();
        }
        let mut v = vec![0u64; (self.dimension + 2) as usize];
        v[(self.dimension + 1) as usize] = self.count;
        RankList::new(v)
    }
}

/// Bouquet of `|Π(c_i |N_i/N_{i-1}| - 1)|` spheres of dimension `d - 1`, `d = #{i : c_i ≠ 0}`.
pub fn predict_coset_spheres(g: &FiniteGroup) -> Result<SpherePrediction> {
    if !g.is_solvable() {
        return Err(Error::NotSolvable);
    }
    let cs = g.chief_series();
    let mut prod: i128 = 1;
    for (&c, &f) in cs.complement_counts.iter().zip(&cs.factor_orders) {
        prod *= c as i128 * f as i128 - 1;
    }
    Ok(SpherePrediction {
        target: PosetTarget::CosetPoset,
        dimension: cs.complemented as isize - 1,
        count: prod.unsigned_abs() as u64,
        contractible: false,
        complement_counts: cs.complement_counts,
        factor_orders: cs.factor_orders,
    })
}

/// Bouquet of `Π c_i` spheres of dimension `d(G) - 2`; contractible when some `c_i = 0`.
pub fn predict_subgroup_spheres(g: &FiniteGroup) -> Result<SpherePrediction> {
    if !g.is_solvable() {
        return Err(Error::NotSolvable);
    }
    let cs = g.chief_series();
    let count: u64 = cs.complement_counts.iter().map(|&c| c as u64).product();
    Ok(SpherePrediction {
        target: PosetTarget::SubgroupPoset,
        dimension: cs.length as isize - 2,
        count,
        contractible: count == 0,
        complement_counts: cs.complement_counts,
        factor_orders: cs.factor_orders,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Complemented {
    pub complemented: bool,
    /// A proper nontrivial normal subgroup with no complement.
    pub witness: Option<usize>,
}

pub fn is_complemented(g: &FiniteGroup) -> Complemented {
    let witness = g.uncomplemented_normal();
    Complemented { complemented: witness.is_none(), witness }
}

/// Membership in the family of groups `A ⋊ Z/p` with `A` elementary abelian and
/// no proper nontrivial `Z/p`-invariant subgroup of `A`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyMembership {
    pub in_f: bool,
    /// `A` nontrivial.
    pub in_f_prime: bool,
    /// `(A, complement, p)` as lattice ids and the prime.
    pub witness: Option<(usize, usize, u64)>,
}

pub fn is_elementary_abelian(g: &FiniteGroup, h: &Subgroup) -> bool {
    let members = h.members();
    let abelian = members.iter().all(|&a| members.iter().all(|&b| g.mul(a, b) == g.mul(b, a)));
    let mut orders = members.iter().map(|&x| g.element_order(x)).filter(|&o| o != 1);
    let first = orders.next();
    abelian && first.is_none_or(|q| is_prime(q) && orders.all(|o| o == q))
}

pub fn family_membership(g: &FiniteGroup) -> FamilyMembership {
    let lat = g.lattice();
    let normals = g.normal_subgroups();
    let mut found: Option<(usize, usize, u64)> = None;
    for &a in &normals {
        if a == lat.whole_id() {
            continue;
        }
        let asub = lat.get(a);
        let p = (g.order() / asub.order()) as u64;
        if !is_prime(p) || !is_elementary_abelian(g, asub) {
            continue;
        }
        // for abelian normal A with G = AK, K-invariant subgroups of A are the normal ones
        let minimal =
            a == lat.trivial_id() || !normals.iter().any(|&m| m != a && m != lat.trivial_id() && lat.le(m, a));
        if !minimal {
            continue;
        }
        let comp = (0..lat.len()).find(|&k| {
            let ks = lat.get(k);
            ks.order() as u64 == p && ks.bits().intersection(asub.bits()).count() == 1
        });
        if let Some(k) = comp {
            let better = match found {
                None => true,
                // prefer a nontrivial A
                Some((fa, _, _)) => fa == lat.trivial_id() && a != lat.trivial_id(),
            };
            if better {
                found = Some((a, k, p));
            }
        }
    }
    FamilyMembership {
        in_f: found.is_some(),
        in_f_prime: found.is_some_and(|(a, _, _)| a != lat.trivial_id()),
        witness: found,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::catalog_group;

    fn group(spec: &str) -> FiniteGroup {
        FiniteGroup::new(catalog_group(spec).unwrap()).unwrap()
    }

    #[test]
    fn coset_predictions() {
        let p = predict_coset_spheres(&group("sym:3")).unwrap();
        assert_eq!((p.dimension, p.count), (1, 8));
        let p = predict_coset_spheres(&group("elem:2^2")).unwrap();
        assert_eq!((p.dimension, p.count), (1, 3));
        let p = predict_coset_spheres(&group("product:sym:3,cyclic:5")).unwrap();
        assert_eq!((p.dimension, p.count), (2, 32));
        let p = predict_coset_spheres(&group("cyclic:4")).unwrap();
        assert_eq!((p.dimension, p.count), (0, 1));
        assert_eq!(p.rank_list(), RankList::from_dims(&[1]));
        assert!(matches!(predict_coset_spheres(&group("alt:5")), Err(Error::NotSolvable)));
    }

    #[test]
    fn subgroup_predictions() {
        let p = predict_subgroup_spheres(&group("sym:3")).unwrap();
        assert_eq!((p.dimension, p.count, p.contractible), (0, 3, false));
        let p = predict_subgroup_spheres(&group("cyclic:4")).unwrap();
        assert!(p.contractible);
        assert_eq!(p.rank_list(), RankList::point());
        let p = predict_subgroup_spheres(&group("alt:4")).unwrap();
        assert_eq!((p.dimension, p.count), (0, 4));
        let p = predict_subgroup_spheres(&group("cyclic:5")).unwrap();
        assert_eq!(p.rank_list(), RankList::empty());
    }

    #[test]
    fn complemented() {
        let z4 = group("cyclic:4");
        let c = is_complemented(&z4);
        assert!(!c.complemented);
        assert_eq!(z4.lattice().get(c.witness.unwrap()).order(), 2);
        assert!(is_complemented(&group("sym:3")).complemented);
        assert!(is_complemented(&group("cyclic:6")).complemented);
    }

    #[test]
    fn families() {
        for (spec, f, fp) in [
            ("sym:3", true, true),
            ("alt:4", true, true),
            ("elem:2^2", true, true),
            ("cyclic:6", true, true),
            ("cyclic:2", true, false),
            ("cyclic:4", false, false),
            ("sym:4", false, false),
            ("dihedral:4", false, false),
            ("alt:5", false, false),
        ] {
            let m = family_membership(&group(spec));
            assert_eq!((m.in_f, m.in_f_prime), (f, fp), "{spec}");
        }
    }
}
