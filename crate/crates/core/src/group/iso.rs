use super::{Elem, FiniteGroup};
use crate::error::Result;

/// A short generating set, chosen greedily from the defining generators.
fn small_generating_set(g: &FiniteGroup) -> Vec<Elem> {
    let mut chosen = Vec::new();
    let mut h = g.generated_subgroup(&[]);
    // largest element orders first, which tends to give fewer generators
    let mut candidates: Vec<Elem> = g.elements().collect();
    candidates.sort_by_key(|&x| std::cmp::Reverse(g.element_order(x)));
    for x in candidates {
        if g.is_whole(&h) {
            break;
        }
        if !h.contains(x) {
            chosen.push(x);
            h = g.join_element(&h, x);
        }
    }
    chosen
}

fn order_profile(g: &FiniteGroup) -> Vec<u64> {
    let mut v: Vec<u64> = g.elements().map(|x| g.element_order(x)).collect();
    v.sort_unstable();
    v
}

/// Extends `gens[i] ↦ images[i]` to a map on all of `g` by breadth-first words,
/// returning it if it is a well-defined bijective homomorphism.
pub(crate) fn extend(g: &FiniteGroup, h: &FiniteGroup, gens: &[Elem], images: &[Elem]) -> Option<Vec<Elem>> {
    let mut phi = vec![u32::MAX; g.order()];
    phi[0] = 0;
    let mut queue = vec![0 as Elem];
    let mut head = 0;
    while head < queue.len() {
        let x = queue[head];
        head += 1;
        for (&s, &t) in gens.iter().zip(images) {
            let y = g.mul(x, s);
            let img = h.mul(phi[x as usize], t);
            match phi[y as usize] {
                u32::MAX => {
                    phi[y as usize] = img;
                    queue.push(y);
                }
                v if v != img => return None,
                _ => {}
            }
        }
    }
    let mut seen = vec![false; h.order()];
    for &v in &phi {
        if v == u32::MAX || std::mem::replace(&mut seen[v as usize], true) {
            return None;
        }
    }
    Some(phi)
}

/// Isomorphism test by generator-image backtracking, pruned by element orders.
pub fn are_isomorphic(g: &FiniteGroup, h: &FiniteGroup) -> bool {
    if g.order() != h.order() || order_profile(g) != order_profile(h) {
        return false;
    }
    if g.is_abelian() != h.is_abelian() {
        return false;
    }
    let gens = small_generating_set(g);
    let candidates: Vec<Vec<Elem>> = gens.iter().map(|&s| h.elements_of_order(g.element_order(s))).collect();
    let mut images = Vec::with_capacity(gens.len());
    fn search(
        g: &FiniteGroup,
        h: &FiniteGroup,
        gens: &[Elem],
        candidates: &[Vec<Elem>],
        images: &mut Vec<Elem>,
    ) -> bool {
        if images.len() == gens.len() {
            return extend(g, h, gens, images).is_some();
        }
        for &c in &candidates[images.len()] {
            images.push(c);
            if search(g, h, gens, candidates, images) {
                return true;
            }
            images.pop();
        }
        false
    }
    search(g, h, &gens, &candidates, &mut images)
}

/// All quotients `G/N` as concrete groups, keyed by order.
fn quotients(g: &FiniteGroup) -> Result<Vec<FiniteGroup>> {
    let lat = g.lattice();
    g.normal_subgroups()
        .into_iter()
        .filter(|&n| n != lat.whole_id())
        .map(|n| {
            let (q, _) = g.quotient_group(lat.get(n))?;
            FiniteGroup::new(q)
        })
        .collect()
}

/// `true` when `H` and `K` have no isomorphic nontrivial quotients.
pub fn is_coprime(h: &FiniteGroup, k: &FiniteGroup) -> Result<bool> {
    let qh = quotients(h)?;
    let qk = quotients(k)?;
    for a in &qh {
        for b in &qk {
            if a.order() == b.order() && are_isomorphic(a, b) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::catalog_group;

    fn group(spec: &str) -> FiniteGroup {
        FiniteGroup::new(catalog_group(spec).unwrap()).unwrap()
    }

    #[test]
    fn isomorphism_examples() {
        assert!(are_isomorphic(&group("cyclic:6"), &group("product:cyclic:2,cyclic:3")));
        assert!(are_isomorphic(&group("sym:3"), &group("dihedral:3")));
        assert!(are_isomorphic(&group("dihedral:2"), &group("elem:2^2")));
        assert!(!are_isomorphic(&group("cyclic:4"), &group("elem:2^2")));
        assert!(!are_isomorphic(&group("dihedral:4"), &group("dicyclic:2")));
        assert!(!are_isomorphic(&group("cyclic:6"), &group("sym:3")));
        assert!(are_isomorphic(&group("sym:4"), &group("sym:4")));
    }

    #[test]
    fn coprimality() {
        assert!(is_coprime(&group("sym:3"), &group("cyclic:5")).unwrap());
        assert!(!is_coprime(&group("cyclic:6"), &group("cyclic:3")).unwrap());
        assert!(is_coprime(&group("alt:5"), &group("cyclic:2")).unwrap());
        assert!(!is_coprime(&group("sym:3"), &group("cyclic:2")).unwrap());
    }
}
