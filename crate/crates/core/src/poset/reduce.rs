use fixedbitset::FixedBitSet;

use super::{FinitePoset, Provenance};

/// Repeatedly deletes elements `p` whose upper set `P_{>p}` has a minimum.
///
/// Each pass scans the surviving elements by increasing size of their order
/// ideal `P_{≤p}` (ties by index) and deletes removable elements on the spot.
pub fn quillen_reduce(p: &FinitePoset) -> FinitePoset {
    let n = p.len();
    let mut alive = FixedBitSet::with_capacity(n);
    alive.insert_range(..);
    let mut below = vec![1usize; n];
    for i in 0..n {
        for j in p.upper(i).ones() {
            below[j] += 1;
        }
    }
    loop {
        let mut order: Vec<usize> = alive.ones().collect();
        order.sort_by_key(|&i| (below[i], i));
        let mut changed = false;
        for i in order {
            let mut u = p.upper(i).clone();
            u.intersect_with(&alive);
            let Some(m) = u.ones().next() else { continue };
            if p.upper(m).intersection(&u).count() + 1 == u.count_ones(..) {
                alive.set(i, false);
                for j in p.upper(i).ones() {
                    below[j] -= 1;
                }
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    p.restrict(&alive, Provenance::Reduced)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::tests::poset;

    #[test]
    fn chain_collapses() {
        let p = poset(3, &[(0, 1), (1, 2)]);
        assert_eq!(quillen_reduce(&p).len(), 1);
    }

    #[test]
    fn antichain_is_untouched() {
        let p = poset(3, &[]);
        assert_eq!(quillen_reduce(&p).len(), 3);
    }

    #[test]
    fn circle_survives() {
        // four-element crown: a, b < c, d
        let p = poset(4, &[(0, 2), (0, 3), (1, 2), (1, 3)]);
        assert_eq!(quillen_reduce(&p).len(), 4);
    }
}
