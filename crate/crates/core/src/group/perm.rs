use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A permutation of `{0, .., degree - 1}` stored as its image list.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Self { images: (0..degree as u32).collect() }
    }

    /// Builds a permutation from an image list, rejecting non-bijections.
    pub fn from_images(images: Vec<u32>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            let i = i as usize;
            if i >= n || seen[i] {
                return Err(Error::InvalidPermutation(format!("{images:?} is not a bijection")));
            }
            seen[i] = true;
        }
        Ok(Self { images })
    }

    /// Builds a permutation of the given degree from 0-based disjoint cycles.
    pub fn from_cycles(degree: usize, cycles: &[Vec<u32>]) -> Result<Self> {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        let mut touched = vec![false; degree];
        for cycle in cycles {
            for (k, &p) in cycle.iter().enumerate() {
                let p = p as usize;
                if p >= degree {
                    return Err(Error::InvalidPermutation(format!("point {} exceeds degree {degree}", p + 1)));
                }
                if touched[p] {
                    return Err(Error::InvalidPermutation(format!("point {} appears in more than one cycle", p + 1)));
                }
                touched[p] = true;
                images[p] = cycle[(k + 1) % cycle.len()];
            }
        }
        Ok(Self { images })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    #[inline]
    pub fn apply(&self, point: u32) -> u32 {
        self.images[point as usize]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i as u32 == j)
    }

    /// Composition `self ∘ other`: apply `other` first, then `self`.
    pub fn compose(&self, other: &Self) -> Self {
        debug_assert_eq!(self.degree(), other.degree());
        Self { images: other.images.iter().map(|&i| self.images[i as usize]).collect() }
    }

    pub fn inverse(&self) -> Self {
        let mut images = vec![0u32; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            images[j as usize] = i as u32;
        }
        Self { images }
    }

    /// Least `m >= 1` with `self^m = id`, the lcm of the cycle lengths.
    pub fn order(&self) -> u64 {
        self.cycles().iter().fold(1u64, |acc, c| num_integer::lcm(acc, c.len() as u64))
    }

    /// Nontrivial cycles, each starting from its smallest point.
    pub fn cycles(&self) -> Vec<Vec<u32>> {
        let mut seen = vec![false; self.images.len()];
        let mut out = Vec::new();
        for start in 0..self.images.len() {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start as u32];
            seen[start] = true;
            let mut p = self.images[start] as usize;
            while p != start {
                seen[p] = true;
                cycle.push(p as u32);
                p = self.images[p] as usize;
            }
            if cycle.len() > 1 {
                out.push(cycle);
            }
        }
        out
    }
}

impl fmt::Display for Permutation {
    /// Disjoint-cycle notation with 1-based points, `()` for the identity.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            write!(f, "(")?;
            for (k, p) in c.iter().enumerate() {
                if k > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", p + 1)?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn cycle_notation_roundtrip() {
        let p = Permutation::from_cycles(5, &[vec![0, 1, 2], vec![3, 4]]).unwrap();
        assert_eq!(p.to_string(), "(1 2 3)(4 5)");
        assert_eq!(p.order(), 6);
        assert!(Permutation::identity(3).is_identity());
        assert_eq!(Permutation::identity(3).to_string(), "()");
    }

    #[test]
    fn rejects_bad_input() {
        assert!(Permutation::from_images(vec![0, 0, 1]).is_err());
        assert!(Permutation::from_cycles(3, &[vec![0, 5]]).is_err());
        assert!(Permutation::from_cycles(3, &[vec![0, 1], vec![1, 2]]).is_err());
    }

    fn perm(n: usize) -> impl Strategy<Value = Permutation> {
        Just((0..n as u32).collect::<Vec<_>>()).prop_shuffle().prop_map(|v| Permutation::from_images(v).unwrap())
    }

    proptest! {
        #[test]
        fn inverse_cancels(p in perm(7)) {
            prop_assert!(p.compose(&p.inverse()).is_identity());
            prop_assert!(p.inverse().compose(&p).is_identity());
        }

        #[test]
        fn composition_is_associative(a in perm(6), b in perm(6), c in perm(6)) {
            prop_assert_eq!(a.compose(&b).compose(&c), a.compose(&b.compose(&c)));
        }

        #[test]
        fn order_kills(p in perm(8)) {
            let mut q = Permutation::identity(8);
            for _ in 0..p.order() { q = q.compose(&p); }
            prop_assert!(q.is_identity());
        }
    }
}
