use std::fmt::Write as _;

use serde::Serialize;

use super::FinitePoset;
use crate::error::{Error, Result};

/// A finite simplicial complex on vertices `0..vertex_count`.
///
/// Faces of dimension `d` are stored flat (`d + 1` sorted vertices each) in
/// lexicographic order, so a facet lookup is a binary search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    vertex_count: usize,
    faces: Vec<Vec<u32>>,
    /// `Some(t)`: faces above dimension `t` were not generated.
    truncated_at: Option<usize>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct FaceCounts {
    pub by_dimension: Vec<usize>,
    pub truncated_at: Option<usize>,
}

impl SimplicialComplex {
    /// Takes faces per dimension (each face sorted); sorts, dedups and checks closure.
    pub fn from_faces(
        vertex_count: usize,
        mut by_dim: Vec<Vec<Vec<u32>>>,
        truncated_at: Option<usize>,
    ) -> Result<Self> {
        while by_dim.last().is_some_and(|v| v.is_empty()) {
            by_dim.pop();
        }
        let mut faces = Vec::with_capacity(by_dim.len());
        for (d, mut list) in by_dim.into_iter().enumerate() {
            for f in &list {
                if f.len() != d + 1
                    || f.windows(2).any(|w| w[0] >= w[1])
                    || f.iter().any(|&v| v as usize >= vertex_count)
                {
                    return Err(Error::NotClosed(format!(
                        "face {f:?} is not a sorted {d}-simplex on {vertex_count} vertices"
                    )));
                }
            }
            list.sort_unstable();
            list.dedup();
            faces.push(list.into_iter().flatten().collect());
        }
        let k = Self { vertex_count, faces, truncated_at };
        k.check_closed()?;
        Ok(k)
    }

    /// The closure of a list of facets.
    pub fn from_facets(vertex_count: usize, facets: &[Vec<u32>]) -> Result<Self> {
        let top = facets.iter().map(|f| f.len()).max().unwrap_or(0);
        let mut by_dim: Vec<Vec<Vec<u32>>> = vec![Vec::new(); top];
        for f in facets {
            let mut f = f.clone();
            f.sort_unstable();
            f.dedup();
            let n = f.len();
            if n > 24 {
                return Err(Error::Precondition("facet too large to expand".into()));
            }
            for mask in 1u32..(1 << n) {
                let sub: Vec<u32> = (0..n).filter(|&i| mask >> i & 1 == 1).map(|i| f[i]).collect();
                by_dim[sub.len() - 1].push(sub);
            }
        }
        Self::from_faces(vertex_count, by_dim, None)
    }

    /// Faces already sorted per dimension and known to be closed.
    pub(crate) fn from_sorted_flat(vertex_count: usize, mut faces: Vec<Vec<u32>>, truncated_at: Option<usize>) -> Self {
        while faces.last().is_some_and(|v| v.is_empty()) {
            faces.pop();
        }
        let k = Self { vertex_count, faces, truncated_at };
        debug_assert!(k.check_closed().is_ok());
        k
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    /// Top dimension, `-1` for the empty complex.
    pub fn dimension(&self) -> isize {
        self.faces.len() as isize - 1
    }

    pub fn truncated_at(&self) -> Option<usize> {
        self.truncated_at
    }

    pub fn face_count(&self, d: usize) -> usize {
        self.faces.get(d).map_or(0, |f| f.len() / (d + 1))
    }

    pub fn total_faces(&self) -> usize {
        (0..self.faces.len()).map(|d| self.face_count(d)).sum()
    }

    pub fn face_counts(&self) -> FaceCounts {
        FaceCounts {
            by_dimension: (0..self.faces.len()).map(|d| self.face_count(d)).collect(),
            truncated_at: self.truncated_at,
        }
    }

    pub fn faces(&self, d: usize) -> impl ExactSizeIterator<Item = &[u32]> {
        let flat: &[u32] = self.faces.get(d).map_or(&[], |f| f.as_slice());
        flat.chunks_exact(d + 1)
    }

    pub fn face(&self, d: usize, i: usize) -> &[u32] {
        &self.faces[d][i * (d + 1)..(i + 1) * (d + 1)]
    }

    /// Index of a sorted face of dimension `face.len() - 1`.
    pub fn index_of(&self, face: &[u32]) -> Option<usize> {
        let d = face.len().checked_sub(1)?;
        let n = self.face_count(d);
        let (mut lo, mut hi) = (0, n);
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.face(d, mid).cmp(face) {
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => hi = mid,
                std::cmp::Ordering::Equal => return Some(mid),
            }
        }
        None
    }

    /// Every codimension-1 face of every face is present.
    pub fn check_closed(&self) -> Result<()> {
        let mut buf = Vec::new();
        for d in 1..self.faces.len() {
            for f in self.faces(d) {
                for skip in 0..=d {
                    buf.clear();
                    buf.extend(f.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &v)| v));
                    if self.index_of(&buf).is_none() {
                        return Err(Error::NotClosed(format!("{f:?} lacks facet {buf:?}")));
                    }
                }
            }
        }
        Ok(())
    }

    /// `(χ, χ̃)` from face counts.
    pub fn euler_characteristics(&self) -> (i64, i64) {
        let chi: i64 = (0..self.faces.len())
            .map(|d| if d % 2 == 0 { self.face_count(d) as i64 } else { -(self.face_count(d) as i64) })
            .sum();
        (chi, chi - 1)
    }

    /// Text form: `dim <d> <count>` then one face per line.
    pub fn to_text(&self) -> String {
        let mut s = format!("vertices {}\n", self.vertex_count);
        for d in 0..self.faces.len() {
            let _ = writeln!(s, "dim {d} {}", self.face_count(d));
            for f in self.faces(d) {
                let line: Vec<String> = f.iter().map(|v| v.to_string()).collect();
                let _ = writeln!(s, "{}", line.join(" "));
            }
        }
        s
    }
}

/// Chains of `P` of length at most `max_dim + 1`.
pub fn order_complex_truncated(p: &FinitePoset, max_dim: Option<usize>) -> SimplicialComplex {
    let n = p.len();
    let mut faces: Vec<Vec<u32>> = Vec::new();
    let mut chain: Vec<u32> = Vec::new();
    let mut truncated = false;
    fn dfs(
        p: &FinitePoset,
        chain: &mut Vec<u32>,
        faces: &mut Vec<Vec<u32>>,
        max_dim: Option<usize>,
        truncated: &mut bool,
    ) {
        let d = chain.len() - 1;
        if faces.len() <= d {
            faces.push(Vec::new());
        }
        faces[d].extend_from_slice(chain);
        let last = *chain.last().expect("nonempty") as usize;
        if max_dim.is_some_and(|m| d >= m) {
            if !p.upper(last).is_clear() {
                *truncated = true;
            }
            return;
        }
        for nxt in p.upper(last).ones() {
            chain.push(nxt as u32);
            dfs(p, chain, faces, max_dim, truncated);
            chain.pop();
        }
    }
    for v in 0..n {
        chain.push(v as u32);
        dfs(p, &mut chain, &mut faces, max_dim, &mut truncated);
        chain.pop();
    }
    // DFS emits each dimension in lexicographic order already
    for (d, f) in faces.iter_mut().enumerate() {
        let mut chunks: Vec<&[u32]> = f.chunks_exact(d + 1).collect();
        if chunks.windows(2).any(|w| w[0] > w[1]) {
            chunks.sort_unstable();
            *f = chunks.concat();
        }
    }
    SimplicialComplex::from_sorted_flat(n, faces, if truncated { max_dim } else { None })
}

/// The order complex `Δ(P)`: one face per nonempty chain.
pub fn order_complex(p: &FinitePoset) -> SimplicialComplex {
    order_complex_truncated(p, None)
}

/// Number of chains of each dimension, without building them (saturating).
pub fn chain_counts(p: &FinitePoset) -> Vec<u64> {
    let n = p.len();
    // ending[x][d]: chains of dimension d whose top is x
    let mut ending: Vec<Vec<u64>> = vec![vec![1]; n];
    let mut totals: Vec<u64> = Vec::new();
    for x in 0..n {
        let row = std::mem::take(&mut ending[x]);
        if totals.len() < row.len() {
            totals.resize(row.len(), 0);
        }
        for (d, &c) in row.iter().enumerate() {
            totals[d] = totals[d].saturating_add(c);
        }
        for y in p.upper(x).ones() {
            let target = &mut ending[y];
            if target.len() < row.len() + 1 {
                target.resize(row.len() + 1, 0);
            }
            for (d, &c) in row.iter().enumerate() {
                target[d + 1] = target[d + 1].saturating_add(c);
            }
        }
        ending[x] = row;
    }
    totals
}

/// `(χ, χ̃)` of `Δ(P)` from the signed chain recursion `f(x) = 1 - Σ_{y<x} f(y)`.
pub fn chain_euler(p: &FinitePoset) -> (i64, i64) {
    let n = p.len();
    let mut below = vec![0i64; n];
    let mut chi = 0i64;
    for x in 0..n {
        let f = 1 - below[x];
        chi += f;
        for y in p.upper(x).ones() {
            below[y] += f;
        }
    }
    (chi, chi - 1)
}

/// `Δ(P)` truncated at the largest dimension whose skeleton has at most `max_faces` faces.
pub fn order_complex_budgeted(p: &FinitePoset, max_faces: usize) -> SimplicialComplex {
    let counts = chain_counts(p);
    let mut total = 0u64;
    let mut keep = 0usize;
    for (d, &c) in counts.iter().enumerate() {
        total = total.saturating_add(c);
        if total > max_faces as u64 && d > 0 {
            break;
        }
        keep = d + 1;
    }
    if keep >= counts.len() {
        order_complex(p)
    } else {
        order_complex_truncated(p, Some(keep - 1))
    }
}
