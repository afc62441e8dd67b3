//! Exact integer homology of finite simplicial complexes.

mod snf;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poset::SimplicialComplex;

pub use snf::{max_abs_entry, smith_normal_form, smith_normal_form_bigint, SNFResult, SparseMatrix};

/// Boundary matrices of a simplicial complex, plus the augmentation.
#[derive(Clone, Debug)]
pub struct ChainComplex {
    face_counts: Vec<usize>,
    /// `boundaries[k]` is `∂_k: C_k → C_{k-1}`; `boundaries[0]` is the augmentation `C_0 → Z`.
    boundaries: Vec<SparseMatrix>,
    truncated_at: Option<usize>,
}

impl ChainComplex {
    pub fn face_counts(&self) -> &[usize] {
        &self.face_counts
    }

    pub fn boundary(&self, k: usize) -> &SparseMatrix {
        &self.boundaries[k]
    }

    /// `-1` for the empty complex.
    pub fn top_dimension(&self) -> isize {
        self.boundaries.len() as isize - 1
    }

    /// Every composite `∂_{k-1} ∘ ∂_k` vanishes (including the augmentation).
    pub fn check_dd_zero(&self) -> Result<()> {
        for k in 1..self.boundaries.len() {
            if !self.boundaries[k - 1].mul(&self.boundaries[k])?.is_zero() {
                return Err(Error::Precondition(format!("boundary composite nonzero in dimension {k}")));
            }
        }
        Ok(())
    }
}

/// Boundary matrices with the alternating sign convention on sorted vertex lists.
pub fn chain_complex(k: &SimplicialComplex) -> Result<ChainComplex> {
    let top = k.dimension();
    let mut boundaries = Vec::new();
    let mut face_counts = Vec::new();
    if top >= 0 {
        let n0 = k.face_count(0);
        face_counts.push(n0);
        boundaries.push(SparseMatrix::from_columns(1, (0..n0).map(|_| vec![(0u32, 1i64)]).collect()));
    }
    let mut buf = Vec::new();
    for d in 1..=top.max(0) as usize {
        if top < 1 {
            break;
        }
        face_counts.push(k.face_count(d));
        let mut cols = Vec::with_capacity(k.face_count(d));
        for f in k.faces(d) {
            let mut col: Vec<(u32, i64)> = Vec::with_capacity(d + 1);
            for skip in 0..=d {
                buf.clear();
                buf.extend(f.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &v)| v));
                let row = k.index_of(&buf).ok_or_else(|| Error::NotClosed(format!("{f:?} lacks facet {buf:?}")))?;
                col.push((row as u32, if skip % 2 == 0 { 1 } else { -1 }));
            }
            col.sort_unstable_by_key(|e| e.0);
            cols.push(col);
        }
        boundaries.push(SparseMatrix::from_columns(k.face_count(d - 1), cols));
    }
    Ok(ChainComplex { face_counts, boundaries, truncated_at: k.truncated_at() })
}

/// Reduced homology ranks and torsion, dimension by dimension.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologySummary {
    /// Top dimension of the complex, `-1` if empty.
    pub dimension: isize,
    pub face_counts: Vec<usize>,
    /// `betti[i]` = rank of reduced `H_i`, for `i = 0..`.
    pub betti: Vec<u64>,
    /// Rank of reduced `H_{-1}`: 1 exactly for the empty complex.
    pub betti_minus_one: u64,
    /// Torsion divisors of reduced `H_i` as decimal strings.
    pub torsion: Vec<Vec<String>>,
    pub euler: i64,
    pub reduced_euler: i64,
    /// Homology is exact through this dimension (lower than `dimension` for truncated complexes).
    pub valid_through: isize,
}

impl HomologySummary {
    /// Reduced ranks indexed from dimension `-1`.
    pub fn rank_list(&self) -> RankList {
        let mut v = vec![self.betti_minus_one];
        v.extend(&self.betti);
        RankList::new(v)
    }

    pub fn rank(&self, i: usize) -> u64 {
        self.betti.get(i).copied().unwrap_or(0)
    }

    pub fn is_torsion_free(&self) -> bool {
        self.torsion.iter().all(Vec::is_empty)
    }

    /// Nonzero reduced ranks as `(dimension, rank)`.
    pub fn nonzero(&self) -> Vec<(isize, u64)> {
        self.rank_list().nonzero()
    }

    /// Alternating sum of the reduced ranks, including dimension `-1`.
    pub fn alternating_rank_sum(&self) -> i64 {
        let mut s = -(self.betti_minus_one as i64);
        for (i, &b) in self.betti.iter().enumerate() {
            s += if i % 2 == 0 { b as i64 } else { -(b as i64) };
        }
        s
    }
}

/// Reduced homology from the Smith forms of consecutive boundaries.
pub fn reduced_homology(k: &SimplicialComplex) -> Result<HomologySummary> {
    let cc = chain_complex(k)?;
    Ok(homology_of(&cc, k.euler_characteristics()))
}

pub fn homology_of(cc: &ChainComplex, (euler, reduced_euler): (i64, i64)) -> HomologySummary {
    let top = cc.boundaries.len();
    let snfs: Vec<SNFResult> = cc.boundaries.par_iter().map(smith_normal_form).collect();
    let rank = |k: usize| snfs.get(k).map_or(0, |s| s.rank);
    let valid_top = match cc.truncated_at {
        // the top boundary above `t` is missing, so H_t is not determined
        Some(t) => t as isize - 1,
        None => top as isize - 1,
    };
    let mut betti = Vec::new();
    let mut torsion = Vec::new();
    for d in 0..top {
        if d as isize > valid_top {
            break;
        }
        let n = cc.face_counts[d];
        betti.push((n - rank(d) - rank(d + 1)) as u64);
        torsion.push(snfs.get(d + 1).map_or(Vec::new(), |s| s.torsion.iter().map(|t| t.to_string()).collect()));
    }
    while betti.last() == Some(&0) && torsion.last().is_some_and(Vec::is_empty) {
        betti.pop();
        torsion.pop();
    }
    HomologySummary {
        dimension: top as isize - 1,
        face_counts: cc.face_counts.clone(),
        betti,
        betti_minus_one: if top == 0 { 1 } else { 0 },
        torsion,
        euler,
        reduced_euler,
        valid_through: valid_top,
    }
}

/// `(χ, χ̃)` from face counts.
pub fn euler_characteristics(k: &SimplicialComplex) -> (i64, i64) {
    k.euler_characteristics()
}

/// Reduced Betti ranks indexed from dimension `-1`, trailing zeros trimmed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankList(Vec<u64>);

impl RankList {
    pub fn new(mut v: Vec<u64>) -> Self {
        while v.len() > 1 && v.last() == Some(&0) {
            v.pop();
        }
        if v.is_empty() {
            v.push(0);
        }
        Self(v)
    }

    /// From ranks of dimensions `0, 1, …` of a nonempty space.
    pub fn from_dims(ranks: &[u64]) -> Self {
        let mut v = vec![0];
        v.extend_from_slice(ranks);
        Self::new(v)
    }

    /// The empty space (join identity).
    pub fn empty() -> Self {
        Self(vec![1])
    }

    /// A contractible space.
    pub fn point() -> Self {
        Self(vec![0])
    }

    /// `S^d` for `d >= -1`.
    pub fn sphere(d: isize) -> Self {
        let mut v = vec![0; (d + 2) as usize];
        v[(d + 1) as usize] = 1;
        Self(v)
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.0
    }

    /// Rank in dimension `d >= -1`.
    pub fn get(&self, d: isize) -> u64 {
        self.0.get((d + 1) as usize).copied().unwrap_or(0)
    }

    pub fn nonzero(&self) -> Vec<(isize, u64)> {
        self.0.iter().enumerate().filter(|(_, &r)| r != 0).map(|(i, &r)| (i as isize - 1, r)).collect()
    }
}

/// `r_k(X * Y) = Σ_{i + j = k - 1} r_i(X) r_j(Y)`.
pub fn join_betti(a: &RankList, b: &RankList) -> RankList {
    let mut v = vec![0u64; a.0.len() + b.0.len()];
    for (i, &x) in a.0.iter().enumerate() {
        for (j, &y) in b.0.iter().enumerate() {
            v[i + j] += x * y;
        }
    }
    RankList::new(v)
}

/// Join with the two-point space.
pub fn suspension_betti(a: &RankList) -> RankList {
    join_betti(a, &RankList::sphere(0))
}

/// Componentwise sum in dimensions `>= 0`; a wedge of nonempty spaces is nonempty.
pub fn wedge_betti(parts: &[RankList]) -> RankList {
    let len = parts.iter().map(|p| p.0.len()).max().unwrap_or(1);
    let mut v = vec![0u64; len];
    for p in parts {
        for (i, &x) in p.0.iter().enumerate().skip(1) {
            v[i] += x;
        }
    }
    RankList::new(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hollow_triangle() -> SimplicialComplex {
        SimplicialComplex::from_facets(3, &[vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap()
    }

    #[test]
    fn edge_boundary() {
        let k = SimplicialComplex::from_facets(2, &[vec![0, 1]]).unwrap();
        let cc = chain_complex(&k).unwrap();
        assert_eq!(cc.boundary(1).triplets(), vec![(0, 0, -1), (1, 0, 1)]);
        cc.check_dd_zero().unwrap();
    }

    #[test]
    fn hollow_triangle_is_a_circle() {
        let k = hollow_triangle();
        let cc = chain_complex(&k).unwrap();
        assert_eq!(smith_normal_form(cc.boundary(1)).rank, 2);
        let h = reduced_homology(&k).unwrap();
        assert_eq!(h.betti, vec![0, 1]);
        assert_eq!(h.reduced_euler, -1);
        assert_eq!(h.alternating_rank_sum(), h.reduced_euler);
    }

    #[test]
    fn point_and_empty() {
        let p = SimplicialComplex::from_facets(1, &[vec![0]]).unwrap();
        let h = reduced_homology(&p).unwrap();
        assert!(h.betti.is_empty());
        assert_eq!(h.betti_minus_one, 0);
        let e = SimplicialComplex::from_facets(0, &[]).unwrap();
        let h = reduced_homology(&e).unwrap();
        assert_eq!(h.betti_minus_one, 1);
        assert_eq!(h.rank_list(), RankList::empty());
        assert_eq!(h.alternating_rank_sum(), h.reduced_euler);
    }

    #[test]
    fn projective_plane_has_torsion() {
        // minimal 6-vertex triangulation of RP^2
        let facets = [
            [0, 1, 2],
            [0, 2, 3],
            [0, 3, 4],
            [0, 4, 5],
            [0, 1, 5],
            [1, 2, 4],
            [2, 3, 5],
            [1, 3, 4],
            [1, 3, 5],
            [2, 4, 5],
        ];
        let facets: Vec<Vec<u32>> = facets.iter().map(|f| f.to_vec()).collect();
        let k = SimplicialComplex::from_facets(6, &facets).unwrap();
        let h = reduced_homology(&k).unwrap();
        assert!(h.nonzero().is_empty());
        assert_eq!(h.torsion.get(1).cloned().unwrap_or_default(), vec!["2".to_string()]);
        assert!(!h.is_torsion_free());
    }

    #[test]
    fn truncated_complex_reports_low_homology_only() {
        // boundary of the 3-simplex, 1-skeleton only
        let full =
            SimplicialComplex::from_facets(4, &[vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]]).unwrap();
        let h = reduced_homology(&full).unwrap();
        assert_eq!(h.nonzero(), vec![(2, 1)]);
        let p = crate::poset::FinitePoset::from_relations(
            (0..3).map(|i| i.to_string()).collect(),
            &[(0, 1), (1, 2)],
            crate::poset::Provenance::Generic,
        )
        .unwrap();
        let sk = crate::poset::order_complex_truncated(&p, Some(1));
        let h = reduced_homology(&sk).unwrap();
        assert_eq!(h.valid_through, 0);
        assert!(h.betti.is_empty());
    }

    #[test]
    fn rank_list_calculus() {
        let s0 = RankList::sphere(0);
        assert_eq!(join_betti(&s0, &s0), RankList::sphere(1));
        assert_eq!(suspension_betti(&RankList::from_dims(&[0, 8])), RankList::from_dims(&[0, 0, 8]));
        let c_s3 = RankList::from_dims(&[0, 8]);
        let c_z5 = RankList::from_dims(&[4]);
        assert_eq!(join_betti(&c_s3, &c_z5).get(2), 32);
        assert_eq!(join_betti(&RankList::empty(), &c_s3), c_s3);
        assert_eq!(
            wedge_betti(&[RankList::sphere(1), RankList::sphere(1), RankList::sphere(2)]),
            RankList::from_dims(&[0, 2, 1])
        );
        assert_eq!(wedge_betti(&[]), RankList::point());
    }
}
