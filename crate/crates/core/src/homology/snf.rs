//! Smith normal form of sparse integer matrices.
//!
//! Unit pivots are eliminated first with Markowitz-style pivot choice (fewest
//! entries in the pivot row and column). Each step is a unimodular column
//! update, so no fractions appear. Machine arithmetic is checked; on overflow the
//! elimination restarts over arbitrary-precision integers. Whatever is left
//! without a unit entry goes through a dense gcd-based reduction.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// A sparse integer matrix in compressed-column form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    col_ptr: Vec<usize>,
    row_idx: Vec<u32>,
    vals: Vec<i64>,
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, col_ptr: vec![0; cols + 1], row_idx: Vec::new(), vals: Vec::new() }
    }

    /// From `(row, col, value)` triplets; duplicates are summed, zeros dropped.
    pub fn from_triplets(rows: usize, cols: usize, triplets: &[(u32, u32, i64)]) -> Result<Self> {
        let mut t: Vec<(u32, u32, i64)> = triplets.to_vec();
        if let Some(&(r, c, _)) = t.iter().find(|&&(r, c, _)| r as usize >= rows || c as usize >= cols) {
            return Err(Error::Parse(format!("entry ({r}, {c}) outside {rows}x{cols}")));
        }
        t.sort_unstable_by_key(|&(r, c, _)| (c, r));
        let mut cols_v: Vec<Vec<(u32, i64)>> = vec![Vec::new(); cols];
        for (r, c, v) in t {
            let col = &mut cols_v[c as usize];
            match col.last_mut() {
                Some(last) if last.0 == r => {
                    last.1 = last.1.checked_add(v).ok_or_else(|| Error::Parse("entry overflow".into()))?
                }
                _ => col.push((r, v)),
            }
        }
        for col in &mut cols_v {
            col.retain(|&(_, v)| v != 0);
        }
        Ok(Self::from_columns(rows, cols_v))
    }

    /// From sorted columns of `(row, value)` with nonzero values.
    pub fn from_columns(rows: usize, columns: Vec<Vec<(u32, i64)>>) -> Self {
        let cols = columns.len();
        let mut col_ptr = Vec::with_capacity(cols + 1);
        col_ptr.push(0);
        let nnz = columns.iter().map(Vec::len).sum();
        let mut row_idx = Vec::with_capacity(nnz);
        let mut vals = Vec::with_capacity(nnz);
        for col in columns {
            for (r, v) in col {
                row_idx.push(r);
                vals.push(v);
            }
            col_ptr.push(row_idx.len());
        }
        Self { rows, cols, col_ptr, row_idx, vals }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn column(&self, c: usize) -> impl Iterator<Item = (u32, i64)> + '_ {
        let (a, b) = (self.col_ptr[c], self.col_ptr[c + 1]);
        self.row_idx[a..b].iter().copied().zip(self.vals[a..b].iter().copied())
    }

    pub fn triplets(&self) -> Vec<(u32, u32, i64)> {
        (0..self.cols).flat_map(|c| self.column(c).map(move |(r, v)| (r, c as u32, v))).collect()
    }

    pub fn transpose(&self) -> Self {
        let t: Vec<(u32, u32, i64)> = self.triplets().into_iter().map(|(r, c, v)| (c, r, v)).collect();
        Self::from_triplets(self.cols, self.rows, &t).expect("in range")
    }

    /// `self · other` (used for the `∂∂ = 0` check).
    pub fn mul(&self, other: &SparseMatrix) -> Result<SparseMatrix> {
        if self.cols != other.rows {
            return Err(Error::Precondition(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut acc: Vec<i64> = vec![0; self.rows];
        let mut touched: Vec<u32> = Vec::new();
        let mut out = Vec::with_capacity(other.cols);
        for c in 0..other.cols {
            for (k, v) in other.column(c) {
                for (r, w) in self.column(k as usize) {
                    if acc[r as usize] == 0 {
                        touched.push(r);
                    }
                    acc[r as usize] += v * w;
                }
            }
            touched.sort_unstable();
            let col: Vec<(u32, i64)> =
                touched.iter().filter(|&&r| acc[r as usize] != 0).map(|&r| (r, acc[r as usize])).collect();
            for &r in &touched {
                acc[r as usize] = 0;
            }
            touched.clear();
            out.push(col);
        }
        Ok(Self::from_columns(self.rows, out))
    }

    pub fn is_zero(&self) -> bool {
        self.vals.is_empty()
    }

    /// `rows cols nnz` then one `i j v` line per entry.
    pub fn to_triplet_text(&self) -> String {
        let mut s = format!("{} {} {}\n", self.rows, self.cols, self.nnz());
        for (r, c, v) in self.triplets() {
            let _ = writeln!(s, "{r} {c} {v}");
        }
        s
    }

    pub fn from_triplet_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| Error::Parse("empty matrix text".into()))?;
        let nums = |l: &str| -> Result<Vec<i64>> {
            l.split_whitespace()
                .map(|t| t.parse::<i64>().map_err(|_| Error::Parse(format!("bad number `{t}`"))))
                .collect()
        };
        let h = nums(header)?;
        if h.len() != 3 || h.iter().any(|&x| x < 0) {
            return Err(Error::Parse("header must be `rows cols nnz`".into()));
        }
        let mut t = Vec::new();
        for l in lines {
            let e = nums(l)?;
            if e.len() != 3 || e[0] < 0 || e[1] < 0 {
                return Err(Error::Parse(format!("bad entry line `{l}`")));
            }
            t.push((e[0] as u32, e[1] as u32, e[2]));
        }
        if t.len() != h[2] as usize {
            return Err(Error::Parse(format!("expected {} entries, found {}", h[2], t.len())));
        }
        Self::from_triplets(h[0] as usize, h[1] as usize, &t)
    }
}

/// Elementary divisors `d_1 | d_2 | …` (nonzero only) and the rank.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SNFResult {
    pub rank: usize,
    /// Number of divisors equal to 1.
    pub units: usize,
    /// Divisors greater than 1, in divisibility order.
    #[serde(serialize_with = "serialize_bigints")]
    pub torsion: Vec<BigInt>,
}

fn serialize_bigints<S: serde::Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        seq.serialize_element(&x.to_string())?;
    }
    seq.end()
}

impl SNFResult {
    /// The full divisor list.
    pub fn divisors(&self) -> Vec<BigInt> {
        let mut d = vec![BigInt::one(); self.units];
        d.extend(self.torsion.iter().cloned());
        d
    }

    pub fn divisibility_holds(&self) -> bool {
        self.divisors().windows(2).all(|w| (&w[1] % &w[0]).is_zero())
    }
}

trait Scalar: Clone + PartialEq + std::fmt::Debug {
    fn from_i64(v: i64) -> Self;
    fn is_nil(&self) -> bool;
    fn is_unit(&self) -> bool;
    /// `a - f·b`, `None` on overflow.
    fn sub_mul(&self, f: &Self, b: &Self) -> Option<Self>;
    /// `a · u` for a unit `u`.
    fn mul_unit(&self, u: &Self) -> Option<Self>;
    fn to_big(&self) -> BigInt;
}

impl Scalar for i64 {
    fn from_i64(v: i64) -> Self {
        v
    }
    fn is_nil(&self) -> bool {
        *self == 0
    }
    fn is_unit(&self) -> bool {
        *self == 1 || *self == -1
    }
    fn sub_mul(&self, f: &Self, b: &Self) -> Option<Self> {
        self.checked_sub(f.checked_mul(*b)?)
    }
    fn mul_unit(&self, u: &Self) -> Option<Self> {
        self.checked_mul(*u)
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Scalar for BigInt {
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
    fn is_nil(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_unit(&self) -> bool {
        self.abs().is_one()
    }
    fn sub_mul(&self, f: &Self, b: &Self) -> Option<Self> {
        Some(self - f * b)
    }
    fn mul_unit(&self, u: &Self) -> Option<Self> {
        Some(self * u)
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

struct Overflow;

type SparseColumns<T> = Vec<Vec<(u32, T)>>;

/// Sparse unit-pivot elimination. Returns the unit-pivot count and the residual
/// (active rows, active columns as sparse vectors).
fn eliminate<T: Scalar>(m: &SparseMatrix) -> std::result::Result<(usize, SparseColumns<T>), Overflow> {
    let mut cols: Vec<Vec<(u32, T)>> =
        (0..m.cols).map(|c| m.column(c).map(|(r, v)| (r, T::from_i64(v))).collect()).collect();
    let mut col_alive = vec![true; m.cols];
    // row -> columns that may hold an entry (checked on use)
    let mut row_cols: Vec<Vec<u32>> = vec![Vec::new(); m.rows];
    let mut row_count = vec![0usize; m.rows];
    for (c, col) in cols.iter().enumerate() {
        for (r, _) in col {
            row_cols[*r as usize].push(c as u32);
            row_count[*r as usize] += 1;
        }
    }
    let mut row_heap: BinaryHeap<Reverse<(usize, u32)>> =
        (0..m.rows).filter(|&r| row_count[r] > 0).map(|r| Reverse((row_count[r], r as u32))).collect();
    let mut col_heap: BinaryHeap<Reverse<(usize, u32)>> =
        (0..m.cols).filter(|&c| !cols[c].is_empty()).map(|c| Reverse((cols[c].len(), c as u32))).collect();
    let mut rank = 0usize;
    let mut scratch: Vec<(u32, T)> = Vec::new();

    let find = |col: &[(u32, T)], r: u32| col.binary_search_by_key(&r, |e| e.0).ok();

    loop {
        // best row candidate by count, with its best unit column
        let mut best: Option<(usize, u32, u32)> = None; // (cost, row, col)
        while let Some(&Reverse((cnt, r))) = row_heap.peek() {
            if cnt != row_count[r as usize] || cnt == 0 {
                row_heap.pop();
                continue;
            }
            let mut pick: Option<(usize, u32)> = None;
            for &c in &row_cols[r as usize] {
                if !col_alive[c as usize] {
                    continue;
                }
                let col = &cols[c as usize];
                if let Some(i) = find(col, r) {
                    if col[i].1.is_unit() && pick.is_none_or(|(l, _)| col.len() < l) {
                        pick = Some((col.len(), c));
                    }
                }
            }
            match pick {
                Some((len, c)) => {
                    best = Some(((cnt - 1) * (len - 1), r, c));
                    break;
                }
                // re-queued once its count changes; value-only changes surface via the column heap
                None => {
                    row_heap.pop();
                }
            }
        }
        while let Some(&Reverse((len, c))) = col_heap.peek() {
            if !col_alive[c as usize] || len != cols[c as usize].len() || len == 0 {
                col_heap.pop();
                continue;
            }
            let col = &cols[c as usize];
            let pick = col.iter().filter(|(_, v)| v.is_unit()).map(|&(r, _)| (row_count[r as usize], r)).min();
            match pick {
                Some((cnt, r)) => {
                    let cost = (cnt - 1) * (len - 1);
                    if best.is_none_or(|(b, _, _)| cost < b) {
                        best = Some((cost, r, c));
                    }
                    break;
                }
                None => {
                    col_heap.pop();
                }
            }
        }
        let Some((_, r, c)) = best else { break };

        // pivot at (r, c): clear row r from every other live column
        let pivot_col = std::mem::take(&mut cols[c as usize]);
        col_alive[c as usize] = false;
        let pv = pivot_col[find(&pivot_col, r).expect("pivot present")].1.clone();
        let others: Vec<u32> = std::mem::take(&mut row_cols[r as usize]);
        for &(rr, _) in &pivot_col {
            row_count[rr as usize] -= 1;
        }
        for &c2 in &others {
            if c2 == c || !col_alive[c2 as usize] {
                continue;
            }
            let Some(i) = find(&cols[c2 as usize], r) else {
                continue;
            };
            // c2 -= (a / pv) · c, with a / pv = a · pv for a unit pv
            let f = cols[c2 as usize][i].1.mul_unit(&pv).ok_or(Overflow)?;
            let target = std::mem::take(&mut cols[c2 as usize]);
            scratch.clear();
            let (mut i1, mut i2) = (0, 0);
            while i1 < target.len() || i2 < pivot_col.len() {
                let r1 = target.get(i1).map_or(u32::MAX, |e| e.0);
                let r2 = pivot_col.get(i2).map_or(u32::MAX, |e| e.0);
                if r1 < r2 {
                    scratch.push(target[i1].clone());
                    i1 += 1;
                } else if r2 < r1 {
                    let v = T::from_i64(0).sub_mul(&f, &pivot_col[i2].1).ok_or(Overflow)?;
                    row_cols[r2 as usize].push(c2);
                    row_count[r2 as usize] += 1;
                    row_heap.push(Reverse((row_count[r2 as usize], r2)));
                    scratch.push((r2, v));
                    i2 += 1;
                } else {
                    let v = target[i1].1.sub_mul(&f, &pivot_col[i2].1).ok_or(Overflow)?;
                    if v.is_nil() {
                        row_count[r1 as usize] -= 1;
                        if r1 != r {
                            row_heap.push(Reverse((row_count[r1 as usize], r1)));
                        }
                    } else {
                        scratch.push((r1, v));
                    }
                    i1 += 1;
                    i2 += 1;
                }
            }
            cols[c2 as usize] = std::mem::take(&mut scratch);
            scratch = target;
            scratch.clear();
            col_heap.push(Reverse((cols[c2 as usize].len(), c2)));
        }
        for &(rr, _) in &pivot_col {
            if rr != r && row_count[rr as usize] > 0 {
                row_heap.push(Reverse((row_count[rr as usize], rr)));
            }
        }
        row_count[r as usize] = 0;
        rank += 1;
    }
    let residual: Vec<Vec<(u32, T)>> =
        cols.into_iter().zip(col_alive).filter(|(col, alive)| *alive && !col.is_empty()).map(|(col, _)| col).collect();
    Ok((rank, residual))
}

/// Dense Smith form of a small matrix; returns the nonzero diagonal.
// Row operations read one row while writing another, so indexing stays explicit.
#[allow(clippy::needless_range_loop)]
fn dense_snf(mut a: Vec<Vec<BigInt>>) -> Vec<BigInt> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // smallest nonzero entry in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !a[i][j].is_zero() && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        a.swap(t, bi);
        for row in a.iter_mut() {
            row.swap(t, bj);
        }
        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t]);
                for j in t..cols {
                    let v = &a[t][j] * &q;
                    a[i][j] -= v;
                }
                if !a[i][t].is_zero() {
                    dirty = true;
                }
            }
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&a[t][t]);
                for row in a.iter_mut().skip(t) {
                    let v = &row[t] * &q;
                    row[j] -= v;
                }
                if !a[t][j].is_zero() {
                    dirty = true;
                }
            }
            if !dirty {
                // pivot must divide the rest of the block
                let mut bad = None;
                'scan: for i in t + 1..rows {
                    for j in t + 1..cols {
                        if !(&a[i][j] % &a[t][t]).is_zero() {
                            bad = Some(i);
                            break 'scan;
                        }
                    }
                }
                match bad {
                    None => break,
                    Some(i) => {
                        for j in t..cols {
                            let v = a[i][j].clone();
                            a[t][j] += v;
                        }
                        continue;
                    }
                }
            }
            // move the smallest entry of row/column t to the pivot
            let mut bi = (t, t);
            for i in t..rows {
                if !a[i][t].is_zero() && a[i][t].abs() < a[bi.0][bi.1].abs() {
                    bi = (i, t);
                }
            }
            for j in t..cols {
                if !a[t][j].is_zero() && a[t][j].abs() < a[bi.0][bi.1].abs() {
                    bi = (t, j);
                }
            }
            a.swap(t, bi.0);
            for row in a.iter_mut() {
                row.swap(t, bi.1);
            }
        }
        diag.push(a[t][t].abs());
        t += 1;
    }
    diag
}

/// Restores `d_1 | d_2 | …` on a list of positive integers by gcd/lcm exchanges.
fn divisibility_chain(mut d: Vec<BigInt>) -> Vec<BigInt> {
    let n = d.len();
    for i in 0..n {
        for j in i + 1..n {
            let g = d[i].gcd(&d[j]);
            let l = d[i].lcm(&d[j]);
            d[i] = g;
            d[j] = l;
        }
    }
    d
}

fn finish<T: Scalar>(rank: usize, residual: Vec<Vec<(u32, T)>>) -> SNFResult {
    let mut rows: Vec<u32> = residual.iter().flat_map(|c| c.iter().map(|e| e.0)).collect();
    rows.sort_unstable();
    rows.dedup();
    let mut dense = vec![vec![BigInt::zero(); residual.len()]; rows.len()];
    for (j, col) in residual.iter().enumerate() {
        for (r, v) in col {
            let i = rows.binary_search(r).expect("collected");
            dense[i][j] = v.to_big();
        }
    }
    let tail = divisibility_chain(dense_snf(dense));
    let mut units = rank;
    let mut torsion = Vec::new();
    for d in tail {
        if d.is_one() {
            units += 1;
        } else {
            torsion.push(d);
        }
    }
    // the chain fix-up sorts units to the front already
    SNFResult { rank: units + torsion.len(), units, torsion }
}

/// Elementary divisors of `m`.
pub fn smith_normal_form(m: &SparseMatrix) -> SNFResult {
    match eliminate::<i64>(m) {
        Ok((rank, residual)) => finish(rank, residual),
        Err(Overflow) => match eliminate::<BigInt>(m) {
            Ok((rank, residual)) => finish(rank, residual),
            Err(Overflow) => unreachable!("arbitrary precision does not overflow"),
        },
    }
}

/// Forces the arbitrary-precision path (for tests).
#[doc(hidden)]
pub fn smith_normal_form_bigint(m: &SparseMatrix) -> SNFResult {
    match eliminate::<BigInt>(m) {
        Ok((rank, residual)) => finish(rank, residual),
        Err(Overflow) => unreachable!(),
    }
}

/// Largest absolute entry, for diagnostics.
pub fn max_abs_entry(m: &SparseMatrix) -> u64 {
    m.vals.iter().map(|v| v.unsigned_abs()).max().unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;
    use proptest::prelude::*;

    fn dense(rows: &[&[i64]]) -> SparseMatrix {
        let mut t = Vec::new();
        for (i, r) in rows.iter().enumerate() {
            for (j, &v) in r.iter().enumerate() {
                if v != 0 {
                    t.push((i as u32, j as u32, v));
                }
            }
        }
        SparseMatrix::from_triplets(rows.len(), rows.first().map_or(0, |r| r.len()), &t).unwrap()
    }

    fn divs(m: &SparseMatrix) -> Vec<i64> {
        smith_normal_form(m).divisors().iter().map(|d| d.to_i64().unwrap()).collect()
    }

    #[test]
    fn basic_examples() {
        assert_eq!(divs(&dense(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]])), vec![1, 1, 1]);
        assert_eq!(divs(&dense(&[&[2, 0], &[0, 4]])), vec![2, 4]);
        assert_eq!(divs(&dense(&[&[2, 0], &[0, 3]])), vec![1, 6]);
        assert_eq!(divs(&dense(&[&[2, 4], &[6, 8]])), vec![2, 4]);
        // hollow triangle boundary
        assert_eq!(divs(&dense(&[&[-1, -1, 0], &[1, 0, -1], &[0, 1, 1]])), vec![1, 1]);
        assert_eq!(divs(&SparseMatrix::zeros(3, 2)), Vec::<i64>::new());
    }

    #[test]
    fn overflow_falls_back_to_bigint() {
        let big = i64::MAX / 2;
        let m = dense(&[&[1, big], &[big, 1], &[3, big]]);
        let r = smith_normal_form(&m);
        assert_eq!(r, smith_normal_form_bigint(&m));
        assert_eq!(r.rank, 2);
    }

    #[test]
    fn triplet_text_roundtrip() {
        let m = dense(&[&[1, 0, -2], &[0, 3, 0]]);
        let back = SparseMatrix::from_triplet_text(&m.to_triplet_text()).unwrap();
        assert_eq!(m, back);
        assert!(SparseMatrix::from_triplet_text("2 2 1\n5 0 1\n").is_err());
    }

    /// Determinantal-divisor oracle: d_1⋯d_k = gcd of k×k minors.
    fn minors_gcd(a: &[Vec<i64>], k: usize) -> i64 {
        fn det(m: Vec<Vec<i64>>) -> i64 {
            let n = m.len();
            if n == 0 {
                return 1;
            }
            let mut s = 0;
            for j in 0..n {
                let sub: Vec<Vec<i64>> = m[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &v)| v).collect())
                    .collect();
                let sign = if j % 2 == 0 { 1 } else { -1 };
                s += sign * m[0][j] * det(sub);
            }
            s
        }
        fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
            if k == 0 {
                return vec![vec![]];
            }
            (0..n)
                .flat_map(|last| {
                    subsets(last, k - 1).into_iter().map(move |mut s| {
                        s.push(last);
                        s
                    })
                })
                .collect()
        }
        let (r, c) = (a.len(), a[0].len());
        let mut g = 0i64;
        for rs in subsets(r, k) {
            for cs in subsets(c, k) {
                let m: Vec<Vec<i64>> = rs.iter().map(|&i| cs.iter().map(|&j| a[i][j]).collect()).collect();
                g = g.gcd(&det(m));
            }
        }
        g.abs()
    }

    proptest! {
        #[test]
        fn matches_minor_oracle(entries in proptest::collection::vec(-3i64..=3, 12)) {
            let a: Vec<Vec<i64>> = entries.chunks(4).map(|c| c.to_vec()).collect();
            let rows: Vec<&[i64]> = a.iter().map(|r| r.as_slice()).collect();
            let m = dense(&rows);
            let r = smith_normal_form(&m);
            prop_assert!(r.divisibility_holds());
            let d = r.divisors();
            let mut prod = BigInt::one();
            for k in 1..=3 {
                let g = minors_gcd(&a, k);
                if k <= d.len() {
                    prod *= &d[k - 1];
                    prop_assert_eq!(prod.to_i64().unwrap(), g);
                } else {
                    prop_assert_eq!(g, 0);
                }
            }
            prop_assert_eq!(smith_normal_form(&m.transpose()), r);
        }
    }
}
