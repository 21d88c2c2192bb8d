//! Exact sparse linear algebra over the integers.
//!
//! Matrices are stored by column. Reduction is the left-to-right low-pivot
//! column elimination familiar from persistent homology, made fraction-free:
//! when column `j` and pivot column `k` share a lowest row `r`, column `j` is
//! replaced by `a * col_j - b * col_k` with `a`, `b` the coprime parts of the
//! two entries at `r`, and the result is divided by the gcd of its entries.
//! Everything runs on checked `i64` first and is redone on `BigInt` if any
//! intermediate value overflows.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// A sparse column: `(row, value)` pairs sorted by row, no explicit zeros.
pub type Col<E> = Vec<(usize, E)>;

/// Integer-like entry types usable in the reduction.
pub trait Entry: Clone + Debug + PartialEq {
    fn nil() -> Self;
    fn from_small(v: i64) -> Self;
    fn is_nil(&self) -> bool;
    fn try_mul(&self, other: &Self) -> Option<Self>;
    fn try_sub(&self, other: &Self) -> Option<Self>;
    /// Nonnegative gcd.
    fn gcd_with(&self, other: &Self) -> Self;
    /// Exact division; callers guarantee divisibility.
    fn exact_div(&self, other: &Self) -> Self;
    fn bigint(&self) -> BigInt;
    fn small(&self) -> Option<i64>;
}

// Values at the extremes of i64 would make `abs` and `gcd` overflow.
const I64_GUARD: i64 = i64::MAX / 2;

fn guard(v: i64) -> Option<i64> {
    (-I64_GUARD..=I64_GUARD).contains(&v).then_some(v)
}

impl Entry for i64 {
    fn nil() -> Self {
        0
    }
    fn from_small(v: i64) -> Self {
        v
    }
    fn is_nil(&self) -> bool {
        *self == 0
    }
    fn try_mul(&self, other: &Self) -> Option<Self> {
        i64::checked_mul(*self, *other).and_then(guard)
    }
    fn try_sub(&self, other: &Self) -> Option<Self> {
        i64::checked_sub(*self, *other).and_then(guard)
    }
    fn gcd_with(&self, other: &Self) -> Self {
        Integer::gcd(self, other)
    }
    fn exact_div(&self, other: &Self) -> Self {
        self / other
    }
    fn bigint(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn small(&self) -> Option<i64> {
        guard(*self)
    }
}

impl Entry for BigInt {
    fn nil() -> Self {
        Zero::zero()
    }
    fn from_small(v: i64) -> Self {
        BigInt::from(v)
    }
    fn is_nil(&self) -> bool {
        Zero::is_zero(self)
    }
    fn try_mul(&self, other: &Self) -> Option<Self> {
        Some(self * other)
    }
    fn try_sub(&self, other: &Self) -> Option<Self> {
        Some(self - other)
    }
    fn gcd_with(&self, other: &Self) -> Self {
        Integer::gcd(self, other)
    }
    fn exact_div(&self, other: &Self) -> Self {
        self / other
    }
    fn bigint(&self) -> BigInt {
        self.clone()
    }
    fn small(&self) -> Option<i64> {
        ToPrimitive::to_i64(self).and_then(guard)
    }
}

/// Column-major sparse integer matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseMatrix<E = i64> {
    nrows: usize,
    cols: Vec<Col<E>>,
}

impl<E: Entry> SparseMatrix<E> {
    pub fn new(nrows: usize) -> Self {
        SparseMatrix {
            nrows,
            cols: Vec::new(),
        }
    }

    /// Builds a matrix from unsorted columns; zeros are dropped and repeated
    /// rows are summed.
    pub fn from_columns(nrows: usize, cols: impl IntoIterator<Item = Col<E>>) -> Self {
        let mut m = SparseMatrix::new(nrows);
        for c in cols {
            m.push_column(c);
        }
        m
    }

    pub fn push_column(&mut self, mut col: Col<E>) {
        col.sort_by_key(|e| e.0);
        let mut out: Col<E> = Vec::with_capacity(col.len());
        for (r, v) in col {
            assert!(r < self.nrows, "row {r} out of range {}", self.nrows);
            match out.last_mut() {
                Some(last) if last.0 == r => {
                    let neg = E::nil().try_sub(&v).expect("entry negation");
                    last.1 = last.1.try_sub(&neg).expect("entry overflow");
                }
                _ => out.push((r, v)),
            }
        }
        out.retain(|e| !e.1.is_nil());
        self.cols.push(out);
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn column(&self, j: usize) -> &[(usize, E)] {
        &self.cols[j]
    }

    pub fn columns(&self) -> &[Col<E>] {
        &self.cols
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(Vec::len).sum()
    }

    pub fn transpose(&self) -> SparseMatrix<E> {
        let mut rows: Vec<Col<E>> = vec![Vec::new(); self.nrows];
        for (j, c) in self.cols.iter().enumerate() {
            for (r, v) in c {
                rows[*r].push((j, v.clone()));
            }
        }
        SparseMatrix {
            nrows: self.cols.len(),
            cols: rows,
        }
    }

    /// Keeps the listed rows, renumbered in the given order.
    pub fn restrict_rows(&self, keep: &[usize]) -> SparseMatrix<E> {
        let mut map = vec![usize::MAX; self.nrows];
        for (i, &r) in keep.iter().enumerate() {
            map[r] = i;
        }
        let cols = self
            .cols
            .iter()
            .map(|c| {
                let mut out: Col<E> = c
                    .iter()
                    .filter(|(r, _)| map[*r] != usize::MAX)
                    .map(|(r, v)| (map[*r], v.clone()))
                    .collect();
                out.sort_by_key(|e| e.0);
                out
            })
            .collect();
        SparseMatrix {
            nrows: keep.len(),
            cols,
        }
    }

    /// Keeps the listed columns in the given order.
    pub fn select_columns(&self, keep: &[usize]) -> SparseMatrix<E> {
        SparseMatrix {
            nrows: self.nrows,
            cols: keep.iter().map(|&j| self.cols[j].clone()).collect(),
        }
    }

    /// Matrix times a sparse integer vector indexed by column.
    pub fn apply(&self, v: &[(usize, BigInt)]) -> Col<BigInt> {
        let mut acc: std::collections::BTreeMap<usize, BigInt> = Default::default();
        for (j, x) in v {
            for (r, e) in &self.cols[*j] {
                *acc.entry(*r).or_insert_with(BigInt::zero) += e.bigint() * x;
            }
        }
        acc.into_iter().filter(|(_, x)| !x.is_nil()).collect()
    }

    pub fn to_dense(&self) -> Vec<Vec<BigInt>> {
        let mut d = vec![vec![BigInt::zero(); self.cols.len()]; self.nrows];
        for (j, c) in self.cols.iter().enumerate() {
            for (r, v) in c {
                d[*r][j] = v.bigint();
            }
        }
        d
    }
}

/// Result of a column reduction.
#[derive(Clone, Debug)]
pub struct Reduction {
    /// Reduced columns; nonzero ones have pairwise distinct lowest rows.
    pub columns: Vec<Col<BigInt>>,
    /// `columns[j] = M * v[j]` when tracking was requested.
    pub v: Option<Vec<Col<BigInt>>>,
}

impl Reduction {
    pub fn rank(&self) -> usize {
        self.columns.iter().filter(|c| !c.is_empty()).count()
    }

    /// Indices of columns that did not reduce to zero, that is, columns
    /// independent of everything to their left.
    pub fn pivot_columns(&self) -> Vec<usize> {
        (0..self.columns.len())
            .filter(|&j| !self.columns[j].is_empty())
            .collect()
    }

    /// The tracked combinations of the columns that reduced to zero: a basis
    /// of the kernel.
    pub fn kernel(&self) -> Vec<Col<BigInt>> {
        let v = self.v.as_ref().expect("kernel requires tracked reduction");
        (0..self.columns.len())
            .filter(|&j| self.columns[j].is_empty())
            .map(|j| v[j].clone())
            .collect()
    }
}

/// Reduces `m`; `track` also records the column operations.
pub fn reduce<E: Entry>(m: &SparseMatrix<E>, track: bool) -> Reduction {
    let small: Option<Vec<Col<i64>>> = m
        .cols
        .iter()
        .map(|c| c.iter().map(|(r, v)| Some((*r, v.small()?))).collect())
        .collect();
    if let Some(cols) = small {
        if let Some((cols, v)) = reduce_columns(cols, track) {
            return Reduction {
                columns: widen(cols),
                v: v.map(widen),
            };
        }
    }
    let cols: Vec<Col<BigInt>> = m
        .cols
        .iter()
        .map(|c| c.iter().map(|(r, v)| (*r, v.bigint())).collect())
        .collect();
    let (cols, v) = reduce_columns(cols, track).expect("BigInt reduction cannot overflow");
    Reduction { columns: cols, v }
}

pub fn rank<E: Entry>(m: &SparseMatrix<E>) -> usize {
    reduce(m, false).rank()
}

/// Basis of the integer kernel of `m`, as sparse vectors over its columns.
pub fn kernel<E: Entry>(m: &SparseMatrix<E>) -> Vec<Col<BigInt>> {
    reduce(m, true).kernel()
}

fn widen(cols: Vec<Col<i64>>) -> Vec<Col<BigInt>> {
    cols.into_iter()
        .map(|c| c.into_iter().map(|(r, v)| (r, BigInt::from(v))).collect())
        .collect()
}

type Reduced<E> = (Vec<Col<E>>, Option<Vec<Col<E>>>);

fn reduce_columns<E: Entry>(mut cols: Vec<Col<E>>, track: bool) -> Option<Reduced<E>> {
    let n = cols.len();
    let mut v: Option<Vec<Col<E>>> =
        track.then(|| (0..n).map(|j| vec![(j, E::from_small(1))]).collect());
    let mut pivot_of_row: std::collections::HashMap<usize, usize> = Default::default();
    for j in 0..n {
        while let Some(&(low, _)) = cols[j].last() {
            let Some(&k) = pivot_of_row.get(&low) else {
                pivot_of_row.insert(low, j);
                break;
            };
            let a = cols[k].last().expect("pivot column").1.clone();
            let b = cols[j].last().expect("current column").1.clone();
            let g = a.gcd_with(&b);
            let (a, b) = (a.exact_div(&g), b.exact_div(&g));
            let new_col = combine(&cols[j], &a, &cols[k], &b)?;
            let mut new_v = match &v {
                Some(v) => Some(combine(&v[j], &a, &v[k], &b)?),
                None => None,
            };
            let mut new_col = new_col;
            normalize(&mut new_col, new_v.as_mut());
            cols[j] = new_col;
            if let (Some(v), Some(nv)) = (v.as_mut(), new_v) {
                v[j] = nv;
            }
        }
    }
    Some((cols, v))
}

/// `a * x - b * y` for sorted sparse columns.
fn combine<E: Entry>(x: &[(usize, E)], a: &E, y: &[(usize, E)], b: &E) -> Option<Col<E>> {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    let zero = E::nil();
    while i < x.len() || j < y.len() {
        let (r, val) = match (x.get(i), y.get(j)) {
            (Some(p), Some(q)) if p.0 == q.0 => {
                i += 1;
                j += 1;
                (p.0, a.try_mul(&p.1)?.try_sub(&b.try_mul(&q.1)?)?)
            }
            (Some(p), Some(q)) if p.0 < q.0 => {
                i += 1;
                (p.0, a.try_mul(&p.1)?)
            }
            (Some(p), None) => {
                i += 1;
                (p.0, a.try_mul(&p.1)?)
            }
            (_, Some(q)) => {
                j += 1;
                (q.0, zero.try_sub(&b.try_mul(&q.1)?)?)
            }
            (None, None) => unreachable!(),
        };
        if !val.is_nil() {
            out.push((r, val));
        }
    }
    Some(out)
}

// Divides a column (and its tracked combination) by the gcd of all entries.
fn normalize<E: Entry>(col: &mut Col<E>, v: Option<&mut Col<E>>) {
    let mut g = E::nil();
    for (_, x) in col.iter() {
        g = g.gcd_with(x);
    }
    if let Some(v) = &v {
        for (_, x) in v.iter() {
            g = g.gcd_with(x);
        }
    }
    if g.is_nil() || g == E::from_small(1) {
        return;
    }
    for e in col.iter_mut() {
        e.1 = e.1.exact_div(&g);
    }
    if let Some(v) = v {
        for e in v.iter_mut() {
            e.1 = e.1.exact_div(&g);
        }
    }
}

/// Divides a BigInt vector by the gcd of its entries and makes the leading
/// entry positive.
pub fn primitive(mut v: Col<BigInt>) -> Col<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |g, (_, x)| g.gcd(x));
    if !g.is_nil() && !g.is_one() {
        for e in v.iter_mut() {
            e.1 = &e.1 / &g;
        }
    }
    if v.first().is_some_and(|e| e.1.is_negative()) {
        for e in v.iter_mut() {
            e.1 = -&e.1;
        }
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use proptest::prelude::*;

    fn dense_rank(rows: &[Vec<i64>]) -> usize {
        // textbook Gaussian elimination over Q
        let mut m: Vec<Vec<BigRational>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect())
            .collect();
        let ncols = m.first().map_or(0, Vec::len);
        let mut rank = 0;
        for c in 0..ncols {
            let Some(p) = (rank..m.len()).find(|&r| !m[r][c].is_zero()) else {
                continue;
            };
            m.swap(rank, p);
            for r in 0..m.len() {
                if r != rank && !m[r][c].is_zero() {
                    let f = &m[r][c] / &m[rank][c];
                    for cc in 0..ncols {
                        let d = &f * &m[rank][cc];
                        m[r][cc] -= d;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    fn from_dense(rows: &[Vec<i64>]) -> SparseMatrix {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        SparseMatrix::from_columns(
            nrows,
            (0..ncols).map(|j| (0..nrows).map(|i| (i, rows[i][j])).collect()),
        )
    }

    #[test]
    fn boundary_of_triangle() {
        // edges 01, 02, 12 as columns over vertices 0, 1, 2
        let d1 = from_dense(&[vec![-1, -1, 0], vec![1, 0, -1], vec![0, 1, 1]]);
        assert_eq!(rank(&d1), 2);
        let k = kernel(&d1);
        assert_eq!(k.len(), 1);
        let z = d1.apply(&k[0]);
        assert!(z.is_empty());
    }

    #[test]
    fn overflow_falls_back_to_bigint() {
        let big = i64::MAX / 4;
        let m = from_dense(&[vec![big, big - 1], vec![big - 3, big]]);
        assert_eq!(rank(&m), 2);
        let m = from_dense(&[vec![big, 2 * (big / 2)], vec![big, 2 * (big / 2)]]);
        assert_eq!(rank(&m), dense_rank(&[vec![big, 2 * (big / 2)], vec![big, 2 * (big / 2)]]));
    }

    #[test]
    fn pivot_columns_pick_independent_prefix() {
        let m = from_dense(&[vec![1, 2, 0, 1], vec![0, 0, 1, 1]]);
        assert_eq!(reduce(&m, false).pivot_columns(), vec![0, 2]);
    }

    #[test]
    fn transpose_and_restrict() {
        let m = from_dense(&[vec![1, 0, 2], vec![0, 3, 0]]);
        let t = m.transpose();
        assert_eq!(t.nrows(), 3);
        assert_eq!(t.to_dense(), vec![
            vec![BigInt::from(1), BigInt::from(0)],
            vec![BigInt::from(0), BigInt::from(3)],
            vec![BigInt::from(2), BigInt::from(0)],
        ]);
        let r = m.restrict_rows(&[1]);
        assert_eq!(r.nnz(), 1);
        assert_eq!(m.select_columns(&[2, 0]).column(0), &[(0, 2)]);
    }

    proptest! {
        #[test]
        fn rank_matches_dense_oracle(
            rows in prop::collection::vec(prop::collection::vec(-3i64..=3, 6), 1..7)
        ) {
            let m = from_dense(&rows);
            prop_assert_eq!(rank(&m), dense_rank(&rows));
            let k = kernel(&m);
            prop_assert_eq!(k.len() + rank(&m), 6);
            for v in &k {
                prop_assert!(m.apply(v).is_empty());
            }
        }
    }
}
