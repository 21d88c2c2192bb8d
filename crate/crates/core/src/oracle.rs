//! Brute-force reference computations for small complexes.
//!
//! Everything here works from definitions with dense rational matrices and
//! shares no code with the production pipelines beyond the complex itself.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::ih::Perversity;
use crate::simplicial::{FilteredComplex, Simplex, SimplicialComplex};

/// Rank of a dense rational matrix by Gaussian elimination.
pub fn dense_rank(mut m: Vec<Vec<BigRational>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = BigRational::one() / m[r][c].clone();
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone() * &inv;
                for j in c..cols {
                    let t = f.clone() * &m[r][j];
                    m[i][j] -= t;
                }
            }
        }
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

/// Dense boundary matrix between explicit lists of simplices.
fn boundary(rows: &[Simplex], cols: &[Simplex]) -> Vec<Vec<BigRational>> {
    let mut m = vec![vec![BigRational::zero(); cols.len()]; rows.len()];
    for (j, s) in cols.iter().enumerate() {
        for k in 0..s.len() {
            let mut f = s.clone();
            f.remove(k);
            if let Some(i) = rows.iter().position(|r| *r == f) {
                let sign = if k % 2 == 0 { 1 } else { -1 };
                m[i][j] = BigRational::from_integer(BigInt::from(sign));
            }
        }
    }
    m
}

fn rank_of(rows: &[Simplex], cols: &[Simplex]) -> usize {
    if rows.is_empty() || cols.is_empty() {
        0
    } else {
        dense_rank(boundary(rows, cols))
    }
}

/// Betti numbers from dense boundary ranks.
pub fn homology_ranks(k: &SimplicialComplex) -> Vec<usize> {
    let n = k.dim();
    if n < 0 {
        return vec![];
    }
    let by_dim: Vec<Vec<Simplex>> = (0..=n as usize + 1).map(|d| all_of_dim(k, d)).collect();
    (0..=n as usize)
        .map(|i| {
            let r_i = if i == 0 { 0 } else { rank_of(&by_dim[i - 1], &by_dim[i]) };
            by_dim[i].len() - r_i - rank_of(&by_dim[i], &by_dim[i + 1])
        })
        .collect()
}

fn all_of_dim(k: &SimplicialComplex, d: usize) -> Vec<Simplex> {
    k.iter().filter(|s| s.len() == d + 1).cloned().collect()
}

/// All nonempty faces of a simplex.
fn faces(s: &[u32]) -> Vec<Simplex> {
    (1u32..(1 << s.len()))
        .map(|mask| {
            s.iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, v)| *v)
                .collect()
        })
        .collect()
}

/// Allowable `i`-simplices, from the definition: `X_{n-k}` is the union of
/// the closures of strata of dimension at most `n - k` and `s ∩ X_{n-k}` is
/// the largest face of `s` lying in it.
pub fn allowable(k: &FilteredComplex, p: &Perversity, i: usize) -> Vec<Simplex> {
    let n = k.dim() as usize;
    let cx = k.complex();
    let skeleta: Vec<(usize, HashSet<Simplex>)> = (2..=n)
        .map(|c| {
            let mut set = HashSet::new();
            for a in 0..k.poset().len() {
                if k.stratum_dim(a) + c <= n {
                    set.extend(k.closure(a).complex().iter().cloned());
                }
            }
            (c, set)
        })
        .collect();
    all_of_dim(cx, i)
        .into_iter()
        .filter(|s| {
            skeleta.iter().all(|(c, x)| {
                let meet = faces(s).into_iter().filter(|f| x.contains(f)).map(|f| f.len()).max();
                match meet {
                    None => true,
                    Some(len) => len as isize - 1 <= i as isize - *c as isize + p.at(*c) as isize,
                }
            })
        })
        .collect()
}

/// `IH_i = |A_i| - rank ∂_{A_i} - rank ∂_{A_{i+1}} + rank M_{i+1}`, where
/// `M_{i+1}` is the part of `∂_{A_{i+1}}` landing outside `A_i`.
pub fn ih_ranks(k: &FilteredComplex, p: &Perversity) -> Vec<usize> {
    let n = k.dim() as usize;
    let cx = k.complex();
    let a: Vec<Vec<Simplex>> = (0..=n + 1)
        .map(|i| if i <= n { allowable(k, p, i) } else { vec![] })
        .collect();
    let all: Vec<Vec<Simplex>> = (0..=n).map(|i| all_of_dim(cx, i)).collect();
    (0..=n)
        .map(|i| {
            let d_i = if i == 0 { 0 } else { rank_of(&all[i - 1], &a[i]) };
            let d_next = if i == n { 0 } else { rank_of(&all[i], &a[i + 1]) };
            let outside: Vec<Simplex> = all[i].iter().filter(|s| !a[i].contains(s)).cloned().collect();
            let m_next = if i == n { 0 } else { rank_of(&outside, &a[i + 1]) };
            a[i].len() + m_next - d_i - d_next
        })
        .collect()
}
