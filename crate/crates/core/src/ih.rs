//! Intersection homology of filtered complexes over the rationals.
//!
//! For a perversity `p` an `i`-simplex `s` is allowable when, for every
//! codimension `k >= 2`, the face of `s` spanned by its vertices in the
//! closed skeleton `X_{n-k}` has dimension at most `i - k + p(k)`. The
//! intersection chains of degree `i` are the chains on allowable simplices
//! whose boundary is again allowable.

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{self, Col, SparseMatrix};
use crate::simplicial::FilteredComplex;

/// A Goresky–MacPherson perversity on an `n`-dimensional space.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Perversity {
    n: usize,
    /// `values[k - 2] = p(k)` for `k = 2..=n`.
    values: Vec<u32>,
}

impl Perversity {
    /// Checks `p(2) = 0` and `p(k+1) - p(k)` in `{0, 1}`.
    pub fn new(n: usize, values: Vec<u32>) -> Result<Self> {
        if values.len() != n.saturating_sub(1) {
            return Err(Error::InvalidPerversity(format!(
                "expected {} values for dimension {n}, got {}",
                n.saturating_sub(1),
                values.len()
            )));
        }
        if values.first().is_some_and(|&v| v != 0) {
            return Err(Error::InvalidPerversity("p(2) must be 0".into()));
        }
        if values.windows(2).any(|w| w[1] < w[0] || w[1] - w[0] > 1) {
            return Err(Error::InvalidPerversity("steps must be 0 or 1".into()));
        }
        Ok(Perversity { n, values })
    }

    fn from_fn(n: usize, f: impl Fn(u32) -> u32) -> Self {
        Perversity {
            n,
            values: (2..=n as u32).map(f).collect(),
        }
    }

    pub fn lower_middle(n: usize) -> Self {
        Self::from_fn(n, |k| (k - 2) / 2)
    }

    pub fn upper_middle(n: usize) -> Self {
        Self::from_fn(n, |k| (k - 1) / 2)
    }

    pub fn zero(n: usize) -> Self {
        Self::from_fn(n, |_| 0)
    }

    pub fn top(n: usize) -> Self {
        Self::from_fn(n, |k| k - 2)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[u32] {
        &self.values
    }

    /// `p(k)` for `2 <= k <= n`.
    pub fn at(&self, k: usize) -> u32 {
        self.values[k - 2]
    }

    /// The perversity `t - p` with `t(k) = k - 2`.
    pub fn dual(&self) -> Self {
        Self::from_fn(self.n, |k| k - 2 - self.at(k as usize))
    }
}

pub fn lower_middle(n: usize) -> Perversity {
    Perversity::lower_middle(n)
}

fn check_shape(k: &FilteredComplex, p: &Perversity) -> Result<usize> {
    let n = k.dim();
    if n < 0 || n as usize != p.n {
        return Err(Error::PerversityMismatch {
            perversity: p.n,
            complex: n.max(0) as usize,
        });
    }
    let n = n as usize;
    for (a, &d) in k.stratum_dims().iter().enumerate() {
        if d + 1 == n {
            return Err(Error::NotPseudomanifold(format!(
                "stratum `{}` has codimension 1",
                k.poset().label(a)
            )));
        }
        if d < n && k.poset().is_maximal(a) {
            return Err(Error::NotPseudomanifold(format!(
                "maximal stratum `{}` has dimension {d} < {n}",
                k.poset().label(a)
            )));
        }
    }
    Ok(n)
}

/// Per-vertex table: `depth[v]` is the stratum dimension of vertex `v`.
fn vertex_dims(k: &FilteredComplex) -> Vec<usize> {
    k.complex()
        .simplices(0)
        .iter()
        .enumerate()
        .map(|(i, _)| k.stratum_dim(k.label(0, i)))
        .collect()
}

fn allowable_mask(k: &FilteredComplex, p: &Perversity, n: usize, i: usize, vdims: &[usize]) -> Vec<bool> {
    let cx = k.complex();
    if i > n {
        return vec![];
    }
    cx.simplices(i)
        .iter()
        .map(|s| {
            (2..=n).all(|c| {
                let inside = s
                    .iter()
                    .filter(|&&v| vdims[cx.index_of(&[v]).expect("vertex")] + c <= n)
                    .count();
                inside == 0 || (inside as isize - 1) <= i as isize - c as isize + p.at(c) as isize
            })
        })
        .collect()
}

/// Indices (into `k.complex().simplices(i)`) of the `p`-allowable
/// `i`-simplices.
pub fn allowable_simplices(k: &FilteredComplex, p: &Perversity, i: usize) -> Result<Vec<usize>> {
    let n = check_shape(k, p)?;
    k.audit_fullness()?;
    let vd = vertex_dims(k);
    Ok(mask_to_indices(&allowable_mask(k, p, n, i, &vd)))
}

fn mask_to_indices(m: &[bool]) -> Vec<usize> {
    m.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i).collect()
}

/// The intersection chain complex.
#[derive(Clone, Debug)]
pub struct AllowableComplex {
    /// Allowable simplices per degree.
    allowable: Vec<Vec<usize>>,
    /// Basis of the degree `i` intersection chains, in coordinates of all
    /// `i`-simplices.
    basis: Vec<Vec<Col<BigInt>>>,
    /// Boundaries of the basis vectors, in coordinates of `(i-1)`-simplices.
    images: Vec<Vec<Col<BigInt>>>,
}

impl AllowableComplex {
    pub fn new(k: &FilteredComplex, p: &Perversity) -> Result<Self> {
        let n = check_shape(k, p)?;
        k.audit_fullness()?;
        let vd = vertex_dims(k);
        let masks: Vec<Vec<bool>> = (0..=n).map(|i| allowable_mask(k, p, n, i, &vd)).collect();
        let cx = k.complex();
        let mut allowable = Vec::with_capacity(n + 1);
        let mut basis = Vec::with_capacity(n + 1);
        let mut images = Vec::with_capacity(n + 1);
        for i in 0..=n {
            let a = mask_to_indices(&masks[i]);
            if i == 0 {
                basis.push(a.iter().map(|&j| vec![(j, BigInt::from(1))]).collect());
                images.push(a.iter().map(|_| Vec::new()).collect());
                allowable.push(a);
                continue;
            }
            let d = cx.boundary_matrix(i).select_columns(&a);
            let bad: Vec<usize> = mask_to_indices(&masks[i - 1].iter().map(|b| !b).collect::<Vec<_>>());
            let m = d.restrict_rows(&bad);
            let ker = linalg::kernel(&m);
            let lift = |v: &Col<BigInt>| -> Col<BigInt> { v.iter().map(|(j, x)| (a[*j], x.clone())).collect() };
            let full = cx.boundary_matrix(i);
            let b: Vec<Col<BigInt>> = ker.iter().map(lift).collect();
            images.push(b.iter().map(|v| full.apply(v)).collect());
            basis.push(b);
            allowable.push(a);
        }
        Ok(AllowableComplex {
            allowable,
            basis,
            images,
        })
    }

    pub fn allowable(&self, i: usize) -> &[usize] {
        &self.allowable[i]
    }

    pub fn allowable_counts(&self) -> Vec<usize> {
        self.allowable.iter().map(Vec::len).collect()
    }

    pub fn basis(&self, i: usize) -> &[Col<BigInt>] {
        &self.basis[i]
    }

    pub fn chain_ranks(&self) -> Vec<usize> {
        self.basis.iter().map(Vec::len).collect()
    }

    fn image_rank(&self, i: usize) -> usize {
        match self.images.get(i) {
            None => 0,
            Some(v) => {
                let rows = v.iter().flat_map(|c| c.iter().map(|e| e.0 + 1)).max().unwrap_or(0);
                linalg::rank(&SparseMatrix::<BigInt>::from_columns(rows, v.iter().cloned()))
            }
        }
    }

    /// Homology ranks of the complex.
    pub fn homology_ranks(&self) -> Vec<usize> {
        let r: Vec<usize> = (0..self.basis.len() + 1).map(|i| self.image_rank(i)).collect();
        (0..self.basis.len())
            .map(|i| self.basis[i].len() - r[i] - r[i + 1])
            .collect()
    }

    /// Checks that boundaries of intersection chains are allowable and that
    /// `∂∘∂ = 0`.
    pub fn check(&self, k: &FilteredComplex) -> bool {
        let cx = k.complex();
        (1..self.basis.len()).all(|i| {
            let ok_rows: std::collections::HashSet<usize> = self.allowable[i - 1].iter().copied().collect();
            let closed = self.images[i].iter().all(|c| c.iter().all(|(r, _)| ok_rows.contains(r)));
            let dd = i < 2
                || self.images[i]
                    .iter()
                    .all(|c| cx.boundary_matrix(i - 1).apply(c).is_empty());
            closed && dd
        })
    }
}

/// Ranks of `IH^p_i(k; Q)` for `i = 0..=n`.
///
/// When the fullness audit fails the complex is subdivided once; if it still
/// fails the error is returned.
pub fn ih_ranks(k: &FilteredComplex, p: &Perversity) -> Result<Vec<usize>> {
    Ok(ih_report(k, p)?.ranks)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IhReport {
    pub ranks: Vec<usize>,
    pub allowable_counts: Vec<usize>,
    pub subdivided: bool,
    pub perversity: Vec<u32>,
}

pub fn ih_report(k: &FilteredComplex, p: &Perversity) -> Result<IhReport> {
    check_shape(k, p)?;
    let (ac, subdivided) = match AllowableComplex::new(k, p) {
        Ok(ac) => (ac, false),
        Err(Error::NotFull(_)) => (AllowableComplex::new(&k.barycentric(), p)?, true),
        Err(e) => return Err(e),
    };
    Ok(IhReport {
        ranks: ac.homology_ranks(),
        allowable_counts: ac.allowable_counts(),
        subdivided,
        perversity: p.values.clone(),
    })
}
