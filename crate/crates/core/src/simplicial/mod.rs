//! Finite simplicial complexes and exact rational homology.
//!
//! Vertices are `u32` ids and the numeric order of ids is the total vertex
//! order used by boundary signs, cup products and product triangulations.
//! A simplex is its sorted vertex list.

mod filtered;
mod realize;

use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::linalg::{self, SparseMatrix};

pub use filtered::{FilteredComplex, FundamentalCycle, RationalChain};
pub use realize::{realize, realize_bounded};

pub type Simplex = Vec<u32>;

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SimplicialComplex {
    by_dim: Vec<Vec<Simplex>>,
    index: Vec<HashMap<Simplex, usize>>,
}

impl SimplicialComplex {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Closes the given simplices under faces. Vertex lists are sorted; a
    /// repeated vertex or an empty facet is an error.
    pub fn from_facets<I, S>(facets: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u32]>,
    {
        let mut sets: Vec<BTreeSet<Simplex>> = Vec::new();
        for f in facets {
            let mut f: Simplex = f.as_ref().to_vec();
            if f.is_empty() {
                return Err(Error::InvalidComplex("empty facet".into()));
            }
            f.sort_unstable();
            if f.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidComplex(format!("repeated vertex in {f:?}")));
            }
            if f.len() > 24 {
                return Err(Error::InvalidComplex(format!(
                    "facet of dimension {} is too large",
                    f.len() - 1
                )));
            }
            let d = f.len() - 1;
            if sets.len() <= d {
                sets.resize_with(d + 1, BTreeSet::new);
            }
            if sets[d].contains(&f) {
                continue;
            }
            for mask in 1u32..(1 << f.len()) {
                let face: Simplex = f
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, &v)| v)
                    .collect();
                sets[face.len() - 1].insert(face);
            }
        }
        Ok(Self::from_sorted(sets.into_iter().map(|s| s.into_iter().collect()).collect()))
    }

    fn from_sorted(by_dim: Vec<Vec<Simplex>>) -> Self {
        let index = by_dim
            .iter()
            .map(|ss| ss.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect())
            .collect();
        SimplicialComplex { by_dim, index }
    }

    /// The full simplex on vertices `0..=n`.
    pub fn simplex(n: u32) -> Self {
        Self::from_facets([(0..=n).collect::<Vec<_>>()]).expect("simplex")
    }

    /// The boundary of the `n`-simplex, a triangulated `(n-1)`-sphere.
    pub fn sphere_boundary(n: u32) -> Self {
        let facets = (0..=n).map(|skip| (0..=n).filter(|&v| v != skip).collect::<Vec<_>>());
        Self::from_facets(facets).expect("simplex boundary")
    }

    /// Dimension, or -1 for the empty complex.
    pub fn dim(&self) -> isize {
        self.by_dim.len() as isize - 1
    }

    pub fn is_empty(&self) -> bool {
        self.by_dim.is_empty()
    }

    pub fn simplices(&self, d: usize) -> &[Simplex] {
        self.by_dim.get(d).map_or(&[], Vec::as_slice)
    }

    pub fn count(&self, d: usize) -> usize {
        self.simplices(d).len()
    }

    pub fn len(&self) -> usize {
        self.by_dim.iter().map(Vec::len).sum()
    }

    pub fn f_vector(&self) -> Vec<usize> {
        self.by_dim.iter().map(Vec::len).collect()
    }

    pub fn vertices(&self) -> Vec<u32> {
        self.simplices(0).iter().map(|s| s[0]).collect()
    }

    pub fn num_vertices(&self) -> usize {
        self.count(0)
    }

    pub fn index_of(&self, s: &[u32]) -> Option<usize> {
        self.index.get(s.len().checked_sub(1)?)?.get(s).copied()
    }

    pub fn contains(&self, s: &[u32]) -> bool {
        self.index_of(s).is_some()
    }

    /// All simplices in order of dimension, then lexicographically.
    pub fn iter(&self) -> impl Iterator<Item = &Simplex> {
        self.by_dim.iter().flatten()
    }

    /// Maximal simplices.
    pub fn facets(&self) -> Vec<Simplex> {
        let mut covered: Vec<Vec<bool>> = self.by_dim.iter().map(|s| vec![false; s.len()]).collect();
        for d in 1..self.by_dim.len() {
            for s in &self.by_dim[d] {
                for i in 0..s.len() {
                    let j = self.index[d - 1][&drop_vertex(s, i)];
                    covered[d - 1][j] = true;
                }
            }
        }
        self.by_dim
            .iter()
            .zip(&covered)
            .flat_map(|(ss, cs)| ss.iter().zip(cs).filter(|(_, &c)| !c).map(|(s, _)| s.clone()))
            .collect()
    }

    pub fn is_pure(&self) -> bool {
        let d = self.dim();
        self.facets().iter().all(|f| f.len() as isize - 1 == d)
    }

    /// Signed boundary matrix from `d`-chains to `(d-1)`-chains. Removing the
    /// `i`-th vertex carries the sign `(-1)^i`.
    pub fn boundary_matrix(&self, d: usize) -> SparseMatrix<i64> {
        if d == 0 {
            return SparseMatrix::from_columns(0, self.simplices(0).iter().map(|_| Vec::new()));
        }
        let rows = &self.index[d - 1];
        let cols = self.simplices(d).iter().map(|s| {
            (0..s.len())
                .map(|i| (rows[&drop_vertex(s, i)], if i % 2 == 0 { 1 } else { -1 }))
                .collect()
        });
        SparseMatrix::from_columns(self.count(d - 1), cols)
    }

    fn boundary_ranks(&self) -> Vec<usize> {
        // ranks[d] = rank of the boundary from d-chains
        (0..self.by_dim.len())
            .map(|d| if d == 0 { 0 } else { linalg::rank(&self.boundary_matrix(d)) })
            .collect()
    }

    /// Ranks of `H_i(K; Q)` for `0 <= i <= dim`.
    pub fn homology_ranks(&self) -> Vec<usize> {
        let r = self.boundary_ranks();
        (0..self.by_dim.len())
            .map(|i| self.count(i) - r[i] - r.get(i + 1).copied().unwrap_or(0))
            .collect()
    }

    /// Reduced Betti numbers, indexed from degree -1 (nonzero only for the
    /// empty complex).
    pub fn reduced_homology_ranks(&self) -> Vec<usize> {
        if self.is_empty() {
            return vec![1];
        }
        let mut h = self.homology_ranks();
        h[0] -= 1;
        std::iter::once(0).chain(h).collect()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.by_dim
            .iter()
            .enumerate()
            .map(|(d, s)| if d % 2 == 0 { s.len() as i64 } else { -(s.len() as i64) })
            .sum()
    }

    /// `lk(s) = { t : t ∩ s = ∅, t ∪ s ∈ K }`, on the original vertex ids.
    pub fn link(&self, s: &[u32]) -> SimplicialComplex {
        let mut by_dim: Vec<Vec<Simplex>> = Vec::new();
        for ss in self.by_dim.iter().skip(s.len()) {
            for t in ss {
                if is_subset(s, t) {
                    let rest: Simplex = t.iter().copied().filter(|v| !s.contains(v)).collect();
                    let d = rest.len() - 1;
                    if by_dim.len() <= d {
                        by_dim.resize_with(d + 1, Vec::new);
                    }
                    by_dim[d].push(rest);
                }
            }
        }
        for ss in &mut by_dim {
            ss.sort();
        }
        Self::from_sorted(by_dim)
    }

    /// The subcomplex of simplices satisfying `keep`; `keep` must be closed
    /// under faces.
    pub fn subcomplex(&self, mut keep: impl FnMut(&[u32]) -> bool) -> SimplicialComplex {
        let mut by_dim: Vec<Vec<Simplex>> = self
            .by_dim
            .iter()
            .map(|ss| ss.iter().filter(|s| keep(s)).cloned().collect())
            .collect();
        while by_dim.last().is_some_and(Vec::is_empty) {
            by_dim.pop();
        }
        Self::from_sorted(by_dim)
    }

    /// Renumbers vertices to `0..n` preserving their order; returns the old id
    /// of each new vertex.
    pub fn compacted(&self) -> (SimplicialComplex, Vec<u32>) {
        let old = self.vertices();
        let new_of: HashMap<u32, u32> = old.iter().enumerate().map(|(i, &v)| (v, i as u32)).collect();
        let by_dim = self
            .by_dim
            .iter()
            .map(|ss| ss.iter().map(|s| s.iter().map(|v| new_of[v]).collect()).collect())
            .collect();
        (Self::from_sorted(by_dim), old)
    }

    /// Whether the vertex ids are exactly `0..num_vertices`.
    pub fn is_compact(&self) -> bool {
        self.simplices(0).iter().enumerate().all(|(i, s)| s[0] == i as u32)
    }

    /// Connected components as sorted vertex lists, ordered by least vertex.
    pub fn components(&self) -> Vec<Vec<u32>> {
        let verts = self.vertices();
        let pos: HashMap<u32, usize> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut parent: Vec<usize> = (0..verts.len()).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for e in self.simplices(1) {
            let (a, b) = (find(&mut parent, pos[&e[0]]), find(&mut parent, pos[&e[1]]));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
        let mut groups: std::collections::BTreeMap<usize, Vec<u32>> = Default::default();
        for (i, &v) in verts.iter().enumerate() {
            let r = find(&mut parent, i);
            groups.entry(r).or_default().push(v);
        }
        let mut out: Vec<Vec<u32>> = groups.into_values().collect();
        out.sort_by_key(|c| c[0]);
        out
    }
}

/// Removes the `i`-th vertex.
pub(crate) fn drop_vertex(s: &[u32], i: usize) -> Simplex {
    s.iter()
        .enumerate()
        .filter(|&(j, _)| j != i)
        .map(|(_, &v)| v)
        .collect()
}

/// Subset test for sorted vertex lists.
pub(crate) fn is_subset(small: &[u32], big: &[u32]) -> bool {
    let mut it = big.iter();
    small.iter().all(|v| it.any(|w| w == v))
}
