use std::collections::{BTreeMap, HashMap, VecDeque};

use num_rational::BigRational;
use num_traits::Zero;

use super::{drop_vertex, Simplex, SimplicialComplex};
use crate::error::{Error, Result};
use crate::poset::{fresh_label, Poset};

/// A simplicial complex whose simplices are labelled by the elements of a
/// stratification poset.
///
/// The label of every face is below the label of the simplex, so each
/// `X_{<=a}` is a subcomplex and the frontier condition holds. Each element
/// labels at least one simplex, and strictly larger elements have strictly
/// larger stratum dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FilteredComplex {
    complex: SimplicialComplex,
    poset: Poset,
    labels: Vec<Vec<usize>>,
    stratum_dims: Vec<usize>,
}

impl FilteredComplex {
    /// `labels[d][i]` is the element labelling the `i`-th `d`-simplex.
    pub fn new(complex: SimplicialComplex, poset: Poset, labels: Vec<Vec<usize>>) -> Result<Self> {
        let shape_ok = labels.len() == complex.by_dim.len()
            && labels.iter().zip(&complex.by_dim).all(|(l, s)| l.len() == s.len());
        if !shape_ok {
            return Err(Error::InvalidFiltration("label table does not match the complex".into()));
        }
        let n = poset.len();
        if labels.iter().flatten().any(|&a| a >= n) {
            return Err(Error::InvalidFiltration("label out of range".into()));
        }
        for d in 1..labels.len() {
            for (i, s) in complex.by_dim[d].iter().enumerate() {
                let a = labels[d][i];
                for k in 0..s.len() {
                    let f = drop_vertex(s, k);
                    let b = labels[d - 1][complex.index[d - 1][&f]];
                    if !poset.leq(b, a) {
                        return Err(Error::InvalidFiltration(format!(
                            "face {f:?} of {s:?} is labelled `{}`, which is not below `{}`",
                            poset.label(b),
                            poset.label(a)
                        )));
                    }
                }
            }
        }
        let mut dims: Vec<Option<usize>> = vec![None; n];
        for (d, ls) in labels.iter().enumerate() {
            for &a in ls {
                dims[a] = Some(dims[a].map_or(d, |x: usize| x.max(d)));
            }
        }
        let stratum_dims = dims
            .iter()
            .enumerate()
            .map(|(a, d)| {
                d.ok_or_else(|| {
                    Error::InvalidFiltration(format!("stratum `{}` is empty", poset.label(a)))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        for a in 0..n {
            for b in 0..n {
                if poset.lt(a, b) && stratum_dims[a] >= stratum_dims[b] {
                    return Err(Error::InvalidFiltration(format!(
                        "stratum `{}` (dim {}) lies below `{}` (dim {})",
                        poset.label(a),
                        stratum_dims[a],
                        poset.label(b),
                        stratum_dims[b]
                    )));
                }
            }
        }
        Ok(FilteredComplex {
            complex,
            poset,
            labels,
            stratum_dims,
        })
    }

    pub fn from_label_fn(
        complex: SimplicialComplex,
        poset: Poset,
        mut label: impl FnMut(&[u32]) -> usize,
    ) -> Result<Self> {
        let labels = complex
            .by_dim
            .iter()
            .map(|ss| ss.iter().map(|s| label(s)).collect())
            .collect();
        FilteredComplex::new(complex, poset, labels)
    }

    /// One stratum `reg` containing everything.
    pub fn trivial(complex: SimplicialComplex) -> Self {
        let labels = complex.by_dim.iter().map(|s| vec![0; s.len()]).collect();
        let poset = Poset::point("reg");
        let stratum_dims = vec![complex.dim().max(0) as usize];
        FilteredComplex {
            complex,
            poset,
            labels,
            stratum_dims,
        }
    }

    /// Labels a complex from declared stratum closures.
    ///
    /// Each declared stratum is given by facets spanning its closure. A
    /// simplex belongs to the smallest declared closure containing it. The
    /// remaining simplices form the regular part, with one stratum per
    /// connected component: `reg` when connected, otherwise `reg0`, `reg1`,
    /// ... ordered by least vertex. Declared strata are ordered by inclusion
    /// of closures.
    pub fn from_declared(complex: SimplicialComplex, declared: &[(String, Vec<Simplex>)]) -> Result<Self> {
        let m = declared.len();
        let mut member: Vec<Vec<Vec<bool>>> = Vec::with_capacity(m);
        for (name, facets) in declared {
            let mut flags: Vec<Vec<bool>> = complex.by_dim.iter().map(|s| vec![false; s.len()]).collect();
            let cl = SimplicialComplex::from_facets(facets).map_err(|e| {
                Error::InvalidFiltration(format!("stratum `{name}`: {e}"))
            })?;
            if cl.is_empty() {
                return Err(Error::InvalidFiltration(format!("stratum `{name}` has no facets")));
            }
            for s in cl.iter() {
                let Some(i) = complex.index_of(s) else {
                    return Err(Error::InvalidFiltration(format!(
                        "stratum `{name}` uses {s:?}, which is not in the complex"
                    )));
                };
                flags[s.len() - 1][i] = true;
            }
            member.push(flags);
        }
        let subset = |a: usize, b: usize| {
            member[a]
                .iter()
                .zip(&member[b])
                .all(|(x, y)| x.iter().zip(y).all(|(p, q)| !p || *q))
        };
        let mut incl = vec![vec![false; m]; m];
        for a in 0..m {
            for b in 0..m {
                incl[a][b] = subset(a, b);
            }
        }
        for a in 0..m {
            for b in a + 1..m {
                if incl[a][b] && incl[b][a] {
                    return Err(Error::InvalidFiltration(format!(
                        "strata `{}` and `{}` have the same closure",
                        declared[a].0, declared[b].0
                    )));
                }
            }
        }
        // singular labels, usize::MAX for regular simplices
        let mut labels: Vec<Vec<usize>> = Vec::with_capacity(complex.by_dim.len());
        for (d, ss) in complex.by_dim.iter().enumerate() {
            let mut row = Vec::with_capacity(ss.len());
            for (i, s) in ss.iter().enumerate() {
                let cands: Vec<usize> = (0..m).filter(|&a| member[a][d][i]).collect();
                if cands.is_empty() {
                    row.push(usize::MAX);
                    continue;
                }
                let Some(&min) = cands.iter().find(|&&a| cands.iter().all(|&b| incl[a][b])) else {
                    return Err(Error::InvalidFiltration(format!(
                        "{s:?} lies in several closures with no common smaller stratum"
                    )));
                };
                row.push(min);
            }
            labels.push(row);
        }
        // connected components of the regular part through face incidences
        let offsets: Vec<usize> = complex
            .by_dim
            .iter()
            .scan(0, |acc, s| {
                let o = *acc;
                *acc += s.len();
                Some(o)
            })
            .collect();
        let total = complex.len();
        let mut parent: Vec<usize> = (0..total).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let mut below: Vec<(usize, usize)> = Vec::new(); // (singular label, regular simplex id)
        for d in 1..complex.by_dim.len() {
            for (i, s) in complex.by_dim[d].iter().enumerate() {
                if labels[d][i] != usize::MAX {
                    continue;
                }
                for k in 0..s.len() {
                    let j = complex.index[d - 1][&drop_vertex(s, k)];
                    let l = labels[d - 1][j];
                    if l == usize::MAX {
                        let (x, y) = (find(&mut parent, offsets[d] + i), find(&mut parent, offsets[d - 1] + j));
                        if x != y {
                            parent[x.max(y)] = x.min(y);
                        }
                    } else {
                        below.push((l, offsets[d] + i));
                    }
                }
            }
        }
        // components keyed by root, described by (least vertex, least simplex)
        let mut comps: BTreeMap<usize, (u32, Simplex)> = BTreeMap::new();
        for (d, ss) in complex.by_dim.iter().enumerate() {
            for (i, s) in ss.iter().enumerate() {
                if labels[d][i] != usize::MAX {
                    continue;
                }
                let r = find(&mut parent, offsets[d] + i);
                let key = (s[0], s.clone());
                comps
                    .entry(r)
                    .and_modify(|k| {
                        if key < *k {
                            *k = key.clone();
                        }
                    })
                    .or_insert(key);
            }
        }
        let mut order: Vec<(usize, (u32, Simplex))> = comps.into_iter().collect();
        order.sort_by(|x, y| x.1.cmp(&y.1));
        let comp_index: HashMap<usize, usize> =
            order.iter().enumerate().map(|(i, (r, _))| (*r, m + i)).collect();
        let names: Vec<String> = declared.iter().map(|d| d.0.clone()).collect();
        let mut all_names = names.clone();
        for i in 0..order.len() {
            let base = if order.len() == 1 { "reg".to_string() } else { format!("reg{i}") };
            all_names.push(fresh_label(&base, all_names.iter()));
        }
        let mut rels: Vec<(usize, usize)> = Vec::new();
        for a in 0..m {
            for b in 0..m {
                if a != b && incl[a][b] {
                    rels.push((a, b));
                }
            }
        }
        for (l, sid) in below {
            let r = find(&mut parent, sid);
            rels.push((l, comp_index[&r]));
        }
        rels.sort_unstable();
        rels.dedup();
        for (d, row) in labels.iter_mut().enumerate() {
            for (i, l) in row.iter_mut().enumerate() {
                if *l == usize::MAX {
                    let r = find(&mut parent, offsets[d] + i);
                    *l = comp_index[&r];
                }
            }
        }
        let poset = Poset::new(all_names, &rels)?;
        FilteredComplex::new(complex, poset, labels)
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    pub fn dim(&self) -> isize {
        self.complex.dim()
    }

    pub fn label(&self, d: usize, i: usize) -> usize {
        self.labels[d][i]
    }

    pub fn labels(&self, d: usize) -> &[usize] {
        self.labels.get(d).map_or(&[], Vec::as_slice)
    }

    pub fn label_of(&self, s: &[u32]) -> Option<usize> {
        let i = self.complex.index_of(s)?;
        Some(self.labels[s.len() - 1][i])
    }

    pub fn stratum_dim(&self, a: usize) -> usize {
        self.stratum_dims[a]
    }

    pub fn stratum_dims(&self) -> &[usize] {
        &self.stratum_dims
    }

    /// Non-maximal elements.
    pub fn singular(&self) -> Vec<usize> {
        (0..self.poset.len()).filter(|&a| !self.poset.is_maximal(a)).collect()
    }

    pub fn has_singular_strata(&self) -> bool {
        !self.singular().is_empty()
    }

    /// Simplices labelled `a`.
    pub fn simplices_of(&self, a: usize) -> Vec<Simplex> {
        self.complex
            .by_dim
            .iter()
            .zip(&self.labels)
            .flat_map(|(ss, ls)| ss.iter().zip(ls).filter(|(_, &l)| l == a).map(|(s, _)| s.clone()))
            .collect()
    }

    /// The subcomplex `X_{<=a}` with the induced stratification.
    pub fn closure(&self, a: usize) -> FilteredComplex {
        let keep: Vec<usize> = self.poset.down_closure(a);
        self.restrict_to(&keep)
    }

    /// The subcomplex of simplices whose labels lie in the down-closed set
    /// `keep`.
    pub fn restrict_to(&self, keep: &[usize]) -> FilteredComplex {
        let mut new_of = vec![usize::MAX; self.poset.len()];
        for (i, &a) in keep.iter().enumerate() {
            new_of[a] = i;
        }
        let sub = self
            .complex
            .subcomplex(|s| new_of[self.label_of(s).expect("simplex")] != usize::MAX);
        let poset = self.poset.induced(keep);
        let labels = sub
            .by_dim
            .iter()
            .map(|ss| ss.iter().map(|s| new_of[self.label_of(s).expect("simplex")]).collect())
            .collect();
        FilteredComplex::new(sub, poset, labels).expect("restriction to a closed union of strata")
    }

    /// Renumbers vertices to `0..n` preserving order.
    pub fn compacted(&self) -> FilteredComplex {
        if self.complex.is_compact() {
            return self.clone();
        }
        let (complex, _) = self.complex.compacted();
        FilteredComplex {
            complex,
            poset: self.poset.clone(),
            labels: self.labels.clone(),
            stratum_dims: self.stratum_dims.clone(),
        }
    }

    /// Same complex with one stratum.
    pub fn forget_strata(&self) -> FilteredComplex {
        FilteredComplex::trivial(self.complex.clone())
    }

    /// Checks that every simplex meets each closed union of strata used by
    /// intersection homology (each `X_{<=a}` and each dimension skeleton) in
    /// a single face.
    pub fn audit_fullness(&self) -> Result<()> {
        let n = self.poset.len();
        let mut closed: Vec<Vec<bool>> = (0..n)
            .map(|a| (0..n).map(|b| self.poset.leq(b, a)).collect())
            .collect();
        for h in 0..self.dim().max(0) as usize {
            closed.push((0..n).map(|b| self.stratum_dims[b] <= h).collect());
        }
        for f in self.complex.facets() {
            for set in &closed {
                let inside: Simplex = f
                    .iter()
                    .copied()
                    .filter(|v| set[self.label_of(&[*v]).expect("vertex")])
                    .collect();
                if inside.is_empty() {
                    continue;
                }
                if !set[self.label_of(&inside).expect("face")] {
                    return Err(Error::NotFull(format!(
                        "{f:?} meets a closed union of strata in the non-face {inside:?}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// First barycentric subdivision. The vertices are the simplices of the
    /// complex ordered by dimension and then lexicographically; a chain of
    /// faces carries the label of its largest member.
    pub fn barycentric(&self) -> FilteredComplex {
        let order: Vec<&Simplex> = self.complex.iter().collect();
        let id: HashMap<&Simplex, u32> = order.iter().enumerate().map(|(i, s)| (*s, i as u32)).collect();
        let mut flags: Vec<Simplex> = Vec::new();
        for f in self.complex.facets() {
            let mut perm: Vec<u32> = f.clone();
            permutations(&mut perm, 0, &mut |p| {
                let mut chain: Simplex = (1..=p.len())
                    .map(|k| {
                        let mut s = p[..k].to_vec();
                        s.sort_unstable();
                        id[&s]
                    })
                    .collect();
                chain.sort_unstable();
                flags.push(chain);
            });
        }
        let complex = SimplicialComplex::from_facets(&flags).expect("subdivision");
        let labels = complex
            .by_dim
            .iter()
            .map(|ss| {
                ss.iter()
                    .map(|c| {
                        let top = order[*c.last().expect("chain") as usize];
                        self.label_of(top).expect("simplex")
                    })
                    .collect()
            })
            .collect();
        FilteredComplex::new(complex, self.poset.clone(), labels).expect("subdivision keeps the filtration")
    }

    /// Link of a simplex, labelled by `label(t ∪ s)` and stratified by the
    /// elements that occur. Vertices keep their ids.
    pub fn link_of_simplex(&self, s: &[u32]) -> Result<FilteredComplex> {
        if !self.complex.contains(s) {
            return Err(Error::InvalidComplex(format!("{s:?} is not a simplex")));
        }
        let lk = self.complex.link(s);
        let lab = |t: &[u32]| {
            let mut u: Simplex = t.iter().chain(s).copied().collect();
            u.sort_unstable();
            self.label_of(&u).expect("coface")
        };
        let mut present: Vec<usize> = lk.iter().map(|t| lab(t)).collect();
        present.sort_unstable();
        present.dedup();
        let poset = self.poset.induced(&present);
        let pos: HashMap<usize, usize> = present.iter().enumerate().map(|(i, &a)| (a, i)).collect();
        FilteredComplex::from_label_fn(lk, poset, |t| pos[&lab(t)])
    }

    /// Link of stratum `a`, computed at a top-dimensional simplex of the
    /// stratum. All such simplices are checked to have links with the same
    /// homology ranks.
    pub fn link_of_stratum(&self, a: usize) -> Result<FilteredComplex> {
        if a >= self.poset.len() {
            return Err(Error::UnknownStratum(a.to_string()));
        }
        if self.poset.is_maximal(a) {
            return Err(Error::RegularStratum(self.poset.label(a).to_string()));
        }
        let h = self.stratum_dims[a];
        let tops: Vec<&Simplex> = self
            .complex
            .simplices(h)
            .iter()
            .zip(&self.labels[h])
            .filter(|(_, &l)| l == a)
            .map(|(s, _)| s)
            .collect();
        let first = self.link_of_simplex(tops[0])?;
        let first_ranks = first.complex().homology_ranks();
        for s in &tops[1..] {
            let other = self.complex.link(s).homology_ranks();
            if other != first_ranks {
                return Err(Error::NonUniformLink {
                    stratum: self.poset.label(a).to_string(),
                    first: first_ranks,
                    other,
                });
            }
        }
        Ok(first)
    }

    pub fn orient(&self) -> Result<FundamentalCycle> {
        self.complex.orient()
    }
}

fn permutations(v: &mut Vec<u32>, k: usize, f: &mut impl FnMut(&[u32])) {
    if k == v.len() {
        f(v);
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permutations(v, k + 1, f);
        v.swap(k, i);
    }
}

/// A top-dimensional cycle with coefficients `±1` on every top simplex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FundamentalCycle {
    dim: usize,
    signs: Vec<i8>,
}

impl FundamentalCycle {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Sign of the `i`-th top simplex.
    pub fn sign(&self, i: usize) -> i8 {
        self.signs[i]
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn negated(&self) -> FundamentalCycle {
        FundamentalCycle {
            dim: self.dim,
            signs: self.signs.iter().map(|s| -s).collect(),
        }
    }

    pub fn to_chain(&self, k: &SimplicialComplex) -> RationalChain {
        RationalChain {
            degree: self.dim,
            coeffs: k
                .simplices(self.dim)
                .iter()
                .zip(&self.signs)
                .map(|(s, &e)| (s.clone(), BigRational::from_integer(e.into())))
                .collect(),
        }
    }
}

/// A finite rational chain.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct RationalChain {
    pub degree: usize,
    pub coeffs: BTreeMap<Simplex, BigRational>,
}

impl RationalChain {
    pub fn boundary(&self) -> RationalChain {
        let mut out: BTreeMap<Simplex, BigRational> = BTreeMap::new();
        if self.degree > 0 {
            for (s, c) in &self.coeffs {
                for i in 0..s.len() {
                    let e = out.entry(drop_vertex(s, i)).or_insert_with(BigRational::zero);
                    if i % 2 == 0 {
                        *e += c;
                    } else {
                        *e -= c;
                    }
                }
            }
        }
        out.retain(|_, c| !c.is_zero());
        RationalChain {
            degree: self.degree.saturating_sub(1),
            coeffs: out,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.values().all(Zero::is_zero)
    }
}

impl SimplicialComplex {
    /// Coherent orientation of a closed pseudomanifold, by sign propagation
    /// across codimension-one faces. The first top simplex of each connected
    /// piece gets `+1`.
    pub fn orient(&self) -> Result<FundamentalCycle> {
        if self.dim() < 0 {
            return Err(Error::InvalidComplex("empty complex".into()));
        }
        let n = self.dim() as usize;
        if !self.is_pure() {
            return Err(Error::NotPseudomanifold("top dimension is not pure".into()));
        }
        let tops = self.simplices(n);
        if n == 0 {
            return Ok(FundamentalCycle {
                dim: 0,
                signs: vec![1; tops.len()],
            });
        }
        // codim-one face -> [(top index, incidence sign)]
        let mut cof: Vec<Vec<(usize, i8)>> = vec![Vec::new(); self.count(n - 1)];
        for (t, s) in tops.iter().enumerate() {
            for i in 0..s.len() {
                let f = self.index[n - 1][&drop_vertex(s, i)];
                cof[f].push((t, if i % 2 == 0 { 1 } else { -1 }));
            }
        }
        if let Some(f) = cof.iter().position(|c| c.len() != 2) {
            return Err(Error::NotPseudomanifold(format!(
                "face {:?} has {} top-dimensional cofaces",
                self.simplices(n - 1)[f],
                cof[f].len()
            )));
        }
        let mut signs = vec![0i8; tops.len()];
        for start in 0..tops.len() {
            if signs[start] != 0 {
                continue;
            }
            signs[start] = 1;
            let mut queue = VecDeque::from([start]);
            while let Some(t) = queue.pop_front() {
                let s = &tops[t];
                for i in 0..s.len() {
                    let f = self.index[n - 1][&drop_vertex(s, i)];
                    let (&(t1, c1), &(t2, c2)) = (&cof[f][0], &cof[f][1]);
                    let (me, other, cm, co) = if t1 == t { (t1, t2, c1, c2) } else { (t2, t1, c2, c1) };
                    // signs[me]*cm + signs[other]*co = 0
                    let want = -signs[me] * cm * co;
                    if signs[other] == 0 {
                        signs[other] = want;
                        queue.push_back(other);
                    } else if signs[other] != want {
                        return Err(Error::NonOrientable);
                    }
                }
            }
        }
        Ok(FundamentalCycle { dim: n, signs })
    }

    /// Homological manifold audit: every vertex link has the rational
    /// homology of a sphere of dimension `dim - 1`.
    pub fn audit_manifold(&self) -> Result<()> {
        let n = self.dim();
        if n < 0 {
            return Err(Error::NotManifold("empty complex".into()));
        }
        let n = n as usize;
        let sphere: Vec<usize> = if n == 0 {
            vec![]
        } else if n == 1 {
            vec![2]
        } else {
            (0..n).map(|i| usize::from(i == 0 || i == n - 1)).collect()
        };
        for v in self.vertices() {
            let lk = self.link(&[v]);
            let h = if lk.is_empty() { vec![] } else { lk.homology_ranks() };
            if h != sphere {
                return Err(Error::NotManifold(format!(
                    "link of vertex {v} has Betti numbers {h:?}"
                )));
            }
        }
        Ok(())
    }
}
