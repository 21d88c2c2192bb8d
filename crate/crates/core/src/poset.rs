//! Finite posets used as stratification index sets.
//!
//! A [`Poset`] stores its order relation as a reflexive, transitively closed
//! boolean matrix together with the Hasse (cover) relation. Elements are
//! addressed by index; every element also carries a unique string label.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq)]
pub struct Poset {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    leq: Vec<Vec<bool>>,
    covers: Vec<Vec<usize>>,
}

impl fmt::Debug for Poset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rels: Vec<String> = self
            .cover_pairs()
            .map(|(a, b)| format!("{} < {}", self.labels[a], self.labels[b]))
            .collect();
        f.debug_struct("Poset")
            .field("elements", &self.labels)
            .field("covers", &rels)
            .finish()
    }
}

impl Poset {
    /// Builds a poset from labels and generating relations `(a, b)` meaning
    /// `a <= b`, given by index. The reflexive transitive closure is taken;
    /// cycles are rejected.
    pub fn new<S: Into<String>>(
        labels: impl IntoIterator<Item = S>,
        relations: &[(usize, usize)],
    ) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        let n = labels.len();
        let mut index = HashMap::with_capacity(n);
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(Error::InvalidPoset(format!("duplicate label `{l}`")));
            }
        }
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(a, b) in relations {
            if a >= n || b >= n {
                return Err(Error::InvalidPoset(format!(
                    "relation ({a}, {b}) out of range for {n} elements"
                )));
            }
            leq[a][b] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if leq[i][k] {
                    for j in 0..n {
                        if leq[k][j] {
                            leq[i][j] = true;
                        }
                    }
                }
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if leq[i][j] && leq[j][i] {
                    return Err(Error::InvalidPoset(format!(
                        "cycle through `{}` and `{}`",
                        labels[i], labels[j]
                    )));
                }
            }
        }
        let covers = hasse(&leq);
        Ok(Poset {
            labels,
            index,
            leq,
            covers,
        })
    }

    /// Same as [`Poset::new`] with relations given by label.
    pub fn from_labels<S: Into<String>>(
        labels: impl IntoIterator<Item = S>,
        relations: &[(&str, &str)],
    ) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        let lookup = |l: &str| {
            labels
                .iter()
                .position(|x| x == l)
                .ok_or_else(|| Error::InvalidPoset(format!("unknown label `{l}`")))
        };
        let rels = relations
            .iter()
            .map(|(a, b)| Ok((lookup(a)?, lookup(b)?)))
            .collect::<Result<Vec<_>>>()?;
        Poset::new(labels, &rels)
    }

    pub fn empty() -> Self {
        Poset::new(Vec::<String>::new(), &[]).expect("empty poset")
    }

    pub fn point(label: &str) -> Self {
        Poset::new([label], &[]).expect("one-point poset")
    }

    pub fn antichain<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Result<Self> {
        Poset::new(labels, &[])
    }

    /// The chain `0 < 1 < ... < n`; `chain(1)` is the two-element poset `[1]`.
    pub fn chain(n: usize) -> Self {
        let rels: Vec<_> = (0..n).map(|i| (i, i + 1)).collect();
        Poset::new((0..=n).map(|i| i.to_string()), &rels).expect("chain")
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a][b]
    }

    pub fn lt(&self, a: usize, b: usize) -> bool {
        a != b && self.leq[a][b]
    }

    pub fn comparable(&self, a: usize, b: usize) -> bool {
        self.leq[a][b] || self.leq[b][a]
    }

    /// Upper covers of `a` in the Hasse diagram.
    pub fn covers(&self, a: usize) -> &[usize] {
        &self.covers[a]
    }

    pub fn cover_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.covers
            .iter()
            .enumerate()
            .flat_map(|(a, cs)| cs.iter().map(move |&b| (a, b)))
    }

    pub fn strict_relation_count(&self) -> usize {
        (0..self.len())
            .map(|a| (0..self.len()).filter(|&b| self.lt(a, b)).count())
            .sum()
    }

    pub fn is_maximal(&self, a: usize) -> bool {
        (0..self.len()).all(|b| !self.lt(a, b))
    }

    pub fn is_minimal(&self, a: usize) -> bool {
        (0..self.len()).all(|b| !self.lt(b, a))
    }

    pub fn maximal(&self) -> Vec<usize> {
        (0..self.len()).filter(|&a| self.is_maximal(a)).collect()
    }

    pub fn minimal(&self) -> Vec<usize> {
        (0..self.len()).filter(|&a| self.is_minimal(a)).collect()
    }

    /// Elements strictly above `a`.
    pub fn above(&self, a: usize) -> Vec<usize> {
        (0..self.len()).filter(|&b| self.lt(a, b)).collect()
    }

    /// Elements `<= a`.
    pub fn down_closure(&self, a: usize) -> Vec<usize> {
        (0..self.len()).filter(|&b| self.leq(b, a)).collect()
    }

    /// Length of the longest chain ending at `a` (0 for minimal elements).
    pub fn height(&self, a: usize) -> usize {
        let order = self.linear_order_by_size();
        let mut h = vec![0usize; self.len()];
        for &x in &order {
            for &y in &order {
                if self.lt(y, x) {
                    h[x] = h[x].max(h[y] + 1);
                }
            }
        }
        h[a]
    }

    /// Heights of all elements.
    pub fn heights(&self) -> Vec<usize> {
        let order = self.linear_order_by_size();
        let mut h = vec![0usize; self.len()];
        for &x in &order {
            for &y in &order {
                if self.lt(y, x) {
                    h[x] = h[x].max(h[y] + 1);
                }
            }
        }
        h
    }

    // Orders elements by the size of their down-set, which refines the order.
    fn linear_order_by_size(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by_key(|&a| (0..self.len()).filter(|&b| self.leq(b, a)).count());
        order
    }

    /// Length of the longest strictly ascending chain.
    pub fn depth(&self) -> Result<usize> {
        if self.is_empty() {
            return Err(Error::EmptyPoset);
        }
        Ok(self.heights().into_iter().max().unwrap_or(0))
    }

    /// Deterministic linear extension: by height, then by index.
    pub fn linear_extension(&self) -> Vec<usize> {
        let h = self.heights();
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by_key(|&a| (h[a], a));
        order
    }

    /// Product order on pairs; element `(i, j)` has index `i * other.len() + j`
    /// and label `"(x,y)"`.
    pub fn product(&self, other: &Poset) -> Poset {
        let m = other.len();
        let labels: Vec<String> = self
            .labels
            .iter()
            .flat_map(|a| other.labels.iter().map(move |b| format!("({a},{b})")))
            .collect();
        let mut rels = Vec::new();
        for (a, b) in self.cover_pairs() {
            for j in 0..m {
                rels.push((a * m + j, b * m + j));
            }
        }
        for (a, b) in other.cover_pairs() {
            for i in 0..self.len() {
                rels.push((i * m + a, i * m + b));
            }
        }
        Poset::new(labels, &rels).expect("product of posets is a poset")
    }

    /// Adjoins a new smallest element `*` (primed if `*` is already taken) at
    /// index 0; old element `i` moves to index `i + 1`.
    pub fn cone(&self) -> Poset {
        let apex = fresh_label("*", self.labels.iter());
        let labels = std::iter::once(apex).chain(self.labels.iter().cloned());
        let mut rels: Vec<_> = (0..self.len()).map(|i| (0, i + 1)).collect();
        rels.extend(self.cover_pairs().map(|(a, b)| (a + 1, b + 1)));
        Poset::new(labels, &rels).expect("cone of a poset is a poset")
    }

    /// The induced sub-poset on `elements`, in the given order.
    pub fn induced(&self, elements: &[usize]) -> Poset {
        let labels = elements.iter().map(|&e| self.labels[e].clone());
        let mut rels = Vec::new();
        for (i, &a) in elements.iter().enumerate() {
            for (j, &b) in elements.iter().enumerate() {
                if i != j && self.leq(a, b) {
                    rels.push((i, j));
                }
            }
        }
        Poset::new(labels, &rels).expect("induced order is a poset")
    }

    /// Brute-force isomorphism test (ignores labels). Intended for small posets.
    pub fn is_isomorphic(&self, other: &Poset) -> bool {
        let n = self.len();
        if n != other.len() || self.strict_relation_count() != other.strict_relation_count() {
            return false;
        }
        let sig = |p: &Poset, a: usize| {
            (
                (0..p.len()).filter(|&b| p.lt(b, a)).count(),
                (0..p.len()).filter(|&b| p.lt(a, b)).count(),
            )
        };
        let mut map = vec![usize::MAX; n];
        let mut used = vec![false; n];
        fn extend(
            p: &Poset,
            q: &Poset,
            k: usize,
            map: &mut [usize],
            used: &mut [bool],
            sig: &dyn Fn(&Poset, usize) -> (usize, usize),
        ) -> bool {
            if k == p.len() {
                return true;
            }
            for cand in 0..q.len() {
                if used[cand] || sig(p, k) != sig(q, cand) {
                    continue;
                }
                let consistent = (0..k).all(|j| {
                    p.leq(j, k) == q.leq(map[j], cand) && p.leq(k, j) == q.leq(cand, map[j])
                });
                if !consistent {
                    continue;
                }
                map[k] = cand;
                used[cand] = true;
                if extend(p, q, k + 1, map, used, sig) {
                    return true;
                }
                used[cand] = false;
            }
            false
        }
        extend(self, other, 0, &mut map, &mut used, &sig)
    }
}

fn hasse(leq: &[Vec<bool>]) -> Vec<Vec<usize>> {
    let n = leq.len();
    (0..n)
        .map(|a| {
            (0..n)
                .filter(|&b| {
                    a != b
                        && leq[a][b]
                        && !(0..n).any(|c| c != a && c != b && leq[a][c] && leq[c][b])
                })
                .collect()
        })
        .collect()
}

/// Returns `base`, primed as often as needed to avoid every label in `taken`.
pub(crate) fn fresh_label<'a>(base: &str, taken: impl IntoIterator<Item = &'a String>) -> String {
    let taken: HashSet<&String> = taken.into_iter().collect();
    let mut label = base.to_string();
    while taken.contains(&label) {
        label.push('\'');
    }
    label
}

/// A subset of a poset, checked for being closed upwards on demand.
#[derive(Clone, Debug)]
pub struct UpwardSet<'a> {
    poset: &'a Poset,
    members: BTreeSet<usize>,
}

impl<'a> UpwardSet<'a> {
    pub fn new(poset: &'a Poset, members: impl IntoIterator<Item = usize>) -> Result<Self> {
        let members: BTreeSet<usize> = members.into_iter().collect();
        if let Some(&bad) = members.iter().find(|&&m| m >= poset.len()) {
            return Err(Error::InvalidPoset(format!("member {bad} is not an element")));
        }
        Ok(UpwardSet { poset, members })
    }

    pub fn from_labels(poset: &'a Poset, labels: &[&str]) -> Result<Self> {
        let members = labels
            .iter()
            .map(|l| {
                poset
                    .index_of(l)
                    .ok_or_else(|| Error::InvalidPoset(format!("unknown label `{l}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        UpwardSet::new(poset, members)
    }

    /// The smallest upward-closed set containing `seeds`.
    pub fn generated_by(poset: &'a Poset, seeds: &[usize]) -> Self {
        let members = (0..poset.len())
            .filter(|&b| seeds.iter().any(|&a| poset.leq(a, b)))
            .collect();
        UpwardSet { poset, members }
    }

    pub fn members(&self) -> &BTreeSet<usize> {
        &self.members
    }

    pub fn contains(&self, a: usize) -> bool {
        self.members.contains(&a)
    }

    pub fn is_upward_closed(&self) -> bool {
        self.members
            .iter()
            .all(|&x| (0..self.poset.len()).all(|y| !self.poset.leq(x, y) || self.members.contains(&y)))
    }

    pub fn is_downward_closed(&self) -> bool {
        self.members
            .iter()
            .all(|&x| (0..self.poset.len()).all(|y| !self.poset.leq(y, x) || self.members.contains(&y)))
    }

    pub fn complement(&self) -> UpwardSet<'a> {
        UpwardSet {
            poset: self.poset,
            members: (0..self.poset.len()).filter(|a| !self.members.contains(a)).collect(),
        }
    }

    pub fn union(&self, other: &UpwardSet<'a>) -> UpwardSet<'a> {
        UpwardSet {
            poset: self.poset,
            members: self.members.union(&other.members).copied().collect(),
        }
    }

    pub fn intersection(&self, other: &UpwardSet<'a>) -> UpwardSet<'a> {
        UpwardSet {
            poset: self.poset,
            members: self.members.intersection(&other.members).copied().collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_points() -> Poset {
        Poset::antichain(["a", "b"]).unwrap()
    }

    #[test]
    fn rejects_cycles_and_duplicates() {
        assert!(Poset::new(["a", "b"], &[(0, 1), (1, 0)]).is_err());
        assert!(Poset::new(["a", "a"], &[]).is_err());
        assert!(Poset::new(["a"], &[(0, 3)]).is_err());
    }

    #[test]
    fn closure_is_transitive() {
        let p = Poset::new(["a", "b", "c"], &[(0, 1), (1, 2)]).unwrap();
        assert!(p.leq(0, 2));
        assert_eq!(p.covers(0), &[1]);
        assert_eq!(p.strict_relation_count(), 3);
    }

    #[test]
    fn product_of_brackets_is_the_diamond() {
        let d = Poset::chain(1).product(&Poset::chain(1));
        assert_eq!(d.len(), 4);
        let ix = |l: &str| d.index_of(l).unwrap();
        assert!(d.lt(ix("(0,0)"), ix("(0,1)")));
        assert!(d.lt(ix("(0,0)"), ix("(1,0)")));
        assert!(d.lt(ix("(0,1)"), ix("(1,1)")));
        assert!(d.lt(ix("(1,0)"), ix("(1,1)")));
        assert!(!d.comparable(ix("(0,1)"), ix("(1,0)")));
        assert_eq!(d.strict_relation_count(), 5);
    }

    #[test]
    fn product_with_point_is_isomorphic() {
        let a = Poset::new(["x", "y", "z"], &[(0, 1), (0, 2)]).unwrap();
        assert!(a.product(&Poset::point("p")).is_isomorphic(&a));
    }

    #[test]
    fn bracket_times_chain_strict_relations() {
        let p = Poset::chain(1).product(&Poset::chain(2));
        assert_eq!(p.len(), 6);
        let mut strict = 0;
        let mut one_coordinate = 0;
        for x in 0..2 {
            for y in 0..3 {
                for x2 in 0..2 {
                    for y2 in 0..3 {
                        if x <= x2 && y <= y2 && (x, y) != (x2, y2) {
                            strict += 1;
                            if x == x2 || y == y2 {
                                one_coordinate += 1;
                            }
                        }
                    }
                }
            }
        }
        assert_eq!(p.strict_relation_count(), strict);
        assert_eq!(strict, 12);
        // relations moving a single coordinate
        let single = (0..6)
            .flat_map(|a| (0..6).map(move |b| (a, b)))
            .filter(|&(a, b)| p.lt(a, b) && (a / 3 == b / 3 || a % 3 == b % 3))
            .count();
        assert_eq!(single, one_coordinate);
        assert_eq!(single, 9);
    }

    #[test]
    fn cones() {
        let c = Poset::empty().cone();
        assert_eq!(c.len(), 1);
        let c = Poset::chain(1).cone();
        assert!(c.is_isomorphic(&Poset::chain(2)));
        assert_eq!(c.label(0), "*");
        let c = two_points().cone();
        assert_eq!(c.len(), 3);
        assert!(c.lt(0, 1) && c.lt(0, 2) && !c.comparable(1, 2));
        // nested cones get fresh apex labels
        let cc = c.cone();
        assert_eq!(cc.label(0), "*'");
    }

    #[test]
    fn depth_values() {
        assert_eq!(Poset::point("p").depth().unwrap(), 0);
        assert_eq!(Poset::chain(1).depth().unwrap(), 1);
        assert_eq!(two_points().depth().unwrap(), 0);
        assert_eq!(Poset::empty().depth(), Err(Error::EmptyPoset));
    }

    #[test]
    fn upward_sets_in_bracket() {
        let p = Poset::chain(1);
        assert!(UpwardSet::from_labels(&p, &["1"]).unwrap().is_upward_closed());
        assert!(!UpwardSet::from_labels(&p, &["0"]).unwrap().is_upward_closed());
        assert!(UpwardSet::new(&p, [7]).is_err());
    }

    #[test]
    fn complements_of_open_sets_in_diamond_are_closed() {
        let d = Poset::chain(1).product(&Poset::chain(1));
        let mut open = 0;
        for mask in 0u32..16 {
            let s = UpwardSet::new(&d, (0..4).filter(|i| mask >> i & 1 == 1)).unwrap();
            if s.is_upward_closed() {
                open += 1;
                assert!(s.complement().is_downward_closed());
            }
        }
        // upsets of the diamond: {}, {11}, {11,01}, {11,10}, {11,01,10}, all
        assert_eq!(open, 6);
    }

    #[test]
    fn linear_extension_respects_order() {
        let p = Poset::chain(2).product(&Poset::chain(1));
        let ext = p.linear_extension();
        let pos: Vec<usize> = (0..p.len())
            .map(|a| ext.iter().position(|&x| x == a).unwrap())
            .collect();
        for a in 0..p.len() {
            for b in 0..p.len() {
                if p.lt(a, b) {
                    assert!(pos[a] < pos[b]);
                }
            }
        }
    }
}
