//! Structural descriptions of compact stratified spaces.
//!
//! A [`SpaceDesc`] is built from triangulated atoms by cones, suspensions,
//! joins and products. Its stratification poset, stratum dimensions, links
//! and stratum closures are computed by structural rules, without
//! triangulating.
//!
//! Joins use the identity `C(Z1) x C(Z2) = C(Z1 * Z2)`: the strata of
//! `Z1 * Z2` are the pairs of `cone(A1) x cone(A2)` other than `(*, *)`.
//! When one side is two points (as in a suspension) the pairs `(*, b)` lie in
//! the interior of the strata `(p, b)` and are merged with them.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::poset::{fresh_label, Poset};
use crate::simplicial::FilteredComplex;

/// A triangulated building block.
#[derive(Clone, Debug)]
pub struct Atom {
    name: String,
    complex: Arc<FilteredComplex>,
}

impl PartialEq for Atom {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
            && (Arc::ptr_eq(&self.complex, &other.complex) || self.complex == other.complex)
    }
}

impl Atom {
    /// Wraps a filtered complex; vertex ids are renumbered to `0..n`.
    pub fn new(name: impl Into<String>, complex: FilteredComplex) -> Self {
        Atom {
            name: name.into(),
            complex: Arc::new(complex.compacted()),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn complex(&self) -> &FilteredComplex {
        &self.complex
    }

    pub fn is_point(&self) -> bool {
        self.complex.complex().len() == 1
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum SpaceDesc {
    /// The empty space, used as the link of a regular stratum.
    Empty,
    Atom(Atom),
    /// The compact cone `X x [0,1] / X x {0}`.
    Cone(Box<SpaceDesc>),
    Suspension(Box<SpaceDesc>),
    Join(Box<SpaceDesc>, Box<SpaceDesc>),
    Product(Box<SpaceDesc>, Box<SpaceDesc>),
}

impl fmt::Display for SpaceDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpaceDesc::Empty => write!(f, "empty"),
            SpaceDesc::Atom(a) => write!(f, "{}", a.name),
            SpaceDesc::Cone(x) => write!(f, "cone({x})"),
            SpaceDesc::Suspension(x) => write!(f, "susp({x})"),
            SpaceDesc::Join(x, y) => write!(f, "join({x}, {y})"),
            SpaceDesc::Product(x, y) => write!(f, "prod({x}, {y})"),
        }
    }
}

/// Poset and stratum dimensions of a description.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Strata {
    pub poset: Poset,
    pub dims: Vec<usize>,
}

impl Strata {
    pub fn singular(&self) -> Vec<usize> {
        (0..self.poset.len()).filter(|&a| !self.poset.is_maximal(a)).collect()
    }
}

/// A stratum of a description, addressed by poset element.
#[derive(Clone, Debug, PartialEq)]
pub struct StratumRef {
    pub desc: SpaceDesc,
    pub element: usize,
}

impl StratumRef {
    pub fn new(desc: SpaceDesc, label: &str) -> Result<Self> {
        let element = strat_poset_of(&desc)?
            .index_of(label)
            .ok_or_else(|| Error::UnknownStratum(label.to_string()))?;
        Ok(StratumRef { desc, element })
    }

    pub fn label(&self) -> String {
        strat_poset_of(&self.desc)
            .map(|p| p.label(self.element).to_string())
            .unwrap_or_default()
    }
}

/// Outcome of the pseudomanifold check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PseudomanifoldReport {
    pub ok: bool,
    /// The offending stratum, when there is one.
    pub stratum: Option<String>,
    pub reason: Option<String>,
}

impl SpaceDesc {
    pub fn atom(a: Atom) -> Self {
        SpaceDesc::Atom(a)
    }

    pub fn cone(x: SpaceDesc) -> Self {
        SpaceDesc::Cone(Box::new(x))
    }

    pub fn suspension(x: SpaceDesc) -> Self {
        SpaceDesc::Suspension(Box::new(x))
    }

    /// `Join`, with the empty space as unit.
    pub fn join(x: SpaceDesc, y: SpaceDesc) -> Self {
        match (x, y) {
            (SpaceDesc::Empty, y) => y,
            (x, SpaceDesc::Empty) => x,
            (x, y) => SpaceDesc::Join(Box::new(x), Box::new(y)),
        }
    }

    pub fn product(x: SpaceDesc, y: SpaceDesc) -> Self {
        SpaceDesc::Product(Box::new(x), Box::new(y))
    }

    pub fn is_point(&self) -> bool {
        matches!(self, SpaceDesc::Atom(a) if a.is_point())
    }

    /// Number of `Cone`, `Suspension` and `Join` constructors on the longest
    /// root-to-leaf path.
    pub fn nesting(&self) -> usize {
        match self {
            SpaceDesc::Empty | SpaceDesc::Atom(_) => 0,
            SpaceDesc::Cone(x) | SpaceDesc::Suspension(x) => 1 + x.nesting(),
            SpaceDesc::Join(x, y) => 1 + x.nesting().max(y.nesting()),
            SpaceDesc::Product(x, y) => x.nesting() + y.nesting(),
        }
    }
}

/// Dimension of the regular part.
pub fn dim(d: &SpaceDesc) -> Result<usize> {
    match d {
        SpaceDesc::Empty => Err(Error::InvalidComplex("the empty space has no dimension".into())),
        SpaceDesc::Atom(a) => {
            let k = a.complex.complex();
            if !k.is_pure() {
                return Err(Error::MixedDimension(a.name.clone()));
            }
            Ok(k.dim() as usize)
        }
        SpaceDesc::Cone(x) | SpaceDesc::Suspension(x) => Ok(dim(x)? + 1),
        SpaceDesc::Join(x, y) => Ok(dim(x)? + dim(y)? + 1),
        SpaceDesc::Product(x, y) => Ok(dim(x)? + dim(y)?),
    }
}

pub fn strat_poset_of(d: &SpaceDesc) -> Result<Poset> {
    Ok(strata(d)?.poset)
}

/// Stratification poset and stratum dimensions.
pub fn strata(d: &SpaceDesc) -> Result<Strata> {
    match d {
        SpaceDesc::Empty => Ok(Strata {
            poset: Poset::empty(),
            dims: vec![],
        }),
        SpaceDesc::Atom(a) => Ok(Strata {
            poset: a.complex.poset().clone(),
            dims: a.complex.stratum_dims().to_vec(),
        }),
        SpaceDesc::Cone(x) => {
            let s = strata(x)?;
            let dims = std::iter::once(0).chain(s.dims.iter().map(|d| d + 1)).collect();
            Ok(Strata {
                poset: s.poset.cone(),
                dims,
            })
        }
        SpaceDesc::Suspension(x) => Ok(JoinLayout::new(&poles_strata(), &strata(x)?).strata),
        SpaceDesc::Join(x, y) => Ok(JoinLayout::new(&strata(x)?, &strata(y)?).strata),
        SpaceDesc::Product(x, y) => {
            let (s, t) = (strata(x)?, strata(y)?);
            let dims = s
                .dims
                .iter()
                .flat_map(|a| t.dims.iter().map(move |b| a + b))
                .collect();
            Ok(Strata {
                poset: s.poset.product(&t.poset),
                dims,
            })
        }
    }
}

fn poles_strata() -> Strata {
    Strata {
        poset: Poset::antichain(["n", "s"]).expect("poles"),
        dims: vec![0, 0],
    }
}

/// A side of a join: `None` is the cone point `*`.
pub(crate) type Side = Option<usize>;

/// How the strata of a join arise from pairs in `cone(A1) x cone(A2)`.
#[derive(Clone, Debug)]
pub(crate) struct JoinLayout {
    pub strata: Strata,
    /// Every pair other than `(*, *)` mapped to its stratum.
    pub raw: HashMap<(Side, Side), usize>,
    pub members: Vec<Vec<(Side, Side)>>,
    pub left_poles: bool,
    pub right_poles: bool,
}

fn two_points(s: &Strata) -> bool {
    s.dims == [0, 0]
}

fn side_leq(p: &Poset, x: Side, y: Side) -> bool {
    match (x, y) {
        (None, _) => true,
        (Some(_), None) => false,
        (Some(a), Some(b)) => p.leq(a, b),
    }
}

impl JoinLayout {
    pub fn new(l: &Strata, r: &Strata) -> Self {
        if l.poset.is_empty() || r.poset.is_empty() {
            let (s, left_empty) = if l.poset.is_empty() { (r, true) } else { (l, false) };
            let raw = (0..s.poset.len())
                .map(|i| (if left_empty { (None, Some(i)) } else { (Some(i), None) }, i))
                .collect::<HashMap<_, _>>();
            let members = (0..s.poset.len())
                .map(|i| vec![if left_empty { (None, Some(i)) } else { (Some(i), None) }])
                .collect();
            return JoinLayout {
                strata: s.clone(),
                raw,
                members,
                left_poles: false,
                right_poles: false,
            };
        }
        let (lp, rp) = (two_points(l), two_points(r));
        let mut pairs: Vec<(Side, Side)> = Vec::new();
        pairs.extend((0..l.poset.len()).map(|a| (Some(a), None)));
        pairs.extend((0..r.poset.len()).map(|b| (None, Some(b))));
        for a in 0..l.poset.len() {
            pairs.extend((0..r.poset.len()).map(|b| (Some(a), Some(b))));
        }
        #[derive(PartialEq, Eq, Hash, Clone, Copy)]
        enum Key {
            All,
            Right(usize),
            Left(usize),
            Raw(Side, Side),
        }
        let key = |(x, y): (Side, Side)| match (x, y) {
            _ if lp && rp => Key::All,
            (_, Some(b)) if lp => Key::Right(b),
            (Some(a), _) if rp => Key::Left(a),
            _ => Key::Raw(x, y),
        };
        let mut class_of: HashMap<Key, usize> = HashMap::new();
        let mut keys: Vec<Key> = Vec::new();
        let mut members: Vec<Vec<(Side, Side)>> = Vec::new();
        let mut raw = HashMap::new();
        for &p in &pairs {
            let k = key(p);
            let c = *class_of.entry(k).or_insert_with(|| {
                keys.push(k);
                members.push(Vec::new());
                keys.len() - 1
            });
            members[c].push(p);
            raw.insert(p, c);
        }
        let ll = |a: usize| l.poset.label(a).to_string();
        let rl = |b: usize| r.poset.label(b).to_string();
        let mut labels: Vec<String> = Vec::new();
        for k in &keys {
            let base = match *k {
                Key::All => "reg".to_string(),
                Key::Right(b) => rl(b),
                Key::Left(a) => ll(a),
                Key::Raw(Some(a), None) if lp => ll(a),
                Key::Raw(None, Some(b)) if rp => rl(b),
                Key::Raw(Some(a), None) => format!("({},*)", ll(a)),
                Key::Raw(None, Some(b)) => format!("(*,{})", rl(b)),
                Key::Raw(Some(a), Some(b)) => format!("({},{})", ll(a), rl(b)),
                Key::Raw(None, None) => unreachable!("(*,*) is not a stratum"),
            };
            let fresh = fresh_label(&base, labels.iter());
            labels.push(fresh);
        }
        let pdim = |(x, y): (Side, Side)| match (x, y) {
            (Some(a), Some(b)) => l.dims[a] + r.dims[b] + 1,
            (Some(a), None) => l.dims[a],
            (None, Some(b)) => r.dims[b],
            (None, None) => unreachable!(),
        };
        let dims: Vec<usize> = members
            .iter()
            .map(|ms| ms.iter().map(|&p| pdim(p)).max().expect("nonempty class"))
            .collect();
        let mut rels = Vec::new();
        for &p in &pairs {
            for &q in &pairs {
                if p != q && side_leq(&l.poset, p.0, q.0) && side_leq(&r.poset, p.1, q.1) {
                    let (cp, cq) = (raw[&p], raw[&q]);
                    if cp != cq {
                        rels.push((cp, cq));
                    }
                }
            }
        }
        let poset = Poset::new(labels, &rels).expect("join strata form a poset");
        JoinLayout {
            strata: Strata { poset, dims },
            raw,
            members,
            left_poles: lp,
            right_poles: rp,
        }
    }

    fn pair_leq(&self, l: &Poset, r: &Poset, p: (Side, Side), q: (Side, Side)) -> bool {
        side_leq(l, p.0, q.0) && side_leq(r, p.1, q.1)
    }
}

/// The kind of a join stratum.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum JoinClass {
    Raw(Side, Side),
    /// `(*, b)` merged with `(p, b)` for both poles `p` on the left.
    Right(usize),
    /// `(a, *)` merged with `(a, q)` for both poles `q` on the right.
    Left(usize),
    All,
}

impl JoinLayout {
    pub fn class(&self, e: usize) -> JoinClass {
        let ms = &self.members[e];
        if ms.len() == 1 {
            return JoinClass::Raw(ms[0].0, ms[0].1);
        }
        if self.left_poles && self.right_poles {
            return JoinClass::All;
        }
        if self.left_poles {
            JoinClass::Right(ms.iter().find_map(|m| m.1).expect("member"))
        } else {
            JoinClass::Left(ms.iter().find_map(|m| m.0).expect("member"))
        }
    }
}

/// Map from the elements of a space to those of a derived space; `None` for
/// elements with no image.
pub type ElementMap = Vec<Option<usize>>;

/// Link of a stratum.
pub fn link_of(s: &StratumRef) -> Result<SpaceDesc> {
    Ok(link_with_map(&s.desc, s.element)?.0)
}

/// Link of element `e`, together with the map sending every element above
/// `e` to the corresponding element of the link.
pub fn link_with_map(d: &SpaceDesc, e: usize) -> Result<(SpaceDesc, ElementMap)> {
    let st = strata(d)?;
    if e >= st.poset.len() {
        return Err(Error::UnknownStratum(e.to_string()));
    }
    if st.poset.is_maximal(e) {
        return Err(Error::RegularStratum(st.poset.label(e).to_string()));
    }
    let n = st.poset.len();
    match d {
        SpaceDesc::Empty => unreachable!("empty poset"),
        SpaceDesc::Atom(a) => {
            let lk = a.complex.link_of_stratum(e)?;
            let mut map = vec![None; n];
            for b in st.poset.above(e) {
                let i = lk.poset().index_of(st.poset.label(b)).ok_or_else(|| {
                    Error::InvalidFiltration(format!(
                        "stratum `{}` does not meet the link of `{}`",
                        st.poset.label(b),
                        st.poset.label(e)
                    ))
                })?;
                map[b] = Some(i);
            }
            let name = format!("lk({},{})", a.name, st.poset.label(e));
            Ok((SpaceDesc::Atom(Atom::new(name, lk)), map))
        }
        SpaceDesc::Cone(x) => {
            if e == 0 {
                let map = (0..n).map(|b| b.checked_sub(1)).collect();
                return Ok(((**x).clone(), map));
            }
            let (lk, m) = link_with_map(x, e - 1)?;
            let map = (0..n).map(|b| if b == 0 { None } else { m[b - 1] }).collect();
            Ok((lk, map))
        }
        SpaceDesc::Product(x, y) => {
            let (sx, sy) = (strata(x)?, strata(y)?);
            let m = sy.poset.len();
            let (i, j) = (e / m, e % m);
            let side = |z: &SpaceDesc, s: &Strata, k: usize| -> Result<(SpaceDesc, ElementMap, Strata)> {
                if s.poset.is_maximal(k) {
                    Ok((SpaceDesc::Empty, vec![None; s.poset.len()], strata(&SpaceDesc::Empty)?))
                } else {
                    let (lk, map) = link_with_map(z, k)?;
                    let ls = strata(&lk)?;
                    Ok((lk, map, ls))
                }
            };
            let (lx, mx, sx_l) = side(x, &sx, i)?;
            let (ly, my, sy_l) = side(y, &sy, j)?;
            let layout = JoinLayout::new(&sx_l, &sy_l);
            let mut map = vec![None; n];
            for b in st.poset.above(e) {
                let (bi, bj) = (b / m, b % m);
                let p = (if bi == i { None } else { mx[bi] }, if bj == j { None } else { my[bj] });
                map[b] = Some(layout.raw[&p]);
            }
            Ok((SpaceDesc::join(lx, ly), map))
        }
        SpaceDesc::Join(..) | SpaceDesc::Suspension(_) => {
            let (x, y, sx, sy) = join_sides(d)?;
            let layout = JoinLayout::new(&sx, &sy);
            let mut map = vec![None; n];
            match layout.class(e) {
                JoinClass::All => unreachable!("regular"),
                JoinClass::Right(b) => {
                    let (lk, mb) = link_with_map(&y, b)?;
                    for c in st.poset.above(e) {
                        let JoinClass::Right(b2) = layout.class(c) else {
                            unreachable!("classes above a merged class are merged")
                        };
                        map[c] = mb[b2];
                    }
                    Ok((lk, map))
                }
                JoinClass::Left(a) => {
                    let (lk, ma) = link_with_map(&x, a)?;
                    for c in st.poset.above(e) {
                        let JoinClass::Left(a2) = layout.class(c) else {
                            unreachable!("classes above a merged class are merged")
                        };
                        map[c] = ma[a2];
                    }
                    Ok((lk, map))
                }
                JoinClass::Raw(u, v) => {
                    // link of the left part: L_a if u = a, the whole left space if u = *
                    let part = |z: &SpaceDesc, s: &Strata, k: Side| -> Result<(SpaceDesc, ElementMap, Strata)> {
                        match k {
                            None => Ok((z.clone(), (0..s.poset.len()).map(Some).collect(), s.clone())),
                            Some(k) if s.poset.is_maximal(k) => {
                                Ok((SpaceDesc::Empty, vec![None; s.poset.len()], strata(&SpaceDesc::Empty)?))
                            }
                            Some(k) => {
                                let (lk, m) = link_with_map(z, k)?;
                                let ls = strata(&lk)?;
                                Ok((lk, m, ls))
                            }
                        }
                    };
                    let (lx, mx, lsx) = part(&x, &sx, u)?;
                    let (ly, my, lsy) = part(&y, &sy, v)?;
                    let inner = JoinLayout::new(&lsx, &lsy);
                    let here = (u, v);
                    for c in st.poset.above(e) {
                        let p = layout.members[c]
                            .iter()
                            .copied()
                            .find(|&p| layout.pair_leq(&sx.poset, &sy.poset, here, p))
                            .expect("a member above");
                        let img = |k: Side, at: Side, m: &ElementMap| -> Side {
                            if k == at {
                                None
                            } else {
                                m[k.expect("above a cone point is a point")]
                            }
                        };
                        let q = (img(p.0, u, &mx), img(p.1, v, &my));
                        map[c] = Some(inner.raw[&q]);
                    }
                    Ok((SpaceDesc::join(lx, ly), map))
                }
            }
        }
    }
}

/// Left and right operands of a join; a suspension is a join with the poles.
pub(crate) fn join_sides(d: &SpaceDesc) -> Result<(SpaceDesc, SpaceDesc, Strata, Strata)> {
    match d {
        SpaceDesc::Join(x, y) => Ok(((**x).clone(), (**y).clone(), strata(x)?, strata(y)?)),
        SpaceDesc::Suspension(y) => Ok((crate::atoms::poles(), (**y).clone(), poles_strata(), strata(y)?)),
        _ => unreachable!("not a join"),
    }
}

/// Closure of element `e`, with the map sending every element below `e` to
/// the corresponding element of the closure.
pub fn closure_with_map(d: &SpaceDesc, e: usize) -> Result<(SpaceDesc, ElementMap)> {
    let st = strata(d)?;
    if e >= st.poset.len() {
        return Err(Error::UnknownStratum(e.to_string()));
    }
    let n = st.poset.len();
    let below = st.poset.down_closure(e);
    match d {
        SpaceDesc::Empty => unreachable!("empty poset"),
        SpaceDesc::Atom(a) => {
            let mut map = vec![None; n];
            for (i, &b) in below.iter().enumerate() {
                map[b] = Some(i);
            }
            if below.len() == n {
                return Ok((d.clone(), map));
            }
            let cl = a.complex.closure(e);
            if cl.complex().len() == 1 {
                return Ok((crate::atoms::point(), map));
            }
            let name = format!("{}[{}]", a.name, st.poset.label(e));
            Ok((SpaceDesc::Atom(Atom::new(name, cl)), map))
        }
        SpaceDesc::Cone(x) => {
            let mut map = vec![None; n];
            map[0] = Some(0);
            if e == 0 {
                return Ok((crate::atoms::point(), map));
            }
            let (cl, m) = closure_with_map(x, e - 1)?;
            for b in 1..n {
                map[b] = m[b - 1].map(|i| i + 1);
            }
            Ok((SpaceDesc::cone(cl), map))
        }
        SpaceDesc::Product(x, y) => {
            let m = strata(y)?.poset.len();
            let (i, j) = (e / m, e % m);
            let (cx, mx) = closure_with_map(x, i)?;
            let (cy, my) = closure_with_map(y, j)?;
            let my_len = strata(&cy)?.poset.len();
            let mut map = vec![None; n];
            for &b in &below {
                let (bi, bj) = (b / m, b % m);
                let (u, v) = (mx[bi].expect("below"), my[bj].expect("below"));
                map[b] = Some(if cx.is_point() {
                    v
                } else if cy.is_point() {
                    u
                } else {
                    u * my_len + v
                });
            }
            let desc = if cx.is_point() {
                cy
            } else if cy.is_point() {
                cx
            } else {
                SpaceDesc::product(cx, cy)
            };
            Ok((desc, map))
        }
        SpaceDesc::Join(..) | SpaceDesc::Suspension(_) => {
            let (x, y, sx, sy) = join_sides(d)?;
            let layout = JoinLayout::new(&sx, &sy);
            let mut map = vec![None; n];
            match layout.class(e) {
                JoinClass::All => {
                    for (b, slot) in map.iter_mut().enumerate() {
                        *slot = Some(b);
                    }
                    Ok((d.clone(), map))
                }
                JoinClass::Raw(Some(a), None) => {
                    let (cl, ma) = closure_with_map(&x, a)?;
                    for &c in &below {
                        let p = layout.members[c]
                            .iter()
                            .find(|p| p.1.is_none())
                            .expect("member on the left");
                        map[c] = ma[p.0.expect("left point")];
                    }
                    Ok((cl, map))
                }
                JoinClass::Raw(None, Some(b)) => {
                    let (cl, mb) = closure_with_map(&y, b)?;
                    for &c in &below {
                        let p = layout.members[c]
                            .iter()
                            .find(|p| p.0.is_none())
                            .expect("member on the right");
                        map[c] = mb[p.1.expect("right point")];
                    }
                    Ok((cl, map))
                }
                JoinClass::Raw(u, v) => {
                    // both sides are points of their spaces
                    let (a, b) = (u.expect("left"), v.expect("right"));
                    let (cx, ma) = closure_with_map(&x, a)?;
                    let (cy, mb) = closure_with_map(&y, b)?;
                    let inner = JoinLayout::new(&strata(&cx)?, &strata(&cy)?);
                    for &c in &below {
                        let p = layout.members[c]
                            .iter()
                            .copied()
                            .find(|&p| layout.pair_leq(&sx.poset, &sy.poset, p, (u, v)))
                            .expect("a member below");
                        let q = (p.0.map(|k| ma[k].expect("below")), p.1.map(|k| mb[k].expect("below")));
                        map[c] = Some(inner.raw[&q]);
                    }
                    Ok((SpaceDesc::join(cx, cy), map))
                }
                JoinClass::Right(b) => {
                    let (cy, mb) = closure_with_map(&y, b)?;
                    let inner = JoinLayout::new(&sx, &strata(&cy)?);
                    for &c in &below {
                        let p = layout.members[c][0];
                        let q = (p.0, p.1.map(|k| mb[k].expect("below")));
                        map[c] = Some(inner.raw[&q]);
                    }
                    let desc = match d {
                        SpaceDesc::Suspension(_) => SpaceDesc::suspension(cy),
                        _ => SpaceDesc::join(x, cy),
                    };
                    Ok((desc, map))
                }
                JoinClass::Left(a) => {
                    let (cx, ma) = closure_with_map(&x, a)?;
                    let inner = JoinLayout::new(&strata(&cx)?, &sy);
                    for &c in &below {
                        let p = layout.members[c][0];
                        let q = (p.0.map(|k| ma[k].expect("below")), p.1);
                        map[c] = Some(inner.raw[&q]);
                    }
                    Ok((SpaceDesc::join(cx, y), map))
                }
            }
        }
    }
}

pub fn closure_of(s: &StratumRef) -> Result<SpaceDesc> {
    Ok(closure_with_map(&s.desc, s.element)?.0)
}

/// Checks density and purity of the regular part and codimension at least
/// two for singular strata. Atoms are also checked for branching of the
/// regular part along codimension-one faces.
pub fn is_pseudomanifold(d: &SpaceDesc) -> Result<PseudomanifoldReport> {
    let fail = |stratum: Option<String>, reason: String| PseudomanifoldReport {
        ok: false,
        stratum,
        reason: Some(reason),
    };
    if let Err(Error::MixedDimension(name)) = dim(d) {
        return Ok(fail(None, format!("atom `{name}` has facets of mixed dimension")));
    }
    let st = strata(d)?;
    let n = st.dims.iter().copied().max().unwrap_or(0);
    for a in 0..st.poset.len() {
        let label = st.poset.label(a).to_string();
        if st.poset.is_maximal(a) && st.dims[a] != n {
            return Ok(fail(Some(label), format!("regular stratum of dimension {} < {n}", st.dims[a])));
        }
        if !st.poset.is_maximal(a) && n - st.dims[a] < 2 {
            return Ok(fail(Some(label), format!("singular stratum of codimension {}", n - st.dims[a])));
        }
    }
    if let Some(r) = branching(d)? {
        return Ok(fail(None, r));
    }
    Ok(PseudomanifoldReport {
        ok: true,
        stratum: None,
        reason: None,
    })
}

fn branching(d: &SpaceDesc) -> Result<Option<String>> {
    match d {
        SpaceDesc::Empty => Ok(None),
        SpaceDesc::Atom(a) => {
            let fc = &a.complex;
            let k = fc.complex();
            let n = k.dim();
            if n < 1 {
                return Ok(None);
            }
            let n = n as usize;
            let mut cof = vec![0usize; k.count(n - 1)];
            for s in k.simplices(n) {
                for i in 0..s.len() {
                    let f = crate::simplicial::drop_vertex(s, i);
                    cof[k.index_of(&f).expect("face")] += 1;
                }
            }
            for (i, f) in k.simplices(n - 1).iter().enumerate() {
                if fc.poset().is_maximal(fc.label(n - 1, i)) && cof[i] > 2 {
                    return Ok(Some(format!("atom `{}` branches along {f:?}", a.name)));
                }
            }
            Ok(None)
        }
        SpaceDesc::Cone(x) | SpaceDesc::Suspension(x) => branching(x),
        SpaceDesc::Join(x, y) | SpaceDesc::Product(x, y) => Ok(branching(x)?.or(branching(y)?)),
    }
}
