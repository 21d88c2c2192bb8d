//! Resolution of stratified spaces to manifolds with fibered corners.
//!
//! Singular strata are blown up in a linear extension of the stratification
//! order. Each blow-up of a stratum `a` creates a boundary face `∂_a` that
//! fibers over the resolved closure `B_a = res(X_{<=a})` with fiber the
//! resolved link `F_a = res(Z_a)`. When `a < b` the faces meet in a corner
//! and `∂_a ∩ ∂_b` fibers over the face `∂_a B_b` of `B_b`, which in turn
//! fibers over `B_a` with fiber the link of `a` in `X_{<=b}`.
//!
//! Everything is computed on descriptions; no blown-up complex is built.

use std::fmt::Display;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::poset::Poset;
use crate::space_desc::{closure_with_map, dim, is_pseudomanifold, link_with_map, strata, SpaceDesc};

fn as_display<T: Display, S: Serializer>(x: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(x)
}

fn poset_labels<S: Serializer>(p: &Poset, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(p.labels())
}

/// A resolved space with its boundary faces and corners.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FiberedCorners {
    #[serde(serialize_with = "as_display")]
    pub desc: SpaceDesc,
    #[serde(serialize_with = "poset_labels")]
    pub poset: Poset,
    pub total_dim: usize,
    /// Maximal elements: the interior.
    pub interior: Vec<String>,
    /// One face per singular element, in blow-up order.
    pub faces: Vec<FaceRecord>,
    pub corners: Vec<CornerRecord>,
}

/// The boundary face `F_a -> ∂_a -> B_a`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FaceRecord {
    pub stratum: String,
    pub fiber: Box<FiberedCorners>,
    pub base: Box<FiberedCorners>,
}

impl FaceRecord {
    pub fn fiber_dim(&self) -> usize {
        self.fiber.total_dim
    }

    pub fn base_dim(&self) -> usize {
        self.base.total_dim
    }
}

/// The bundle `φ_ba : ∂_a B_b -> B_a` attached to the corner `∂_a ∩ ∂_b`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CornerRecord {
    pub lower: String,
    pub upper: String,
    /// `B_a`.
    #[serde(serialize_with = "as_display")]
    pub base: SpaceDesc,
    pub base_dim: usize,
    /// `dim ∂_a B_b`.
    pub total_dim: usize,
    /// The link of `a` in `X_{<=b}`.
    #[serde(serialize_with = "as_display")]
    pub fiber: SpaceDesc,
    pub fiber_dim: usize,
}

impl FiberedCorners {
    pub fn face(&self, label: &str) -> Option<&FaceRecord> {
        self.faces.iter().find(|f| f.stratum == label)
    }

    pub fn corner(&self, lower: &str, upper: &str) -> Option<&CornerRecord> {
        self.corners.iter().find(|c| c.lower == lower && c.upper == upper)
    }

    /// Number of faces in this record and all nested fiber and base records.
    pub fn total_records(&self) -> usize {
        1 + self
            .faces
            .iter()
            .map(|f| f.fiber.total_records() + f.base.total_records())
            .sum::<usize>()
    }
}

/// Blow-up order: singular elements by height, then index.
pub fn blowup_order(p: &Poset) -> Vec<usize> {
    p.linear_extension().into_iter().filter(|&a| !p.is_maximal(a)).collect()
}

/// Resolves a pseudomanifold description.
pub fn resolve(d: &SpaceDesc) -> Result<FiberedCorners> {
    let pm = is_pseudomanifold(d)?;
    if !pm.ok {
        return Err(Error::NotPseudomanifold(pm.reason.unwrap_or_default()));
    }
    resolve_any(d)
}

/// Closures met during the recursion need not be pseudomanifolds (a
/// closure can have boundary), so nested records skip the check.
fn resolve_any(d: &SpaceDesc) -> Result<FiberedCorners> {
    let st = strata(d)?;
    let total_dim = dim(d)?;
    let p = &st.poset;
    let order = blowup_order(p);
    let mut faces = Vec::with_capacity(order.len());
    for &a in &order {
        let (link, _) = link_with_map(d, a)?;
        let (closure, _) = closure_with_map(d, a)?;
        faces.push(FaceRecord {
            stratum: p.label(a).to_string(),
            fiber: Box::new(resolve_any(&link)?),
            base: Box::new(resolve_any(&closure)?),
        });
    }
    let mut corners = Vec::new();
    for &a in &order {
        for &b in &order {
            if !p.lt(a, b) {
                continue;
            }
            let (cl_b, map) = closure_with_map(d, b)?;
            let a_in_b = map[a].expect("a lies below b");
            let (fiber, _) = link_with_map(&cl_b, a_in_b)?;
            let (base, _) = closure_with_map(d, a)?;
            corners.push(CornerRecord {
                lower: p.label(a).to_string(),
                upper: p.label(b).to_string(),
                base_dim: dim(&base)?,
                base,
                total_dim: dim(&cl_b)? - 1,
                fiber_dim: dim(&fiber)?,
                fiber,
            });
        }
    }
    Ok(FiberedCorners {
        desc: d.clone(),
        poset: p.clone(),
        total_dim,
        interior: p.maximal().into_iter().map(|a| p.label(a).to_string()).collect(),
        faces,
        corners,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IfsReport {
    pub ok: bool,
    /// The first violated condition.
    pub violation: Option<String>,
}

impl IfsReport {
    fn pass() -> Self {
        IfsReport {
            ok: true,
            violation: None,
        }
    }

    fn fail(msg: String) -> Self {
        IfsReport {
            ok: false,
            violation: Some(msg),
        }
    }
}

/// Checks the dimension equations of faces and corners, comparability of
/// corner labels, that faces match the singular elements and, recursively,
/// every fiber and base.
pub fn verify_ifs(f: &FiberedCorners) -> IfsReport {
    match check_ifs(f, "") {
        Ok(()) => IfsReport::pass(),
        Err(m) => IfsReport::fail(m),
    }
}

fn check_ifs(f: &FiberedCorners, path: &str) -> std::result::Result<(), String> {
    let p = &f.poset;
    let at = |what: String| if path.is_empty() { what } else { format!("{path}: {what}") };
    let singular: Vec<&str> = (0..p.len()).filter(|&a| !p.is_maximal(a)).map(|a| p.label(a)).collect();
    let mut labelled: Vec<&str> = f.faces.iter().map(|r| r.stratum.as_str()).collect();
    labelled.sort_unstable();
    let mut expected = singular.clone();
    expected.sort_unstable();
    if labelled != expected {
        return Err(at(format!("faces {labelled:?} do not match singular strata {expected:?}")));
    }
    let maximal: Vec<String> = p.maximal().into_iter().map(|a| p.label(a).to_string()).collect();
    if f.interior != maximal {
        return Err(at(format!("interior {:?} is not the maximal set {maximal:?}", f.interior)));
    }
    for r in &f.faces {
        if r.fiber_dim() + r.base_dim() + 1 != f.total_dim {
            return Err(at(format!(
                "face {}: dim fiber {} + dim base {} + 1 != {}",
                r.stratum,
                r.fiber_dim(),
                r.base_dim(),
                f.total_dim
            )));
        }
    }
    for c in &f.corners {
        let (Some(a), Some(b)) = (p.index_of(&c.lower), p.index_of(&c.upper)) else {
            return Err(at(format!("corner ({}, {}) names an unknown stratum", c.lower, c.upper)));
        };
        if !p.lt(a, b) {
            return Err(at(format!("corner ({}, {}) joins incomparable faces", c.lower, c.upper)));
        }
        let (fa, fb) = (f.face(&c.lower).expect("checked"), f.face(&c.upper).expect("checked"));
        if c.base_dim != fa.base_dim() {
            return Err(at(format!("corner ({}, {}): base is not B_{}", c.lower, c.upper, c.lower)));
        }
        if c.total_dim + 1 != fb.base_dim() {
            return Err(at(format!(
                "corner ({}, {}): dim ∂_a B_b = {} != dim B_b - 1 = {}",
                c.lower,
                c.upper,
                c.total_dim,
                fb.base_dim() as isize - 1
            )));
        }
        if c.base_dim + c.fiber_dim != c.total_dim {
            return Err(at(format!("corner ({}, {}): base and fiber do not add up", c.lower, c.upper)));
        }
        if fa.fiber_dim() != c.fiber_dim + fb.fiber_dim() + 1 {
            return Err(at(format!(
                "corner ({}, {}): fiber dimensions are not additive",
                c.lower, c.upper
            )));
        }
    }
    let expected_corners = singular
        .iter()
        .flat_map(|x| singular.iter().map(move |y| (x, y)))
        .filter(|(x, y)| p.lt(p.index_of(x).unwrap(), p.index_of(y).unwrap()))
        .count();
    if f.corners.len() != expected_corners {
        return Err(at(format!(
            "{} corners recorded, {expected_corners} comparable singular pairs",
            f.corners.len()
        )));
    }
    for r in &f.faces {
        check_ifs(&r.fiber, &format!("{path}/F[{}]", r.stratum))?;
        check_ifs(&r.base, &format!("{path}/B[{}]", r.stratum))?;
    }
    Ok(())
}

/// A face of a partially resolved bundle.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GridFace {
    pub stratum: String,
    #[serde(serialize_with = "as_display")]
    pub fiber: SpaceDesc,
    pub fiber_dim: usize,
    /// `B^v_a = B_a res(W) x res(Y)` or `B^h_α = res(W) x B_α res(Y)`.
    pub base: (String, String),
    pub base_dim: usize,
    pub total_dim: usize,
}

/// The grid resolution `res(W) x res(Y)` of the product bundle `W x Y -> Y`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GridResolution {
    pub fiber: FiberedCorners,
    pub base: FiberedCorners,
    pub total_dim: usize,
    pub vertical: Vec<GridFace>,
    pub horizontal: Vec<GridFace>,
    /// Pairs `(a, α)` of singular elements, as labels.
    pub schedule: Vec<(String, String)>,
}

/// Grid resolution of the product bundle with fiber `w` over `y`.
pub fn resolve_bundle(w: &SpaceDesc, y: &SpaceDesc) -> Result<GridResolution> {
    let (rw, ry) = (resolve(w)?, resolve(y)?);
    let total_dim = rw.total_dim + ry.total_dim;
    let vertical = rw
        .faces
        .iter()
        .map(|f| GridFace {
            stratum: f.stratum.clone(),
            fiber: f.fiber.desc.clone(),
            fiber_dim: f.fiber_dim(),
            base: (f.base.desc.to_string(), ry.desc.to_string()),
            base_dim: f.base_dim() + ry.total_dim,
            total_dim: total_dim - 1,
        })
        .collect();
    let horizontal = ry
        .faces
        .iter()
        .map(|f| GridFace {
            stratum: f.stratum.clone(),
            fiber: f.fiber.desc.clone(),
            fiber_dim: f.fiber_dim(),
            base: (rw.desc.to_string(), f.base.desc.to_string()),
            base_dim: rw.total_dim + f.base_dim(),
            total_dim: total_dim - 1,
        })
        .collect();
    let schedule = blowup_schedule(&rw.poset, &ry.poset)
        .into_iter()
        .map(|(a, b)| (rw.poset.label(a).to_string(), ry.poset.label(b).to_string()))
        .collect();
    Ok(GridResolution {
        fiber: rw,
        base: ry,
        total_dim,
        vertical,
        horizontal,
        schedule,
    })
}

/// Checks the pull-back squares of horizontal faces, the dimension count of
/// vertical faces and that the schedule is a linear extension.
pub fn verify_grid(g: &GridResolution) -> IfsReport {
    for (h, f) in g.horizontal.iter().zip(&g.base.faces) {
        let ok = h.stratum == f.stratum
            && h.fiber == f.fiber.desc
            && h.base.1 == f.base.desc.to_string()
            && h.base_dim == g.fiber.total_dim + f.base_dim()
            && h.fiber_dim + h.base_dim + 1 == g.total_dim;
        if !ok {
            return IfsReport::fail(format!("horizontal face {} is not a pull-back", h.stratum));
        }
    }
    if g.horizontal.len() != g.base.faces.len() || g.vertical.len() != g.fiber.faces.len() {
        return IfsReport::fail("face sets do not match the factors".into());
    }
    for v in &g.vertical {
        if v.fiber_dim + v.base_dim + 1 != g.total_dim {
            return IfsReport::fail(format!("vertical face {}: dimensions do not add up", v.stratum));
        }
    }
    let (pw, py) = (&g.fiber.poset, &g.base.poset);
    let idx: Vec<(usize, usize)> = g
        .schedule
        .iter()
        .map(|(a, b)| (pw.index_of(a).expect("label"), py.index_of(b).expect("label")))
        .collect();
    if !is_linear_extension(pw, py, &idx) {
        return IfsReport::fail("schedule is not a linear extension".into());
    }
    IfsReport::pass()
}

/// All pairs of singular elements in a linear extension of the product
/// order: by the sum of heights, then lexicographically.
pub fn blowup_schedule(sw: &Poset, sy: &Poset) -> Vec<(usize, usize)> {
    let (hw, hy) = (sw.heights(), sy.heights());
    let mut pairs: Vec<(usize, usize)> = (0..sw.len())
        .filter(|&a| !sw.is_maximal(a))
        .flat_map(|a| (0..sy.len()).filter(|&b| !sy.is_maximal(b)).map(move |b| (a, b)))
        .collect();
    pairs.sort_by_key(|&(a, b)| (hw[a] + hy[b], a, b));
    pairs
}

/// Whether `s` lists every singular pair once and never puts a pair before
/// one of its predecessors.
pub fn is_linear_extension(sw: &Poset, sy: &Poset, s: &[(usize, usize)]) -> bool {
    let total = sw.len() - sw.maximal().len();
    let total = total * (sy.len() - sy.maximal().len());
    let mut seen = std::collections::HashSet::new();
    if s.len() != total || !s.iter().all(|p| seen.insert(*p)) {
        return false;
    }
    s.iter().enumerate().all(|(i, &(a, b))| {
        s[i + 1..]
            .iter()
            .all(|&(c, d)| !(sw.leq(c, a) && sy.leq(d, b) && (c, d) != (a, b)))
    })
}
