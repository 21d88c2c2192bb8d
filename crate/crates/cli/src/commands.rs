use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

use strata::ih::{ih_report, Perversity};
use strata::orientation::run_suites;
use strata::resolution::{resolve, resolve_bundle, verify_grid, verify_ifs, FiberedCorners};
use strata::simplicial::{realize_bounded, FilteredComplex};
use strata::space_desc::dim;
use strata::ssd::{parse_ssd_file, to_json};
use strata::witt::{signature, witt_check, witt_check_complex};
use strata::{oracle, Error, SpaceDesc};

use crate::report::{join, Report};
use crate::Command;

pub enum Failure {
    /// Bad input or a failed check: exit 1.
    Validation(String),
    /// A broken internal invariant: exit 2.
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NormalizationViolation(_) => Failure::Internal(e.to_string()),
            e => Failure::Validation(e.to_string()),
        }
    }
}

pub struct Limits {
    /// `STRATA_MAX_FACETS`: top simplices of any triangulation.
    pub max_facets: usize,
    /// `STRATA_ORACLE_MAX_SIMPLICES`: size of complexes given to the
    /// dense reference computations.
    pub oracle_max: usize,
}

impl Limits {
    pub fn from_env() -> Self {
        let var = |k: &str, d: usize| std::env::var(k).ok().and_then(|v| v.parse().ok()).unwrap_or(d);
        Limits {
            max_facets: var("STRATA_MAX_FACETS", 50_000),
            oracle_max: var("STRATA_ORACLE_MAX_SIMPLICES", 3_000),
        }
    }
}

pub struct Options {
    pub perversity: String,
    pub subdivide: u32,
    pub oracle: bool,
    pub limits: Limits,
}

pub fn run(cmd: &Command, o: &Options) -> Result<Report, Failure> {
    match cmd {
        Command::Homology { file } => homology(&load(file)?, o),
        Command::Ih { file } => ih(&load(file)?, o),
        Command::Witt { file } => witt(&load(file)?, o),
        Command::Signature { file } => sig(&load(file)?),
        Command::Resolve { file, base: None } => res(&load(file)?),
        Command::Resolve { file, base: Some(b) } => grid(&load(file)?, &load(b)?),
        Command::OrientCheck => orient(),
    }
}

fn load(path: &Path) -> Result<SpaceDesc, Failure> {
    parse_ssd_file(path).map_err(|e| Failure::Validation(format!("{}: {e}", path.display())))
}

fn triangulate(d: &SpaceDesc, o: &Options) -> Result<FilteredComplex, Failure> {
    let mut k = realize_bounded(d, o.limits.max_facets)?;
    for _ in 0..o.subdivide {
        let n = k.dim().max(0) as usize;
        let growth: usize = (1..=n + 1).product();
        let facets = k.complex().facets().len();
        if facets.saturating_mul(growth) > o.limits.max_facets {
            return Err(Error::LimitExceeded(format!(
                "subdividing {facets} facets exceeds STRATA_MAX_FACETS = {}",
                o.limits.max_facets
            ))
            .into());
        }
        k = k.barycentric();
    }
    Ok(k)
}

fn oracle_guard(k: &FilteredComplex, o: &Options) -> Result<(), Failure> {
    let n = k.complex().len();
    if n > o.limits.oracle_max {
        return Err(Error::LimitExceeded(format!(
            "{n} simplices exceed STRATA_ORACLE_MAX_SIMPLICES = {}",
            o.limits.oracle_max
        ))
        .into());
    }
    Ok(())
}

fn mismatch(what: &str, a: impl std::fmt::Debug, b: impl std::fmt::Debug) -> Failure {
    Failure::Internal(format!("{what}: pipeline {a:?}, oracle {b:?}"))
}

#[derive(Serialize)]
struct HomologyPayload {
    dim: isize,
    f_vector: Vec<usize>,
    ranks: Vec<usize>,
    euler_characteristic: i64,
    subdivisions: u32,
    oracle_ranks: Option<Vec<usize>>,
}

fn homology(d: &SpaceDesc, o: &Options) -> Result<Report, Failure> {
    let k = triangulate(d, o)?;
    let cx = k.complex();
    let ranks = cx.homology_ranks();
    let oracle_ranks = if o.oracle {
        oracle_guard(&k, o)?;
        let r = oracle::homology_ranks(cx);
        if r != ranks {
            return Err(mismatch("homology", &ranks, &r));
        }
        Some(r)
    } else {
        None
    };
    let p = HomologyPayload {
        dim: cx.dim(),
        f_vector: cx.f_vector(),
        euler_characteristic: cx.euler_characteristic(),
        ranks,
        subdivisions: o.subdivide,
        oracle_ranks,
    };
    let mut t = format!("homology of {d}\n");
    writeln!(t, "  f-vector: {}", join(&p.f_vector)).unwrap();
    writeln!(t, "  betti:    {}", join(&p.ranks)).unwrap();
    writeln!(t, "  euler:    {}", p.euler_characteristic).unwrap();
    if p.oracle_ranks.is_some() {
        writeln!(t, "  oracle:   agrees").unwrap();
    }
    Ok(Report::new("homology", to_json(d), p, t))
}

/// Parses a perversity name or a comma-separated list of `p(2), p(3), ..`.
pub fn parse_perversity(s: &str, n: usize) -> Result<Perversity, Failure> {
    Ok(match s {
        "lower-middle" | "m" => Perversity::lower_middle(n),
        "upper-middle" | "n" => Perversity::upper_middle(n),
        "zero" | "0" => Perversity::zero(n),
        "top" | "t" => Perversity::top(n),
        list => {
            let values = list
                .split(',')
                .map(|v| v.trim().parse::<u32>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|_| Failure::Validation(format!("cannot read perversity `{list}`")))?;
            Perversity::new(n, values)?
        }
    })
}

#[derive(Serialize)]
struct IhPayload {
    dim: isize,
    perversity: Vec<u32>,
    ranks: Vec<usize>,
    allowable_counts: Vec<usize>,
    subdivisions: u32,
    /// Whether one more subdivision was needed for fullness.
    refined: bool,
    oracle_ranks: Option<Vec<usize>>,
}

fn ih(d: &SpaceDesc, o: &Options) -> Result<Report, Failure> {
    let k = triangulate(d, o)?;
    let n = k.dim().max(0) as usize;
    let p = parse_perversity(&o.perversity, n)?;
    let r = ih_report(&k, &p)?;
    let oracle_ranks = if o.oracle {
        let k = if r.subdivided { k.barycentric() } else { k.clone() };
        oracle_guard(&k, o)?;
        let x = oracle::ih_ranks(&k, &p);
        if x != r.ranks {
            return Err(mismatch("intersection homology", &r.ranks, &x));
        }
        Some(x)
    } else {
        None
    };
    let payload = IhPayload {
        dim: k.dim(),
        perversity: p.values().to_vec(),
        ranks: r.ranks,
        allowable_counts: r.allowable_counts,
        subdivisions: o.subdivide,
        refined: r.subdivided,
        oracle_ranks,
    };
    let mut t = format!("intersection homology of {d}\n");
    writeln!(t, "  perversity: {}", join(&payload.perversity)).unwrap();
    writeln!(t, "  ranks:      {}", join(&payload.ranks)).unwrap();
    writeln!(t, "  allowable:  {}", join(&payload.allowable_counts)).unwrap();
    if payload.oracle_ranks.is_some() {
        writeln!(t, "  oracle:     agrees").unwrap();
    }
    Ok(Report::new("ih", to_json(d), payload, t))
}

fn witt(d: &SpaceDesc, o: &Options) -> Result<Report, Failure> {
    let w = witt_check(d)?;
    let mut payload = serde_json::to_value(&w).expect("serializable");
    if o.oracle {
        let k = triangulate(d, o)?;
        oracle_guard(&k, o)?;
        let c = witt_check_complex(&k)?;
        if c.witt != w.witt {
            return Err(mismatch("witt verdict", w.witt, c.witt));
        }
        payload["oracle_witt"] = Value::Bool(c.witt);
    }
    let mut t = format!("witt {d}: {}\n", w.witt);
    for e in &w.strata {
        let mid = e.middle_rank.map_or("-".to_string(), |r| r.to_string());
        writeln!(t, "  {:<16} link dim {}  middle IH {}  {}", e.stratum, e.link_dim, mid, if e.ok { "ok" } else { "fails" })
            .unwrap();
    }
    Ok(Report::new("witt", to_json(d), payload, t))
}

#[derive(Serialize)]
struct SignaturePayload {
    dim: usize,
    signature: i64,
}

fn sig(d: &SpaceDesc) -> Result<Report, Failure> {
    let p = SignaturePayload {
        dim: dim(d)?,
        signature: signature(d)?,
    };
    let t = format!("signature of {d}: {}\n", p.signature);
    Ok(Report::new("signature", to_json(d), p, t))
}

fn describe(f: &FiberedCorners, indent: usize, t: &mut String) {
    let pad = " ".repeat(indent);
    for r in &f.faces {
        writeln!(
            t,
            "{pad}face {}: fiber {} (dim {}) over {} (dim {})",
            r.stratum,
            r.fiber.desc,
            r.fiber_dim(),
            r.base.desc,
            r.base_dim()
        )
        .unwrap();
    }
    for c in &f.corners {
        writeln!(
            t,
            "{pad}corner {} < {}: fiber {} (dim {}) over {} (dim {})",
            c.lower, c.upper, c.fiber, c.fiber_dim, c.base, c.base_dim
        )
        .unwrap();
    }
}

fn res(d: &SpaceDesc) -> Result<Report, Failure> {
    let f = resolve(d)?;
    let v = verify_ifs(&f);
    let mut t = format!("resolution of {d} (dim {})\n", f.total_dim);
    describe(&f, 2, &mut t);
    writeln!(t, "  iterated fibration structure: {}", if v.ok { "ok" } else { "violated" }).unwrap();
    if let Some(m) = &v.violation {
        writeln!(t, "  {m}").unwrap();
    }
    let ok = v.ok;
    let mut r = Report::new("resolve", to_json(d), serde_json::json!({ "resolution": f, "check": v }), t);
    r.ok = ok;
    Ok(r)
}

fn grid(w: &SpaceDesc, y: &SpaceDesc) -> Result<Report, Failure> {
    let g = resolve_bundle(w, y)?;
    let v = verify_grid(&g);
    let mut t = format!("grid resolution of {w} x {y} (dim {})\n", g.total_dim);
    for f in &g.vertical {
        writeln!(t, "  vertical {}: fiber {} over {} x {}", f.stratum, f.fiber, f.base.0, f.base.1).unwrap();
    }
    for f in &g.horizontal {
        writeln!(t, "  horizontal {}: fiber {} over {} x {}", f.stratum, f.fiber, f.base.0, f.base.1).unwrap();
    }
    let sched: Vec<String> = g.schedule.iter().map(|(a, b)| format!("({a},{b})")).collect();
    writeln!(t, "  schedule: {}", sched.join(" ")).unwrap();
    writeln!(t, "  grid check: {}", if v.ok { "ok" } else { "violated" }).unwrap();
    let input = serde_json::json!({ "fiber": to_json(w), "base": to_json(y) });
    let ok = v.ok;
    let mut r = Report::new("resolve", input, serde_json::json!({ "grid": g, "check": v }), t);
    r.ok = ok;
    Ok(r)
}

fn orient() -> Result<Report, Failure> {
    let suites = run_suites();
    let mut t = String::new();
    for s in &suites {
        writeln!(t, "{:<4} {:>5} cases  {}", if s.passed { "pass" } else { "FAIL" }, s.cases, s.name).unwrap();
        if let Some(f) = &s.first_failure {
            writeln!(t, "      first failure: {f}").unwrap();
        }
    }
    let ok = suites.iter().all(|s| s.passed);
    let mut r = Report::new("orient-check", Value::Null, serde_json::json!({ "suites": suites, "all_passed": ok }), t);
    r.ok = ok;
    Ok(r)
}
