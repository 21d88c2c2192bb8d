//! Acceptance suite. Prints one line per criterion and exits non-zero when a
//! criterion fails that is not listed in `KNOWN_FAILING`.

use std::collections::HashSet;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use strata::atoms::{self, named};
use strata::ih::{ih_report, ih_ranks, lower_middle, Perversity};
use strata::orientation::{
    boundary_absorbed, boundary_factor, compose_transfer, nns_transfer, normalization_identity,
    orientation_compat_check, orientation_compat_sides, psi2, sign_norm, Dyadic, LaurentKO, LaurentKU,
    TransferSymbol,
};
use strata::resolution::{
    resolve, resolve_bundle, verify_grid, verify_ifs, CornerRecord, FiberedCorners,
};
use strata::simplicial::{realize, FilteredComplex, SimplicialComplex};
use strata::space_desc::{strat_poset_of, strata};
use strata::ssd::parse_ssd_file;
use strata::witt::{signature, witt_check};
use strata::{oracle, Error, SpaceDesc};

/// Criteria whose literal statement cannot hold; see the decisions log.
const KNOWN_FAILING: &[&str] = &["7"];

struct Outcome {
    ok: bool,
    notes: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Outcome { ok: true, notes: vec![] }
    }

    fn check(&mut self, cond: bool, what: impl Into<String>) {
        if !cond {
            self.ok = false;
            self.notes.push(format!("failed: {}", what.into()));
        }
    }

    fn note(&mut self, what: impl Into<String>) {
        self.notes.push(what.into());
    }
}

fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../cli/examples")
}

fn corpus() -> Vec<(String, SpaceDesc, Value)> {
    let text = std::fs::read_to_string(corpus_dir().join("manifest.json")).unwrap();
    let m: serde_json::Map<String, Value> = serde_json::from_str(&text).unwrap();
    m.into_iter()
        .map(|(f, v)| {
            let d = parse_ssd_file(&corpus_dir().join(&f)).unwrap();
            (f, d, v)
        })
        .collect()
}

fn ranks(v: &Value) -> Option<Vec<usize>> {
    v.as_array().map(|a| a.iter().map(|x| x.as_u64().unwrap() as usize).collect())
}

fn s(n: &str) -> SpaceDesc {
    named(n).unwrap()
}

fn c1_witt() -> Outcome {
    let mut o = Outcome::new();
    let limit = Duration::from_secs(1);
    let mut case = |name: String, d: SpaceDesc, want: bool| {
        let t = Instant::now();
        let got = witt_check(&d).map(|r| r.witt);
        let dt = t.elapsed();
        o.check(got == Ok(want), format!("{name}: {got:?}, expected {want}"));
        o.check(dt < limit, format!("{name} took {dt:?}"));
    };
    for a in atoms::NAMES {
        case(a.to_string(), s(a), true);
    }
    case("susp(S2)".into(), SpaceDesc::suspension(s("S2")), true);
    case("susp(T2)".into(), SpaceDesc::suspension(s("T2")), false);
    case("prod(susp(S2), S1)".into(), SpaceDesc::product(SpaceDesc::suspension(s("S2")), s("S1")), true);
    o
}

fn c2_signatures() -> Outcome {
    let mut o = Outcome::new();
    let t = Instant::now();
    let cases = [
        ("S4", s("S4"), 0),
        ("CP2", s("CP2"), 1),
        ("S2 x S2", SpaceDesc::product(s("S2"), s("S2")), 0),
        ("CP2 x CP2", SpaceDesc::product(s("CP2"), s("CP2")), 1),
    ];
    for (name, d, want) in cases {
        let got = signature(&d);
        o.check(got == Ok(want), format!("sigma({name}) = {got:?}, expected {want}"));
    }
    let dt = t.elapsed();
    o.check(dt < Duration::from_secs(30), format!("took {dt:?}"));
    o
}

/// Every perversity for dimension `n`.
fn all_perversities(n: usize) -> Vec<Perversity> {
    if n < 3 {
        return vec![lower_middle(n)];
    }
    (0u32..1 << (n - 2))
        .map(|mask| {
            let mut v = vec![0u32];
            for k in 0..n - 2 {
                v.push(v[k] + (mask >> k & 1));
            }
            Perversity::new(n, v).unwrap()
        })
        .collect()
}

fn small_complexes() -> Vec<(String, FilteredComplex)> {
    let mut out: Vec<(String, FilteredComplex)> = Vec::new();
    for (f, d, v) in corpus() {
        if ranks(&v["homology"]).is_some() {
            out.push((f, realize(&d).unwrap()));
        }
    }
    let built = [
        SpaceDesc::cone(s("S1")),
        SpaceDesc::cone(s("S2")),
        SpaceDesc::cone(s("RP2")),
        SpaceDesc::suspension(s("S1")),
        SpaceDesc::suspension(s("RP2")),
        SpaceDesc::suspension(SpaceDesc::suspension(s("S1"))),
        SpaceDesc::cone(SpaceDesc::suspension(s("S1"))),
        SpaceDesc::join(s("S0"), s("T2")),
        SpaceDesc::join(s("S1"), s("S0")),
        SpaceDesc::product(SpaceDesc::cone(s("S1")), s("S1")),
        SpaceDesc::product(SpaceDesc::suspension(s("S1")), s("S1")),
    ];
    for d in built {
        out.push((d.to_string(), realize(&d).unwrap()));
    }
    let extra: Vec<(String, FilteredComplex)> = out
        .iter()
        .filter(|(_, k)| k.complex().len() <= 40 && k.dim() <= 2)
        .map(|(n, k)| (format!("sd {n}"), k.barycentric()))
        .collect();
    out.extend(extra);
    out
}

fn c3_ih() -> Outcome {
    let mut o = Outcome::new();
    let t = Instant::now();
    for (f, d, v) in corpus() {
        let (Some(h), Some(i)) = (ranks(&v["homology"]), ranks(&v["ih"])) else {
            continue;
        };
        let k = realize(&d).unwrap();
        let n = k.dim() as usize;
        let triv = k.forget_strata();
        let ih_triv = ih_ranks(&triv, &lower_middle(n)).unwrap();
        o.check(ih_triv == h, format!("{f}: trivially stratified IH {ih_triv:?} vs H {h:?}"));
        o.check(k.complex().homology_ranks() == h, format!("{f}: homology"));
        let got = ih_ranks(&k, &lower_middle(n)).unwrap();
        o.check(got == i, format!("{f}: IH {got:?}, expected {i:?}"));
        let facets = k.complex().facets().len() * (1..=n + 1).product::<usize>();
        if facets > 20_000 {
            o.note(format!("{f}: subdivision has {facets} facets, not subdivided"));
            continue;
        }
        let sd = ih_ranks(&k.barycentric(), &lower_middle(n)).unwrap();
        o.check(sd == got, format!("{f}: IH after subdivision {sd:?} vs {got:?}"));
    }
    let ss2 = realize(&SpaceDesc::suspension(s("S2"))).unwrap();
    let ih = ih_ranks(&ss2, &lower_middle(3)).unwrap();
    let sphere = SimplicialComplex::sphere_boundary(4).homology_ranks();
    o.check(ih == vec![1, 0, 0, 1] && ih == sphere, format!("IH(susp S2) = {ih:?}, H(bd simplex) = {sphere:?}"));
    let mut compared = 0;
    for (name, k) in small_complexes() {
        if k.complex().len() > 200 {
            continue;
        }
        let n = k.dim().max(0) as usize;
        for p in all_perversities(n) {
            let r = match ih_report(&k, &p) {
                Ok(r) => r,
                Err(e) => {
                    o.check(false, format!("{name}: {e}"));
                    continue;
                }
            };
            let kk = if r.subdivided { k.barycentric() } else { k.clone() };
            let x = oracle::ih_ranks(&kk, &p);
            o.check(x == r.ranks, format!("{name} {:?}: pipeline {:?}, oracle {x:?}", p.values(), r.ranks));
            compared += 1;
        }
        let h = oracle::homology_ranks(k.complex());
        o.check(h == k.complex().homology_ranks(), format!("{name}: homology oracle"));
    }
    o.note(format!("{compared} (complex, perversity) pairs checked against the oracle"));
    let dt = t.elapsed();
    o.check(dt < Duration::from_secs(120), format!("took {dt:?}"));
    o
}

fn c4_duality() -> Outcome {
    let mut o = Outcome::new();
    for (f, d, v) in corpus() {
        if v["witt"] != Value::Bool(true) || v["closed"] != Value::Bool(true) || v["ih"].is_null() {
            continue;
        }
        let k = realize(&d).unwrap();
        if let Err(e) = k.orient() {
            o.note(format!("{f} skipped: {e}"));
            continue;
        }
        let n = k.dim() as usize;
        let lower = ih_ranks(&k, &lower_middle(n)).unwrap();
        let upper = ih_ranks(&k, &Perversity::upper_middle(n)).unwrap();
        let flipped: Vec<usize> = upper.iter().rev().copied().collect();
        o.check(lower == flipped, format!("{f}: IH^m {lower:?} vs reversed IH^n {flipped:?}"));
        o.check(lower == upper, format!("{f}: lower and upper middle differ"));
    }
    o
}

/// Closed-form stratum counts: (all, maximal).
fn stratum_counts(d: &SpaceDesc) -> (usize, usize) {
    match d {
        SpaceDesc::Empty => (0, 0),
        SpaceDesc::Atom(a) => {
            let p = a.complex().poset();
            (p.len(), p.maximal().len())
        }
        SpaceDesc::Cone(x) => {
            let (t, m) = stratum_counts(x);
            (t + 1, m)
        }
        SpaceDesc::Suspension(x) => {
            let (t, m) = stratum_counts(x);
            (t + 2, m)
        }
        SpaceDesc::Join(x, y) => {
            let ((tx, mx), (ty, my)) = (stratum_counts(x), stratum_counts(y));
            (tx + ty + tx * ty, mx * my)
        }
        SpaceDesc::Product(x, y) => {
            let ((tx, mx), (ty, my)) = (stratum_counts(x), stratum_counts(y));
            (tx * ty, mx * my)
        }
    }
}

fn random_desc(rng: &mut ChaCha8Rng, budget: usize) -> SpaceDesc {
    const BASE: [&str; 4] = ["S1", "S2", "T2", "RP2"];
    if budget == 0 || rng.gen_bool(0.25) {
        return s(BASE[rng.gen_range(0..BASE.len())]);
    }
    match rng.gen_range(0..4) {
        0 => SpaceDesc::cone(random_desc(rng, budget - 1)),
        1 => SpaceDesc::suspension(random_desc(rng, budget - 1)),
        2 => SpaceDesc::join(random_desc(rng, budget - 1), s(BASE[rng.gen_range(0..BASE.len())])),
        _ => SpaceDesc::product(random_desc(rng, budget - 1), random_desc(rng, budget - 1)),
    }
}

fn c5_resolution() -> Outcome {
    let mut o = Outcome::new();
    for z in ["S1", "S2", "T2", "RP2", "CP2"] {
        let r = resolve(&SpaceDesc::cone(s(z))).unwrap();
        o.check(
            r.faces.len() == 1 && r.faces[0].fiber.desc == s(z) && r.faces[0].base.desc.is_point(),
            format!("cone({z})"),
        );
    }
    let toy = SpaceDesc::product(s("S1"), SpaceDesc::cone(SpaceDesc::product(s("S2"), SpaceDesc::cone(s("S1")))));
    let r = resolve(&toy).unwrap();
    o.check(r.faces.len() == 2 && r.corners.len() == 1, "toy: 2 faces and 1 corner");
    o.check(r.corners.first().is_some_and(|c| c.base == s("S1")), "toy: corner lies over Y");
    for (f, d, v) in corpus() {
        let r = resolve(&d).unwrap();
        o.check(verify_ifs(&r).ok, format!("{f}: {:?}", verify_ifs(&r).violation));
        o.check(r.faces.len() as u64 == v["faces"].as_u64().unwrap(), format!("{f}: face count"));
    }
    let two_cones = resolve(&SpaceDesc::product(SpaceDesc::cone(s("S1")), SpaceDesc::cone(s("S1")))).unwrap();
    o.check(verify_ifs(&two_cones).ok, "cone x cone");
    let mut bad = two_cones.clone();
    let (a, b) = (bad.faces[1].stratum.clone(), bad.faces[2].stratum.clone());
    let p = &bad.poset;
    let incomparable = !p.leq(p.index_of(&a).unwrap(), p.index_of(&b).unwrap())
        && !p.leq(p.index_of(&b).unwrap(), p.index_of(&a).unwrap());
    o.check(incomparable, format!("{a} and {b} should be incomparable"));
    bad.corners.push(CornerRecord {
        lower: a,
        upper: b,
        base: s("pt"),
        base_dim: 0,
        total_dim: 1,
        fiber: s("S1"),
        fiber_dim: 1,
    });
    o.check(!verify_ifs(&bad).ok, "incomparable corner labels accepted");
    let mut bad: FiberedCorners = r.clone();
    bad.corners[0].fiber_dim += 1;
    o.check(!verify_ifs(&bad).ok, "bad dimension equation accepted");
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut n = 0;
    while n < 50 {
        let d = random_desc(&mut rng, 3);
        if strat_poset_of(&d).unwrap().depth().unwrap() > 3 {
            continue;
        }
        n += 1;
        let r = match resolve(&d) {
            Ok(r) => r,
            Err(e) => {
                o.check(false, format!("{d}: {e}"));
                continue;
            }
        };
        let (t, m) = stratum_counts(&d);
        o.check(r.faces.len() == t - m, format!("{d}: {} faces, {} singular strata", r.faces.len(), t - m));
        o.check(strata(&d).unwrap().singular().len() == t - m, format!("{d}: stratum count"));
        o.check(verify_ifs(&r).ok, format!("{d}: {:?}", verify_ifs(&r).violation));
    }
    o
}

fn c6_grid() -> Outcome {
    let mut o = Outcome::new();
    let pairs = [
        (SpaceDesc::cone(s("S1")), SpaceDesc::cone(s("S2"))),
        (SpaceDesc::suspension(s("S2")), SpaceDesc::cone(s("T2"))),
        (SpaceDesc::cone(SpaceDesc::product(s("S2"), SpaceDesc::cone(s("S1")))), SpaceDesc::suspension(s("T2"))),
        (
            SpaceDesc::product(SpaceDesc::cone(s("S1")), SpaceDesc::cone(s("S1"))),
            SpaceDesc::cone(SpaceDesc::suspension(s("S1"))),
        ),
        (s("T2"), SpaceDesc::suspension(s("S2"))),
    ];
    for (w, y) in pairs {
        let name = format!("{w} over {y}");
        let g = resolve_bundle(&w, &y).unwrap();
        o.check(verify_grid(&g).ok, format!("{name}: {:?}", verify_grid(&g).violation));
        let ry = resolve(&y).unwrap();
        let rw = resolve(&w).unwrap();
        o.check(g.horizontal.len() == ry.faces.len(), format!("{name}: horizontal faces"));
        for (h, f) in g.horizontal.iter().zip(&ry.faces) {
            o.check(
                h.fiber == f.fiber.desc && h.base == (w.to_string(), f.base.desc.to_string()),
                format!("{name}: face {} is not the pull-back", h.stratum),
            );
        }
        let (pw, py) = (&rw.poset, &ry.poset);
        let sing = |p: &strata::Poset| (0..p.len()).filter(|&a| !p.is_maximal(a)).count();
        let idx: Vec<(usize, usize)> =
            g.schedule.iter().map(|(a, b)| (pw.index_of(a).unwrap(), py.index_of(b).unwrap())).collect();
        let distinct: HashSet<_> = idx.iter().collect();
        o.check(
            idx.len() == sing(pw) * sing(py) && distinct.len() == idx.len(),
            format!("{name}: schedule does not list each pair once"),
        );
        for i in 0..idx.len() {
            for j in 0..i {
                let ((a, b), (c, d)) = (idx[j], idx[i]);
                o.check(
                    !(pw.leq(c, a) && py.leq(d, b)),
                    format!("{name}: {:?} scheduled after {:?}", g.schedule[j], g.schedule[i]),
                );
            }
        }
    }
    o
}

fn c7_orientation() -> Outcome {
    let mut o = Outcome::new();
    let t = Instant::now();
    let ell = (0..=64).all(|i| (0..=64).all(|j| normalization_identity(i, j)));
    o.check(ell, "l(i,j) 2^-[(i+j)/2] = 2^-[i/2] 2^-[j/2] on [0,64]^2");
    let literal: Vec<i64> = (1..=64)
        .filter(|&n| &sign_norm(n) * &Dyadic::int(boundary_factor(n)) != sign_norm(n - 1))
        .collect();
    o.check(
        literal.is_empty(),
        format!(
            "sign_norm(n) boundary_factor(n) = sign_norm(n-1) fails for {} of 64 values of n (first n = {:?}); \
             with boundary_factor(n) = 1 for even n, 2 for odd n the two sides differ by a factor 2 for every n",
            literal.len(),
            literal.first()
        ),
    );
    if (1..=64).all(boundary_absorbed) {
        o.note("sign_norm(n) boundary_factor(n-1) = sign_norm(n-1) holds for n in [1,64]");
    }
    let sample: Vec<LaurentKO> = (-8..=8)
        .map(|k| LaurentKO::from_terms([(k, Dyadic::new(2 * k + 1, -k)), (k + 3, Dyadic::int(k))]))
        .collect();
    o.check(sample.iter().all(|x| psi2(&psi2(x, true), false) == *x), "psi2 o psi2^-1 = id");
    let compat = (0..=10u32).all(|k| (-5..=5).all(|s| orientation_compat_check(k, s)));
    o.check(compat, "orientation compatibility on k in [0,10], sigma in [-5,5]");
    let (lhs, _) = orientation_compat_sides(1, 1);
    o.check(lhs == LaurentKU::monomial(Dyadic::new(1, -2), 2), format!("(1,1) gives {lhs}, expected 1/4 beta^2"));
    for c in 0..=8 {
        let ok = nns_transfer(c).is_ok_and(|t| {
            compose_transfer(&t.inverse, &t.projection).is_ok_and(|u| u.fiber_dim == 0 && u.coeff == Dyadic::one())
        });
        o.check(ok, format!("nns unit law at codim {c}"));
    }
    let u = compose_transfer(&TransferSymbol::unit(), &TransferSymbol::bundle("p", 5)).unwrap();
    o.check(u.coeff == sign_norm(5), "unit transfer");
    let dt = t.elapsed();
    o.check(dt < Duration::from_secs(1), format!("took {dt:?}"));
    o
}

fn convolve(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn trim(mut v: Vec<usize>) -> Vec<usize> {
    while v.len() > 1 && v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn c8_products() -> Outcome {
    let mut o = Outcome::new();
    let t = Instant::now();
    let h = |d: &SpaceDesc| realize(d).unwrap().complex().clone();
    for (x, y) in [("S0", "S1"), ("S1", "S1"), ("S0", "T2"), ("S1", "T2"), ("S2", "RP2"), ("S0", "S0")] {
        let j = h(&SpaceDesc::join(s(x), s(y))).reduced_homology_ranks();
        let want = convolve(&h(&s(x)).reduced_homology_ranks(), &h(&s(y)).reduced_homology_ranks());
        o.check(trim(j.clone()) == trim(want.clone()), format!("{x} * {y}: {j:?} vs {want:?}"));
    }
    for (x, y) in [("S1", "S1"), ("S1", "T2"), ("S2", "S2"), ("T2", "T2"), ("RP2", "S1"), ("S1", "S2"), ("RP2", "RP2")] {
        let p = h(&SpaceDesc::product(s(x), s(y)));
        let (hx, hy) = (h(&s(x)), h(&s(y)));
        let want = convolve(&hx.homology_ranks(), &hy.homology_ranks());
        o.check(p.homology_ranks() == want, format!("{x} x {y}: Kunneth"));
        o.check(
            p.euler_characteristic() == hx.euler_characteristic() * hy.euler_characteristic(),
            format!("{x} x {y}: Euler characteristic"),
        );
    }
    o.check(matches!(realize(&s("RP2")).unwrap().orient(), Err(Error::NonOrientable)), "RP2 orientable");
    let rp2_s1 = realize(&SpaceDesc::product(s("RP2"), s("S1"))).unwrap();
    o.check(matches!(rp2_s1.orient(), Err(Error::NonOrientable)), "RP2 x S1 orientable");
    o.check(realize(&s("T2")).unwrap().orient().is_ok(), "T2 not orientable");
    let dt = t.elapsed();
    o.check(dt < Duration::from_secs(30), format!("took {dt:?}"));
    o
}

fn main() {
    let criteria: [(&str, &str, fn() -> Outcome); 8] = [
        ("1", "Witt verdicts", c1_witt),
        ("2", "signatures", c2_signatures),
        ("3", "intersection homology against homology, subdivision and oracle", c3_ih),
        ("4", "Poincare duality of Witt corpus spaces", c4_duality),
        ("5", "resolution faces, corners and fault injection", c5_resolution),
        ("6", "grid resolution and blow-up schedule", c6_grid),
        ("7", "orientation calculus identities", c7_orientation),
        ("8", "join and product laws, non-orientability of RP2", c8_products),
    ];
    let mut unexpected = Vec::new();
    for (id, name, f) in criteria {
        let t = Instant::now();
        let out = f();
        let secs = t.elapsed().as_secs_f64();
        let known = KNOWN_FAILING.contains(&id);
        let tag = match (out.ok, known) {
            (true, _) => "PASS",
            (false, true) => "FAIL (known)",
            (false, false) => "FAIL",
        };
        println!("criterion {id}: {tag} {name} [{secs:.2} s]");
        for n in &out.notes {
            println!("    {n}");
        }
        if out.ok == known {
            unexpected.push(id);
        }
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected outcome for criteria {unexpected:?}");
        std::process::exit(1);
    }
}
