//! Shipped atoms.
//!
//! | name | space | vertices |
//! |------|-------|----------|
//! | `pt` | point | 1 |
//! | `S0` | two points | 2 |
//! | `S1` | circle | 3 |
//! | `S2`, `S3`, `S4` | boundaries of simplices | 4, 5, 6 |
//! | `T2` | torus | 7 |
//! | `RP2` | real projective plane | 6 |
//! | `CP2` | complex projective plane | 9 |

use std::collections::HashMap;
use std::sync::OnceLock;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::simplicial::{FilteredComplex, SimplicialComplex};
use crate::space_desc::{Atom, SpaceDesc};

pub const NAMES: [&str; 9] = ["pt", "S0", "S1", "S2", "S3", "S4", "T2", "RP2", "CP2"];

#[derive(Deserialize)]
struct Data {
    name: String,
    vertices: u32,
    facets: Vec<Vec<u32>>,
}

fn load(json: &str) -> SimplicialComplex {
    let d: Data = serde_json::from_str(json).expect("shipped atom data parses");
    let k = SimplicialComplex::from_facets(&d.facets).expect("shipped atom is a complex");
    assert_eq!(k.num_vertices(), d.vertices as usize, "{}", d.name);
    k
}

fn table() -> &'static HashMap<&'static str, Atom> {
    static TABLE: OnceLock<HashMap<&'static str, Atom>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let complexes = [
            ("pt", SimplicialComplex::from_facets([[0u32]]).unwrap()),
            ("S0", SimplicialComplex::from_facets([[0u32], [1]]).unwrap()),
            ("S1", SimplicialComplex::sphere_boundary(2)),
            ("S2", load(include_str!("../data/s2.json"))),
            ("S3", load(include_str!("../data/s3.json"))),
            ("S4", load(include_str!("../data/s4.json"))),
            ("T2", load(include_str!("../data/t2.json"))),
            ("RP2", load(include_str!("../data/rp2.json"))),
            ("CP2", load(include_str!("../data/cp2.json"))),
        ];
        complexes
            .into_iter()
            .map(|(n, k)| {
                let fc = FilteredComplex::from_declared(k, &[]).expect("unstratified atom");
                (n, Atom::new(n, fc))
            })
            .collect()
    })
}

/// A shipped atom by name.
pub fn named(name: &str) -> Result<SpaceDesc> {
    table()
        .get(name)
        .cloned()
        .map(SpaceDesc::Atom)
        .ok_or_else(|| Error::Validation(format!("unknown atom `{name}`; known: {}", NAMES.join(", "))))
}

pub fn point() -> SpaceDesc {
    named("pt").expect("pt")
}

/// Two points stratified as the antichain `{n, s}`.
pub fn poles() -> SpaceDesc {
    static POLES: OnceLock<Atom> = OnceLock::new();
    let a = POLES.get_or_init(|| {
        let k = SimplicialComplex::from_facets([[0u32], [1]]).unwrap();
        let fc = FilteredComplex::from_declared(k, &[("n".into(), vec![vec![0]]), ("s".into(), vec![vec![1]])])
            .expect("poles");
        Atom::new("poles", fc)
    });
    SpaceDesc::Atom(a.clone())
}

/// An atom whose only strata are the components of the complex.
pub fn from_facets(name: &str, facets: &[Vec<u32>]) -> Result<SpaceDesc> {
    let k = SimplicialComplex::from_facets(facets)?;
    Ok(SpaceDesc::Atom(Atom::new(name, FilteredComplex::from_declared(k, &[])?)))
}
