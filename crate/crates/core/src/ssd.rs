//! The SSD file format: JSON descriptions of stratified spaces.
//!
//! ```json
//! {"space": {"susp": {"atom": "T2"}}}
//! ```
//!
//! An expression is one of `{"atom": name}`, `{"atom": {...}}`, `{"cone": e}`,
//! `{"susp": e}`, `{"join": [e, e]}` or `{"prod": [e, e]}`. An inline atom
//! has a `name`, a vertex count, a facet list and optional declared strata,
//! each given by the facets of its closure.

use std::fmt;

use serde::de::{self, MapAccess, Visitor};
use serde::{Deserialize, Deserializer, Serialize};
use serde_json::{json, Value};

use crate::atoms;
use crate::error::{Error, Result};
use crate::simplicial::{FilteredComplex, SimplicialComplex};
use crate::space_desc::{Atom, SpaceDesc};

/// An inline atom.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, try_from = "RawAtomSpec")]
pub struct AtomSpec {
    pub name: String,
    pub vertices: u32,
    pub facets: Vec<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub strata: Vec<StratumSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StratumSpec {
    pub name: String,
    pub facets: Vec<Vec<u32>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAtomSpec {
    name: String,
    vertices: u32,
    facets: Vec<Vec<u32>>,
    #[serde(default)]
    strata: Vec<StratumSpec>,
}

impl TryFrom<RawAtomSpec> for AtomSpec {
    type Error = String;

    fn try_from(r: RawAtomSpec) -> std::result::Result<Self, String> {
        let check = |what: &str, facets: &[Vec<u32>]| -> std::result::Result<(), String> {
            for f in facets {
                if f.is_empty() {
                    return Err(format!("{what}: empty facet"));
                }
                if let Some(v) = f.iter().find(|&&v| v >= r.vertices) {
                    return Err(format!(
                        "{what}: facet index {v} out of range for {} vertices",
                        r.vertices
                    ));
                }
            }
            Ok(())
        };
        check(&format!("atom `{}`", r.name), &r.facets)?;
        for s in &r.strata {
            check(&format!("stratum `{}`", s.name), &s.facets)?;
        }
        Ok(AtomSpec {
            name: r.name,
            vertices: r.vertices,
            facets: r.facets,
            strata: r.strata,
        })
    }
}

impl AtomSpec {
    /// Builds the filtered complex. Every vertex must occur in a facet.
    pub fn build(&self) -> Result<FilteredComplex> {
        let k = SimplicialComplex::from_facets(&self.facets)
            .map_err(|e| Error::Validation(format!("atom `{}`: {e}", self.name)))?;
        if k.num_vertices() != self.vertices as usize {
            return Err(Error::Validation(format!(
                "atom `{}` declares {} vertices but its facets use {}",
                self.name,
                self.vertices,
                k.num_vertices()
            )));
        }
        let declared: Vec<(String, Vec<Vec<u32>>)> =
            self.strata.iter().map(|s| (s.name.clone(), s.facets.clone())).collect();
        FilteredComplex::from_declared(k, &declared)
            .map_err(|e| Error::Validation(format!("atom `{}`: {e}", self.name)))
    }

    /// Describes an existing atom; declared strata are the elements other
    /// than regular components with generated names.
    pub fn of(atom: &Atom) -> AtomSpec {
        let fc = atom.complex();
        let k = fc.complex();
        let p = fc.poset();
        let generated = |a: usize| {
            let l = p.label(a).trim_end_matches('\'');
            p.is_maximal(a) && l.strip_prefix("reg").is_some_and(|r| r.chars().all(|c| c.is_ascii_digit()))
        };
        let strata = (0..p.len())
            .filter(|&a| !generated(a))
            .map(|a| StratumSpec {
                name: p.label(a).to_string(),
                facets: fc.closure(a).complex().facets(),
            })
            .collect();
        AtomSpec {
            name: atom.name().to_string(),
            vertices: k.num_vertices() as u32,
            facets: k.facets(),
            strata,
        }
    }
}

/// A parsed expression before atoms are built.
#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum Expr {
    Atom(AtomRef),
    Cone(Box<Expr>),
    Susp(Box<Expr>),
    Join(Box<Expr>, Box<Expr>),
    Prod(Box<Expr>, Box<Expr>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AtomRef {
    Named(String),
    Inline(AtomSpec),
}

impl<'de> Deserialize<'de> for AtomRef {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = AtomRef;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an atom name or an inline atom object")
            }
            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<AtomRef, E> {
                Ok(AtomRef::Named(v.to_string()))
            }
            fn visit_map<A: MapAccess<'de>>(self, m: A) -> std::result::Result<AtomRef, A::Error> {
                AtomSpec::deserialize(de::value::MapAccessDeserializer::new(m)).map(AtomRef::Inline)
            }
        }
        d.deserialize_any(V)
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct File {
    space: Expr,
}

/// Parses SSD text into a validated description.
pub fn parse_ssd(text: &str) -> Result<SpaceDesc> {
    let f: File = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    build(&f.space)
}

pub fn parse_ssd_file(path: &std::path::Path) -> Result<SpaceDesc> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Validation(format!("cannot read {}: {e}", path.display())))?;
    parse_ssd(&text)
}

fn build(e: &Expr) -> Result<SpaceDesc> {
    Ok(match e {
        Expr::Atom(AtomRef::Named(n)) => atoms::named(n)?,
        Expr::Atom(AtomRef::Inline(spec)) => SpaceDesc::Atom(Atom::new(spec.name.clone(), spec.build()?)),
        Expr::Cone(x) => SpaceDesc::cone(build(x)?),
        Expr::Susp(x) => SpaceDesc::suspension(build(x)?),
        Expr::Join(x, y) => SpaceDesc::Join(Box::new(build(x)?), Box::new(build(y)?)),
        Expr::Prod(x, y) => SpaceDesc::product(build(x)?, build(y)?),
    })
}

/// Canonical JSON for a description: shipped atoms by name, others inline.
pub fn to_json(d: &SpaceDesc) -> Value {
    json!({ "space": expr_json(d) })
}

fn expr_json(d: &SpaceDesc) -> Value {
    match d {
        SpaceDesc::Empty => Value::Null,
        SpaceDesc::Atom(a) => match atoms::named(a.name()) {
            Ok(SpaceDesc::Atom(ref s)) if s == a => json!({ "atom": a.name() }),
            _ => json!({ "atom": serde_json::to_value(AtomSpec::of(a)).expect("serializable") }),
        },
        SpaceDesc::Cone(x) => json!({ "cone": expr_json(x) }),
        SpaceDesc::Suspension(x) => json!({ "susp": expr_json(x) }),
        SpaceDesc::Join(x, y) => json!({ "join": [expr_json(x), expr_json(y)] }),
        SpaceDesc::Product(x, y) => json!({ "prod": [expr_json(x), expr_json(y)] }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space_desc::dim;

    #[test]
    fn named_cone() {
        let d = parse_ssd(r#"{"space": {"cone": {"atom": "T2"}}}"#).unwrap();
        assert_eq!(d, SpaceDesc::cone(atoms::named("T2").unwrap()));
    }

    #[test]
    fn join_of_spheres_has_dim_five() {
        let d = parse_ssd(r#"{"space": {"join": [{"atom":"S2"},{"atom":"S2"}]}}"#).unwrap();
        assert_eq!(dim(&d).unwrap(), 5);
    }

    #[test]
    fn bad_facet_index_is_a_parse_error() {
        let text = "{\"space\": {\"atom\": {\"name\": \"x\", \"vertices\": 3,\n  \"facets\": [[0, 1], [1, 5]]}}}";
        match parse_ssd(text) {
            Err(Error::Parse { line, message, .. }) => {
                assert_eq!(line, 2);
                assert!(message.contains("out of range"), "{message}");
            }
            other => panic!("expected a parse error, got {other:?}"),
        }
    }

    #[test]
    fn malformed_json_reports_position() {
        assert!(matches!(
            parse_ssd("{\"space\": {\"cone\": }}"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(parse_ssd(r#"{"space": {"cylinder": {"atom":"S1"}}}"#), Err(Error::Parse { .. })));
    }

    #[test]
    fn unknown_atom_and_bad_strata_are_validation_errors() {
        assert!(matches!(parse_ssd(r#"{"space": {"atom": "K3"}}"#), Err(Error::Validation(_))));
        let text = r#"{"space": {"atom": {"name": "c", "vertices": 3, "facets": [[0,1],[1,2],[0,2]],
            "strata": [{"name": "a", "facets": [[0,1]]}, {"name": "b", "facets": [[1,2]]}]}}}"#;
        assert!(matches!(parse_ssd(text), Err(Error::Validation(_))));
    }

    #[test]
    fn round_trip() {
        let text = r#"{"space": {"prod": [{"susp": {"atom": "S2"}},
            {"atom": {"name": "circ", "vertices": 3, "facets": [[0,1],[1,2],[0,2]],
                      "strata": [{"name": "p", "facets": [[0]]}]}}]}}"#;
        let d = parse_ssd(text).unwrap();
        let again = parse_ssd(&to_json(&d).to_string()).unwrap();
        assert_eq!(d, again);
        assert_eq!(to_json(&d), to_json(&again));
    }
}
