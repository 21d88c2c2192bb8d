//! Triangulating a structural description.

use super::{FilteredComplex, Simplex, SimplicialComplex};
use crate::error::{Error, Result};
use crate::space_desc::{strata, JoinLayout, SpaceDesc};

/// Triangulates `d` with the stratification of [`strata`]: element `i` of
/// the result is element `i` of `strata(d)`.
///
/// Cones put the apex last, joins shift the right-hand vertex ids past the
/// left-hand ones and products use the staircase triangulation on vertices
/// `v * n + w`.
pub fn realize(d: &SpaceDesc) -> Result<FilteredComplex> {
    realize_bounded(d, usize::MAX)
}

/// As [`realize`], failing with [`Error::LimitExceeded`] when an
/// intermediate complex would have more than `max_facets` facets.
pub fn realize_bounded(d: &SpaceDesc, max_facets: usize) -> Result<FilteredComplex> {
    let guard = |n: usize| {
        if n > max_facets {
            Err(Error::LimitExceeded(format!(
                "triangulating `{d}` needs more than {max_facets} facets"
            )))
        } else {
            Ok(())
        }
    };
    match d {
        SpaceDesc::Empty => Err(Error::InvalidComplex("cannot triangulate the empty space".into())),
        SpaceDesc::Atom(a) => Ok(a.complex().clone()),
        SpaceDesc::Cone(x) => {
            let fx = realize_bounded(x, max_facets)?;
            let apex = fx.complex().num_vertices() as u32;
            let facets: Vec<Simplex> = fx
                .complex()
                .facets()
                .into_iter()
                .map(|mut f| {
                    f.push(apex);
                    f
                })
                .collect();
            let k = SimplicialComplex::from_facets(&facets)?;
            let poset = fx.poset().cone();
            FilteredComplex::from_label_fn(k, poset, |s| {
                let base = if s.last() == Some(&apex) { &s[..s.len() - 1] } else { s };
                if base.is_empty() {
                    0
                } else {
                    fx.label_of(base).expect("face of the base") + 1
                }
            })
        }
        SpaceDesc::Suspension(x) => join(&crate::atoms::poles(), x, max_facets),
        SpaceDesc::Join(x, y) => join(x, y, max_facets),
        SpaceDesc::Product(x, y) => {
            let (fx, fy) = (realize_bounded(x, max_facets)?, realize_bounded(y, max_facets)?);
            let nr = fy.complex().num_vertices() as u32;
            let (ff, gg) = (fx.complex().facets(), fy.complex().facets());
            let count: usize = ff
                .iter()
                .flat_map(|f| gg.iter().map(move |g| binomial(f.len() + g.len() - 2, f.len() - 1)))
                .fold(0usize, |a, b| a.saturating_add(b));
            guard(count)?;
            let mut facets = Vec::with_capacity(count);
            for f in &ff {
                for g in &gg {
                    staircases(f, g, nr, &mut facets);
                }
            }
            let k = SimplicialComplex::from_facets(&facets)?;
            let m = fy.poset().len();
            let poset = fx.poset().product(fy.poset());
            FilteredComplex::from_label_fn(k, poset, |s| {
                let mut l: Vec<u32> = s.iter().map(|v| v / nr).collect();
                let mut r: Vec<u32> = s.iter().map(|v| v % nr).collect();
                l.dedup();
                r.sort_unstable();
                r.dedup();
                fx.label_of(&l).expect("projection") * m + fy.label_of(&r).expect("projection")
            })
        }
    }
    .and_then(|fc| {
        guard(fc.complex().facets().len())?;
        Ok(fc)
    })
}

fn join(x: &SpaceDesc, y: &SpaceDesc, max_facets: usize) -> Result<FilteredComplex> {
    let (fx, fy) = (realize_bounded(x, max_facets)?, realize_bounded(y, max_facets)?);
    let layout = JoinLayout::new(&strata(x)?, &strata(y)?);
    let shift = fx.complex().num_vertices() as u32;
    let (ff, gg) = (fx.complex().facets(), fy.complex().facets());
    if ff.len().saturating_mul(gg.len()) > max_facets {
        return Err(Error::LimitExceeded(format!(
            "triangulating a join needs more than {max_facets} facets"
        )));
    }
    let mut facets = Vec::with_capacity(ff.len() * gg.len());
    for f in &ff {
        for g in &gg {
            let mut s = f.clone();
            s.extend(g.iter().map(|v| v + shift));
            facets.push(s);
        }
    }
    let k = SimplicialComplex::from_facets(&facets)?;
    let poset = layout.strata.poset.clone();
    FilteredComplex::from_label_fn(k, poset, |s| {
        let split = s.partition_point(|&v| v < shift);
        let left: Vec<u32> = s[..split].to_vec();
        let right: Vec<u32> = s[split..].iter().map(|v| v - shift).collect();
        let a = (!left.is_empty()).then(|| fx.label_of(&left).expect("left face"));
        let b = (!right.is_empty()).then(|| fy.label_of(&right).expect("right face"));
        layout.raw[&(a, b)]
    })
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1usize, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// All monotone lattice paths through `f x g`.
fn staircases(f: &[u32], g: &[u32], nr: u32, out: &mut Vec<Simplex>) {
    fn go(f: &[u32], g: &[u32], nr: u32, i: usize, j: usize, path: &mut Vec<u32>, out: &mut Vec<Simplex>) {
        path.push(f[i] * nr + g[j]);
        if i + 1 == f.len() && j + 1 == g.len() {
            out.push(path.clone());
        }
        if i + 1 < f.len() {
            go(f, g, nr, i + 1, j, path, out);
        }
        if j + 1 < g.len() {
            go(f, g, nr, i, j + 1, path, out);
        }
        path.pop();
    }
    go(f, g, nr, 0, 0, &mut Vec::new(), out);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atoms::named;
    use crate::space_desc::dim;

    fn check(d: &SpaceDesc) -> FilteredComplex {
        let fc = realize(d).unwrap();
        let s = strata(d).unwrap();
        assert_eq!(fc.poset(), &s.poset, "{d}");
        assert_eq!(fc.stratum_dims(), &s.dims[..], "{d}");
        assert_eq!(fc.dim(), dim(d).unwrap() as isize);
        assert!(fc.complex().is_compact());
        fc
    }

    #[test]
    fn cone_is_contractible() {
        let fc = check(&SpaceDesc::cone(named("T2").unwrap()));
        assert_eq!(fc.complex().homology_ranks(), vec![1, 0, 0, 0]);
        assert_eq!(fc.poset().labels()[0], "*");
    }

    #[test]
    fn suspension_of_torus() {
        let fc = check(&SpaceDesc::suspension(named("T2").unwrap()));
        assert_eq!(fc.complex().homology_ranks(), vec![1, 0, 2, 1]);
        assert_eq!(fc.complex().num_vertices(), 9);
    }

    #[test]
    fn join_and_product_of_circles() {
        let s1 = named("S1").unwrap();
        let j = check(&SpaceDesc::join(s1.clone(), s1.clone()));
        assert_eq!(j.complex().homology_ranks(), vec![1, 0, 0, 1]);
        let p = check(&SpaceDesc::product(s1.clone(), s1));
        assert_eq!(p.complex().homology_ranks(), vec![1, 2, 1]);
        assert_eq!(p.complex().f_vector(), vec![9, 27, 18]);
    }

    #[test]
    fn nested() {
        let s2 = named("S2").unwrap();
        let d = SpaceDesc::product(SpaceDesc::suspension(s2.clone()), SpaceDesc::cone(named("S0").unwrap()));
        check(&d);
        check(&SpaceDesc::join(SpaceDesc::suspension(s2), named("S0").unwrap()));
    }

    #[test]
    fn limit() {
        let d = SpaceDesc::product(named("CP2").unwrap(), named("CP2").unwrap());
        assert!(matches!(realize_bounded(&d, 10_000), Err(Error::LimitExceeded(_))));
    }
}
