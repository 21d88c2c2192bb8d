//! The Witt condition and signatures.
//!
//! A pseudomanifold is Witt when the link `L` of every singular stratum with
//! `dim L = 2m` even has `IH^m_m(L; Q) = 0` for the lower middle perversity.
//!
//! Signatures of manifold atoms come from the cup product pairing on middle
//! simplicial cohomology,
//!
//! ```text
//! Q(a, b) = <a ⌣ b, [M]> = Σ_s ε(s) a(v0..vm) b(vm..v2m)
//! ```
//!
//! summed over top simplices `s = [v0 .. v2m]` with orientation signs `ε`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ih::{ih_ranks, lower_middle};
use crate::linalg::{self, Col, SparseMatrix};
use crate::simplicial::{realize, FilteredComplex, FundamentalCycle, SimplicialComplex};
use crate::space_desc::{dim, is_pseudomanifold, link_of, strata, SpaceDesc, StratumRef};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WittEntry {
    pub stratum: String,
    pub link_dim: usize,
    pub link_dim_even: bool,
    /// `rank IH_{l/2}` of the link, for even `l`.
    pub middle_rank: Option<usize>,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WittReport {
    pub witt: bool,
    pub strata: Vec<WittEntry>,
}

impl WittReport {
    fn from_entries(strata: Vec<WittEntry>) -> Self {
        WittReport {
            witt: strata.iter().all(|e| e.ok),
            strata,
        }
    }
}

fn entry(stratum: String, link: &FilteredComplex) -> Result<WittEntry> {
    let l = link.dim().max(0) as usize;
    let even = l % 2 == 0;
    let middle_rank = if even {
        Some(ih_ranks(link, &lower_middle(l))?[l / 2])
    } else {
        None
    };
    Ok(WittEntry {
        stratum,
        link_dim: l,
        link_dim_even: even,
        middle_rank,
        ok: middle_rank.is_none_or(|r| r == 0),
    })
}

/// Witt check of a description, computing links structurally.
pub fn witt_check(d: &SpaceDesc) -> Result<WittReport> {
    let pm = is_pseudomanifold(d)?;
    if !pm.ok {
        return Err(Error::NotPseudomanifold(pm.reason.unwrap_or_default()));
    }
    let st = strata(d)?;
    let mut entries = Vec::new();
    for a in st.singular() {
        let r = StratumRef::new(d.clone(), st.poset.label(a))?;
        let lk = realize(&link_of(&r)?)?;
        entries.push(entry(st.poset.label(a).to_string(), &lk)?);
    }
    Ok(WittReport::from_entries(entries))
}

/// Witt check of a filtered complex, using simplicial links.
pub fn witt_check_complex(k: &FilteredComplex) -> Result<WittReport> {
    let mut entries = Vec::new();
    for a in k.singular() {
        let lk = k.link_of_stratum(a)?;
        entries.push(entry(k.poset().label(a).to_string(), &lk)?);
    }
    Ok(WittReport::from_entries(entries))
}

/// A symmetric rational form on middle cohomology.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectionForm {
    pub matrix: Vec<Vec<BigRational>>,
    /// Where the form comes from.
    pub space: String,
    /// Cocycle representatives of the basis, on the middle-degree simplices.
    pub basis: Vec<Col<BigInt>>,
}

impl IntersectionForm {
    pub fn from_matrix(matrix: Vec<Vec<BigRational>>) -> Self {
        IntersectionForm {
            matrix,
            space: String::new(),
            basis: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.matrix.len()
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.matrix.len();
        self.matrix.iter().all(|r| r.len() == n)
            && (0..n).all(|i| (0..i).all(|j| self.matrix[i][j] == self.matrix[j][i]))
    }

    pub fn negated(&self) -> Self {
        IntersectionForm {
            matrix: self.matrix.iter().map(|r| r.iter().map(|x| -x).collect()).collect(),
            space: self.space.clone(),
            basis: self.basis.clone(),
        }
    }
}

/// Cocycles representing a basis of `H^m(K; Q)`.
pub fn cohomology_basis(k: &SimplicialComplex, m: usize) -> Vec<Col<BigInt>> {
    let rows = k.count(m);
    let cocycles = if (m + 1) as isize <= k.dim() {
        linalg::kernel(&k.boundary_matrix(m + 1).transpose())
    } else {
        (0..rows).map(|i| vec![(i, BigInt::from(1))]).collect()
    };
    let coboundaries: Vec<Col<BigInt>> = if m == 0 {
        vec![]
    } else {
        k.boundary_matrix(m)
            .transpose()
            .columns()
            .iter()
            .map(|c| c.iter().map(|(r, v)| (*r, BigInt::from(*v))).collect())
            .collect()
    };
    let nb = coboundaries.len();
    let all = SparseMatrix::<BigInt>::from_columns(rows, coboundaries.into_iter().chain(cocycles.iter().cloned()));
    linalg::reduce(&all, false)
        .pivot_columns()
        .into_iter()
        .filter(|&j| j >= nb)
        .map(|j| linalg::primitive(cocycles[j - nb].clone()))
        .collect()
}

/// The cup product form of an oriented closed manifold complex of dimension
/// `4k`. The manifold condition is audited homologically.
pub fn signature_form(k: &FilteredComplex, orientation: &FundamentalCycle) -> Result<IntersectionForm> {
    if k.has_singular_strata() {
        return Err(Error::NotManifold("the complex has singular strata".into()));
    }
    let cx = k.complex();
    let n = cx.dim();
    if n < 0 || n % 4 != 0 {
        return Err(Error::WrongDimension(n.max(0) as usize));
    }
    let n = n as usize;
    if orientation.dim() != n || orientation.signs().len() != cx.count(n) {
        return Err(Error::Validation("orientation does not match the complex".into()));
    }
    cx.audit_manifold()?;
    let m = n / 2;
    let basis = cohomology_basis(cx, m);
    let dense: Vec<Vec<BigInt>> = basis
        .iter()
        .map(|c| {
            let mut v = vec![BigInt::zero(); cx.count(m)];
            for (i, x) in c {
                v[*i] = x.clone();
            }
            v
        })
        .collect();
    let r = basis.len();
    let mut q = vec![vec![BigInt::zero(); r]; r];
    for (t, s) in cx.simplices(n).iter().enumerate() {
        let eps = BigInt::from(orientation.sign(t));
        let front = cx.index_of(&s[..=m]).expect("front face");
        let back = cx.index_of(&s[m..]).expect("back face");
        for (i, a) in dense.iter().enumerate() {
            if a[front].is_zero() {
                continue;
            }
            let ea = &eps * &a[front];
            for (j, b) in dense.iter().enumerate() {
                if !b[back].is_zero() {
                    q[i][j] += &ea * &b[back];
                }
            }
        }
    }
    let matrix: Vec<Vec<BigRational>> = q
        .into_iter()
        .map(|r| r.into_iter().map(BigRational::from_integer).collect())
        .collect();
    let form = IntersectionForm {
        matrix,
        space: format!("{}-manifold with {} top simplices", n, cx.count(n)),
        basis,
    };
    debug_assert!(form.is_symmetric(), "cup pairing of cocycles on a cycle is symmetric");
    Ok(form)
}

/// `n+ - n-` by symmetric congruence diagonalization.
pub fn signature_of_form(f: &IntersectionForm) -> i64 {
    signature_of_matrix(&f.matrix)
}

pub fn signature_of_matrix(a: &[Vec<BigRational>]) -> i64 {
    let mut a: Vec<Vec<BigRational>> = a.to_vec();
    let mut sig = 0i64;
    loop {
        let n = a.len();
        if n == 0 {
            return sig;
        }
        let pivot = (0..n).find(|&i| !a[i][i].is_zero());
        let p = match pivot {
            Some(p) => p,
            None => {
                let Some((i, j)) = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).find(|&(i, j)| !a[i][j].is_zero())
                else {
                    return sig;
                };
                // e_i <- e_i + e_j makes the diagonal entry 2 a_ij
                for k in 0..n {
                    let t = a[j][k].clone();
                    a[i][k] += t;
                }
                for k in 0..n {
                    let t = a[k][j].clone();
                    a[k][i] += t;
                }
                i
            }
        };
        let d = a[p][p].clone();
        sig += if d.is_positive() { 1 } else { -1 };
        let row = a[p].clone();
        let rest: Vec<usize> = (0..n).filter(|&i| i != p).collect();
        a = rest
            .iter()
            .map(|&i| {
                let f = &row[i] / &d;
                rest.iter().map(|&j| &a[i][j] - &f * &row[j]).collect()
            })
            .collect();
    }
}

/// Signature of a closed oriented Witt space.
///
/// Dimensions other than `4k` give 0. Manifold atoms use the cup product
/// form and products multiply.
pub fn signature(d: &SpaceDesc) -> Result<i64> {
    let w = witt_check(d)?;
    if !w.witt {
        return Err(Error::NotWitt(d.to_string()));
    }
    signature_unchecked(d)
}

fn signature_unchecked(d: &SpaceDesc) -> Result<i64> {
    let n = dim(d)?;
    if n % 4 != 0 {
        return Ok(0);
    }
    match d {
        SpaceDesc::Atom(a) if !a.complex().has_singular_strata() => {
            let k = a.complex();
            let o = k.orient()?;
            Ok(signature_of_form(&signature_form(k, &o)?))
        }
        SpaceDesc::Product(x, y) => Ok(signature_unchecked(x)? * signature_unchecked(y)?),
        _ => Err(Error::DescNotSupported(format!(
            "no signature rule for `{d}` in dimension {n}"
        ))),
    }
}
