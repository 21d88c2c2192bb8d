//! Coefficient-level calculus of signature classes and transfers.
//!
//! Values live in `Z[1/2]` ([`Dyadic`]) and in the coefficient rings
//! `Z[1/2][a, a^-1]` of `KO[1/2]` and `Z[1/2][β, β^-1]` of `K`. A transfer
//! class is tracked by its fiber dimension and its coefficient relative to
//! the signature operator class of the fibers; a bundle with fiber dimension
//! `n` has coefficient `2^-⌊n/2⌋`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::marker::PhantomData;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// An element `m * 2^e` of `Z[1/2]`, with `m` odd or `m = e = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dyadic {
    m: BigInt,
    e: i64,
}

impl Dyadic {
    pub fn new(m: impl Into<BigInt>, e: i64) -> Self {
        let mut m = m.into();
        let mut e = e;
        if m.is_zero() {
            return Dyadic { m, e: 0 };
        }
        let tz = m.trailing_zeros().unwrap_or(0);
        m >>= tz;
        e += tz as i64;
        Dyadic { m, e }
    }

    pub fn zero() -> Self {
        Dyadic::new(0, 0)
    }

    pub fn one() -> Self {
        Dyadic::new(1, 0)
    }

    pub fn int(n: i64) -> Self {
        Dyadic::new(n, 0)
    }

    pub fn pow2(e: i64) -> Self {
        Dyadic::new(1, e)
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.m
    }

    pub fn exponent(&self) -> i64 {
        self.e
    }

    pub fn is_zero(&self) -> bool {
        self.m.is_zero()
    }

    /// Whether the mantissa is odd or the value is zero with exponent 0.
    pub fn is_canonical(&self) -> bool {
        if self.m.is_zero() {
            self.e == 0
        } else {
            self.m.is_odd()
        }
    }

    /// Numerator and denominator of the reduced fraction.
    pub fn to_fraction(&self) -> (BigInt, BigInt) {
        if self.e >= 0 {
            (&self.m << self.e as usize, BigInt::one())
        } else {
            (self.m.clone(), BigInt::one() << (-self.e) as usize)
        }
    }
}

impl fmt::Display for Dyadic {
    /// `p` or `p/q`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (p, q) = self.to_fraction();
        if q.is_one() {
            write!(f, "{p}")
        } else {
            write!(f, "{p}/{q}")
        }
    }
}

impl Serialize for Dyadic {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl Add for &Dyadic {
    type Output = Dyadic;
    fn add(self, o: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let e = self.e.min(o.e);
        Dyadic::new((&self.m << (self.e - e) as usize) + (&o.m << (o.e - e) as usize), e)
    }
}

impl Neg for &Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic {
            m: -&self.m,
            e: self.e,
        }
    }
}

impl Sub for &Dyadic {
    type Output = Dyadic;
    fn sub(self, o: &Dyadic) -> Dyadic {
        self + &(-o)
    }
}

impl Mul for &Dyadic {
    type Output = Dyadic;
    fn mul(self, o: &Dyadic) -> Dyadic {
        Dyadic::new(&self.m * &o.m, self.e + o.e)
    }
}

macro_rules! by_value {
    ($($tr:ident $f:ident),*) => {$(
        impl $tr for Dyadic {
            type Output = Dyadic;
            fn $f(self, o: Dyadic) -> Dyadic {
                (&self).$f(&o)
            }
        }
    )*};
}
by_value!(Add add, Sub sub, Mul mul);

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, o: &Self) -> Ordering {
        (self - o).m.sign().cmp(&num_bigint::Sign::NoSign)
    }
}

/// The generator of a Laurent ring.
pub trait Generator: Clone + fmt::Debug + PartialEq {
    const SYMBOL: &'static str;
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct A;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Beta;

impl Generator for A {
    const SYMBOL: &'static str = "a";
}

impl Generator for Beta {
    const SYMBOL: &'static str = "β";
}

/// A finitely supported Laurent polynomial with dyadic coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Laurent<G: Generator> {
    coeffs: BTreeMap<i64, Dyadic>,
    _g: PhantomData<G>,
}

/// `π_*(KO)[1/2] = Z[1/2][a, a^-1]`.
pub type LaurentKO = Laurent<A>;
/// `π_*(K)[1/2] = Z[1/2][β, β^-1]`.
pub type LaurentKU = Laurent<Beta>;

impl<G: Generator> Laurent<G> {
    pub fn zero() -> Self {
        Laurent {
            coeffs: BTreeMap::new(),
            _g: PhantomData,
        }
    }

    pub fn one() -> Self {
        Self::monomial(Dyadic::one(), 0)
    }

    /// The generator itself.
    pub fn gen() -> Self {
        Self::monomial(Dyadic::one(), 1)
    }

    pub fn monomial(c: Dyadic, k: i64) -> Self {
        Self::from_terms([(k, c)])
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (i64, Dyadic)>) -> Self {
        let mut coeffs: BTreeMap<i64, Dyadic> = BTreeMap::new();
        for (k, c) in terms {
            let e = coeffs.entry(k).or_insert_with(Dyadic::zero);
            *e = &*e + &c;
        }
        coeffs.retain(|_, c| !c.is_zero());
        Laurent { coeffs, _g: PhantomData }
    }

    pub fn coeff(&self, k: i64) -> Dyadic {
        self.coeffs.get(&k).cloned().unwrap_or_else(Dyadic::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &Dyadic)> {
        self.coeffs.iter().map(|(k, c)| (*k, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn scale(&self, c: &Dyadic) -> Self {
        Self::from_terms(self.terms().map(|(k, x)| (k, x * c)))
    }
}

impl<G: Generator> Add for &Laurent<G> {
    type Output = Laurent<G>;
    fn add(self, o: &Laurent<G>) -> Laurent<G> {
        Laurent::from_terms(self.terms().chain(o.terms()).map(|(k, c)| (k, c.clone())))
    }
}

impl<G: Generator> Mul for &Laurent<G> {
    type Output = Laurent<G>;
    fn mul(self, o: &Laurent<G>) -> Laurent<G> {
        Laurent::from_terms(
            self.terms()
                .flat_map(|(i, x)| o.terms().map(move |(j, y)| (i + j, x * y))),
        )
    }
}

impl<G: Generator> fmt::Display for Laurent<G> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms()
            .map(|(k, c)| match k {
                0 => c.to_string(),
                1 => format!("{c}{}", G::SYMBOL),
                _ => format!("{c}{}^{k}", G::SYMBOL),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl<G: Generator> Serialize for Laurent<G> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// `2^-⌊n/2⌋`, the normalization of the signature class in dimension `n`.
pub fn sign_norm(n: i64) -> Dyadic {
    Dyadic::pow2(-Integer::div_floor(&n, &2))
}

/// `ℓ(i, j)`: 2 when both fiber dimensions are odd, else 1.
pub fn compose_factor(i: i64, j: i64) -> i64 {
    if i.rem_euclid(2) == 1 && j.rem_euclid(2) == 1 {
        2
    } else {
        1
    }
}

/// 1 for even `n`, 2 for odd `n`: the factor `k` in
/// `∂[D_{W,∂W}] = k [D_{∂W}]` for `dim W = n`.
pub fn boundary_factor(n: i64) -> i64 {
    if n.rem_euclid(2) == 0 {
        1
    } else {
        2
    }
}

/// Checks that the normalization absorbs the boundary map from dimension
/// `n` to `n - 1`: `2^-⌊n/2⌋ k = 2^-⌊(n-1)/2⌋`, with `k` the factor of the
/// boundary, whose dimension is `n - 1`.
pub fn boundary_absorbed(n: i64) -> bool {
    &sign_norm(n) * &Dyadic::int(boundary_factor(n - 1)) == sign_norm(n - 1)
}

/// Checks `ℓ(i,j) 2^-⌊(i+j)/2⌋ = 2^-⌊i/2⌋ 2^-⌊j/2⌋`.
pub fn normalization_identity(i: i64, j: i64) -> bool {
    &Dyadic::int(compose_factor(i, j)) * &sign_norm(i + j) == &sign_norm(i) * &sign_norm(j)
}

/// The shadow of a transfer class: fiber dimension (negative for inverses),
/// KK-degree and coefficient relative to the signature operator class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TransferSymbol {
    pub label: String,
    pub fiber_dim: i64,
    pub degree: u8,
    pub coeff: Dyadic,
}

impl TransferSymbol {
    /// The normalized transfer of a bundle with the given fiber dimension.
    pub fn bundle(label: impl Into<String>, fiber_dim: i64) -> Self {
        TransferSymbol {
            label: label.into(),
            fiber_dim,
            degree: fiber_dim.rem_euclid(2) as u8,
            coeff: sign_norm(fiber_dim),
        }
    }

    pub fn unit() -> Self {
        Self::bundle("1", 0)
    }

    pub fn is_unit(&self) -> bool {
        self.fiber_dim == 0 && self.coeff == Dyadic::one()
    }

    /// Whether the coefficient is the normalization for the fiber dimension.
    pub fn is_normalized(&self) -> bool {
        self.coeff == sign_norm(self.fiber_dim) && self.degree as i64 == self.fiber_dim.rem_euclid(2)
    }

    /// The inverse class, of fiber dimension `-fiber_dim`.
    pub fn inverse(&self) -> Self {
        Self::bundle(format!("{}^-1", self.label), -self.fiber_dim)
    }
}

/// The composite `s ⊗ t`. Signature classes compose up to the factor
/// `ℓ(i, j)`, so the composite coefficient is `s.coeff * t.coeff / ℓ`,
/// which is again the normalization for `i + j`.
pub fn compose_transfer(s: &TransferSymbol, t: &TransferSymbol) -> Result<TransferSymbol> {
    let (i, j) = (s.fiber_dim, t.fiber_dim);
    let l = compose_factor(i, j);
    let raw = &s.coeff * &t.coeff;
    let coeff = if l == 2 { &raw * &Dyadic::pow2(-1) } else { raw };
    let out = TransferSymbol {
        label: if s.fiber_dim == 0 && s.is_unit() {
            t.label.clone()
        } else if t.is_unit() {
            s.label.clone()
        } else {
            format!("{}∘{}", s.label, t.label)
        },
        fiber_dim: i + j,
        degree: (i + j).rem_euclid(2) as u8,
        coeff,
    };
    if !out.is_normalized() || !normalization_identity(i, j) {
        return Err(Error::NormalizationViolation(format!(
            "composing fiber dimensions {i} and {j} gives coefficient {}",
            out.coeff
        )));
    }
    Ok(out)
}

/// `Ψ²` on `KO[1/2]` coefficients: `a^k -> 4^k a^k`, or `4^-k a^k` inverted.
pub fn psi2(x: &LaurentKO, inverse: bool) -> LaurentKO {
    let s = if inverse { -2 } else { 2 };
    Laurent::from_terms(x.terms().map(|(k, c)| (k, c * &Dyadic::pow2(s * k))))
}

/// Complexification `a^k -> β^{2k}`.
pub fn complexify(x: &LaurentKO) -> LaurentKU {
    Laurent::from_terms(x.terms().map(|(k, c)| (2 * k, c.clone())))
}

/// Compares `c(Ψ²)^-1` of the orientation coefficient `σ a^k` with the
/// signature-operator coefficient `2^-2k σ β^{2k}` in dimension `4k`.
pub fn orientation_compat_check(k: u32, sigma: i64) -> bool {
    let (lhs, rhs) = orientation_compat_sides(k, sigma);
    lhs == rhs
}

pub fn orientation_compat_sides(k: u32, sigma: i64) -> (LaurentKU, LaurentKU) {
    let k = k as i64;
    let delta = LaurentKO::monomial(Dyadic::int(sigma), k);
    let lhs = complexify(&psi2(&delta, true));
    let rhs = LaurentKU::monomial(&sign_norm(4 * k) * &Dyadic::int(sigma), 2 * k);
    (lhs, rhs)
}

/// The Gysin class of a normally non-singular inclusion of codimension
/// `codim`, with the projection transfer of the normal bundle and its
/// inverse.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NnsTransfer {
    pub codim: i64,
    /// `Σ(π)` for the normal bundle projection.
    pub projection: TransferSymbol,
    /// `Σ_N`, with `Σ_N ⊗ Σ(π) = 1`.
    pub inverse: TransferSymbol,
    /// `Σ(j) = Σ_N ⊗ [φ] ⊗ i!`; the last two factors have degree 0 and
    /// coefficient 1.
    pub gysin: TransferSymbol,
}

pub fn nns_transfer(codim: i64) -> Result<NnsTransfer> {
    let projection = TransferSymbol::bundle(format!("Σ(π_{codim})"), codim);
    let inverse = projection.inverse();
    let unit = compose_transfer(&inverse, &projection)?;
    if !unit.is_unit() {
        return Err(Error::NormalizationViolation(format!(
            "Σ_N ⊗ Σ(π) = {} for codimension {codim}",
            unit.coeff
        )));
    }
    let mut gysin = inverse.clone();
    gysin.label = format!("Σ(j_{codim})");
    Ok(NnsTransfer {
        codim,
        projection,
        inverse,
        gysin,
    })
}

/// Outcome of one exhaustive identity suite.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteResult {
    pub name: String,
    pub cases: usize,
    pub passed: bool,
    pub first_failure: Option<String>,
}

fn suite(name: &str, cases: impl IntoIterator<Item = (String, bool)>) -> SuiteResult {
    let mut n = 0;
    let mut first = None;
    for (what, ok) in cases {
        n += 1;
        if !ok && first.is_none() {
            first = Some(what);
        }
    }
    SuiteResult {
        name: name.into(),
        cases: n,
        passed: first.is_none(),
        first_failure: first,
    }
}

/// Every identity suite run by `orient-check`.
pub fn run_suites() -> Vec<SuiteResult> {
    let mut out = Vec::new();
    out.push(suite(
        "normalization identity, i, j in [0, 64]",
        (0..=64).flat_map(|i| (0..=64).map(move |j| (format!("({i},{j})"), normalization_identity(i, j)))),
    ));
    out.push(suite(
        "sign_norm(n) * boundary_factor(n-1) = sign_norm(n-1), n in [1, 64]",
        (1..=64).map(|n| (format!("n={n}"), boundary_absorbed(n))),
    ));
    out.push(suite(
        "psi2 inverse round trip",
        sample_ko().into_iter().map(|x| {
            let ok = psi2(&psi2(&x, true), false) == x && psi2(&psi2(&x, false), true) == x;
            (x.to_string(), ok)
        }),
    ));
    out.push(suite(
        "orientation compatibility, k in [0, 10], sigma in [-5, 5]",
        (0..=10u32).flat_map(|k| (-5..=5).map(move |s| (format!("(k={k},sigma={s})"), orientation_compat_check(k, s)))),
    ));
    out.push(suite(
        "nns unit law, codim in [0, 8]",
        (0..=8).map(|c| (format!("codim={c}"), nns_transfer(c).is_ok())),
    ));
    out.push(suite(
        "composite transfers normalized, fiber dims in [0, 20]",
        (0..=20).flat_map(|i| {
            (0..=20).map(move |j| {
                let r = compose_transfer(&TransferSymbol::bundle("p", i), &TransferSymbol::bundle("q", j));
                (format!("({i},{j})"), r.is_ok_and(|t| t.fiber_dim == i + j && t.is_normalized()))
            })
        }),
    ));
    out.push(suite(
        "composition associative with unit, fiber dims in [0, 8]",
        (0..=8).flat_map(|i| {
            (0..=8).flat_map(move |j| {
                (0..=8).map(move |k| {
                    let (s, t, u) = (
                        TransferSymbol::bundle("s", i),
                        TransferSymbol::bundle("t", j),
                        TransferSymbol::bundle("u", k),
                    );
                    let left = compose_transfer(&compose_transfer(&s, &t).unwrap(), &u).unwrap();
                    let right = compose_transfer(&s, &compose_transfer(&t, &u).unwrap()).unwrap();
                    let unit = compose_transfer(&TransferSymbol::unit(), &s).unwrap();
                    let ok = left.coeff == right.coeff
                        && left.fiber_dim == right.fiber_dim
                        && unit.coeff == s.coeff
                        && unit.fiber_dim == s.fiber_dim;
                    (format!("({i},{j},{k})"), ok)
                })
            })
        }),
    ));
    out
}

/// A fixed spread of Laurent polynomials.
fn sample_ko() -> Vec<LaurentKO> {
    let mut v = vec![LaurentKO::zero(), LaurentKO::one(), LaurentKO::gen()];
    for k in -6..=6i64 {
        for (m, e) in [(1, 0), (-3, 0), (5, -3), (7, 4)] {
            v.push(LaurentKO::from_terms([(k, Dyadic::new(m, e)), (k + 2, Dyadic::new(m + 2, -e))]));
        }
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dyadic_canonical() {
        let x = Dyadic::new(12, -3);
        assert_eq!((x.mantissa().clone(), x.exponent()), (BigInt::from(3), -1));
        assert_eq!(x.to_string(), "3/2");
        assert_eq!(Dyadic::new(0, 5), Dyadic::zero());
        assert!((&x - &x).is_canonical());
        assert_eq!(&Dyadic::new(1, -2) + &Dyadic::new(1, -2), Dyadic::new(1, -1));
        assert!(Dyadic::new(-1, 3) < Dyadic::new(1, -3));
    }

    #[test]
    fn constants() {
        assert_eq!(sign_norm(0), Dyadic::one());
        assert_eq!(sign_norm(4).to_string(), "1/4");
        assert_eq!(sign_norm(7).to_string(), "1/8");
        assert_eq!(compose_factor(3, 5), 2);
        assert_eq!(compose_factor(2, 3), 1);
        assert_eq!(compose_factor(0, 0), 1);
        assert_eq!(boundary_factor(4), 1);
        assert_eq!(boundary_factor(5), 2);
        assert!(boundary_absorbed(1) && boundary_absorbed(4));
        assert_ne!(&sign_norm(1) * &Dyadic::int(boundary_factor(1)), sign_norm(0));
    }

    #[test]
    fn adams_and_complexification() {
        let a = LaurentKO::gen();
        assert_eq!(psi2(&a, false), LaurentKO::monomial(Dyadic::int(4), 1));
        assert_eq!(psi2(&LaurentKO::one(), false), LaurentKO::one());
        assert_eq!(complexify(&a), LaurentKU::monomial(Dyadic::one(), 2));
        let x = LaurentKO::monomial(Dyadic::int(3), -1);
        assert_eq!(complexify(&x), LaurentKU::monomial(Dyadic::int(3), -2));
        assert_eq!(complexify(&x).to_string(), "3β^-2");
        assert_eq!(complexify(&LaurentKO::one()), LaurentKU::one());
    }

    #[test]
    fn compat_at_four() {
        let (lhs, rhs) = orientation_compat_sides(1, 1);
        assert_eq!(lhs, LaurentKU::monomial(Dyadic::pow2(-2), 2));
        assert_eq!(lhs, rhs);
        assert!(orientation_compat_check(1, 0));
    }

    #[test]
    fn transfers() {
        let c = compose_transfer(&TransferSymbol::bundle("p", 3), &TransferSymbol::bundle("q", 5)).unwrap();
        assert_eq!((c.fiber_dim, c.degree), (8, 0));
        assert_eq!(c.coeff, Dyadic::pow2(-4));
        let n = nns_transfer(3).unwrap();
        assert_eq!(n.gysin.degree, 1);
        assert!(nns_transfer(0).unwrap().gysin.is_unit());
        let ji = compose_transfer(&nns_transfer(2).unwrap().gysin, &nns_transfer(3).unwrap().gysin).unwrap();
        assert_eq!(ji.degree, 1);
    }

    #[test]
    fn bad_symbol_is_reported() {
        let mut s = TransferSymbol::bundle("p", 3);
        s.coeff = Dyadic::one();
        assert!(matches!(
            compose_transfer(&s, &TransferSymbol::bundle("q", 1)),
            Err(Error::NormalizationViolation(_))
        ));
    }

    #[test]
    fn suites_pass() {
        for s in run_suites() {
            assert!(s.passed, "{s:?}");
        }
    }
}
