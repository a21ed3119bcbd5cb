//! Normal-form arithmetic in the noncommutative torus and the
//! noncommutative 3-sphere.
//!
//! Torus elements are combinations of `Z^(m) W^(n)` with `m, n` signed (both
//! generators are unitary, so `Z* = Z^-1`). Sphere elements are combinations
//! of `Z^i (Z*)^j W^(k)` where `W^(k)` means `W^k` for `k >= 0` and
//! `(W*)^-k` otherwise. Multiplication moves `W`-letters to the right past
//! `Z`-letters, picking up `q^{+-1}` per swap, and collapses every adjacent
//! `W W*` or `W* W` into `1 - Z Z*`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::derivations::Derivation;
use crate::error::{Error, Result};
use crate::scalars::{forward_owned_binop, rational, GaussianRational, Scalar};

/// Which presented algebra an element lives in.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum AlgebraId {
    Torus,
    Sphere,
}

impl AlgebraId {
    pub fn name(self) -> &'static str {
        match self {
            AlgebraId::Torus => "torus",
            AlgebraId::Sphere => "sphere",
        }
    }
}

impl fmt::Display for AlgebraId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for AlgebraId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "torus" => Ok(AlgebraId::Torus),
            "sphere" => Ok(AlgebraId::Sphere),
            other => Err(Error::UnknownTarget(other.to_string())),
        }
    }
}

/// The four generators `Z, Z*, W, W*`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Generator {
    Z,
    Zs,
    W,
    Ws,
}

impl Generator {
    pub const ALL: [Generator; 4] = [Generator::Z, Generator::Zs, Generator::W, Generator::Ws];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn star(self) -> Generator {
        match self {
            Generator::Z => Generator::Zs,
            Generator::Zs => Generator::Z,
            Generator::W => Generator::Ws,
            Generator::Ws => Generator::W,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Generator::Z => "Z",
            Generator::Zs => "Zs",
            Generator::W => "W",
            Generator::Ws => "Ws",
        }
    }
}

/// `Z^(m) W^(n)` in the torus.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct TorusMonomial {
    pub m: i64,
    pub n: i64,
}

/// `Z^i (Z*)^j W^(k)` in the sphere.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct SphereMonomial {
    pub i: u32,
    pub j: u32,
    pub k: i64,
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Monomial {
    Torus(TorusMonomial),
    Sphere(SphereMonomial),
}

impl Monomial {
    pub fn identity(alg: AlgebraId) -> Self {
        match alg {
            AlgebraId::Torus => Monomial::Torus(TorusMonomial::default()),
            AlgebraId::Sphere => Monomial::Sphere(SphereMonomial::default()),
        }
    }

    pub fn algebra(&self) -> AlgebraId {
        match self {
            Monomial::Torus(_) => AlgebraId::Torus,
            Monomial::Sphere(_) => AlgebraId::Sphere,
        }
    }

    pub fn is_identity(&self) -> bool {
        *self == Monomial::identity(self.algebra())
    }

    pub fn generator(alg: AlgebraId, g: Generator) -> Self {
        match alg {
            AlgebraId::Torus => {
                let (m, n) = match g {
                    Generator::Z => (1, 0),
                    Generator::Zs => (-1, 0),
                    Generator::W => (0, 1),
                    Generator::Ws => (0, -1),
                };
                Monomial::Torus(TorusMonomial { m, n })
            }
            AlgebraId::Sphere => {
                let (i, j, k) = match g {
                    Generator::Z => (1, 0, 0),
                    Generator::Zs => (0, 1, 0),
                    Generator::W => (0, 0, 1),
                    Generator::Ws => (0, 0, -1),
                };
                Monomial::Sphere(SphereMonomial { i, j, k })
            }
        }
    }

    /// The monomial spelled as a word in the generators.
    pub fn word(&self) -> Vec<Generator> {
        let mut word = Vec::new();
        let push = |word: &mut Vec<Generator>, g: Generator, count: u64| {
            word.extend(std::iter::repeat_n(g, count as usize));
        };
        match *self {
            Monomial::Torus(TorusMonomial { m, n }) => {
                push(&mut word, if m >= 0 { Generator::Z } else { Generator::Zs }, m.unsigned_abs());
                push(&mut word, if n >= 0 { Generator::W } else { Generator::Ws }, n.unsigned_abs());
            }
            Monomial::Sphere(SphereMonomial { i, j, k }) => {
                push(&mut word, Generator::Z, i.into());
                push(&mut word, Generator::Zs, j.into());
                push(&mut word, if k >= 0 { Generator::W } else { Generator::Ws }, k.unsigned_abs());
            }
        }
        word
    }

    pub fn degree(&self) -> u64 {
        self.word().len() as u64
    }
}

fn binomial(n: u64, k: u64) -> BigInt {
    let mut acc = BigInt::one();
    for t in 0..k {
        acc = acc * BigInt::from(n - t) / BigInt::from(t + 1);
    }
    acc
}

/// Normal form of the product of two basis monomials, as
/// `q^e * sum_t c_t * mono_t` with integer `c_t`.
fn multiply_monomials(a: &Monomial, b: &Monomial) -> (i64, Vec<(BigInt, Monomial)>) {
    match (a, b) {
        (Monomial::Torus(a), Monomial::Torus(b)) => {
            // W^n Z^m = q^{nm} Z^m W^n
            let e = a.n * b.m;
            (e, vec![(BigInt::one(), Monomial::Torus(TorusMonomial { m: a.m + b.m, n: a.n + b.n }))])
        }
        (Monomial::Sphere(a), Monomial::Sphere(b)) => {
            // W^(k) Z = q^k Z W^(k), W^(k) Z* = q^-k Z* W^(k)
            let e = a.k * (i64::from(b.i) - i64::from(b.j));
            let k = a.k + b.k;
            let pairs = if a.k.signum() * b.k.signum() < 0 {
                a.k.unsigned_abs().min(b.k.unsigned_abs())
            } else {
                0
            };
            // (1 - ZZ*)^pairs
            let terms = (0..=pairs)
                .map(|t| {
                    let mut c = binomial(pairs, t);
                    if t % 2 == 1 {
                        c = -c;
                    }
                    let t32 = t as u32;
                    (c, Monomial::Sphere(SphereMonomial { i: a.i + b.i + t32, j: a.j + b.j + t32, k }))
                })
                .collect();
            (e, terms)
        }
        _ => unreachable!("monomials from different algebras"),
    }
}

/// `(mono)* = q^e * mono'`.
fn star_monomial(a: &Monomial) -> (i64, Monomial) {
    match *a {
        Monomial::Torus(TorusMonomial { m, n }) => (n * m, Monomial::Torus(TorusMonomial { m: -m, n: -n })),
        Monomial::Sphere(SphereMonomial { i, j, k }) => {
            // W^(-k) Z^j Z*^i
            let e = -k * (i64::from(j) - i64::from(i));
            (e, Monomial::Sphere(SphereMonomial { i: j, j: i, k: -k }))
        }
    }
}

/// A finite linear combination of normal-form monomials.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct AlgebraElement {
    algebra: AlgebraId,
    terms: BTreeMap<Monomial, Scalar>,
}

impl AlgebraElement {
    pub fn zero(alg: AlgebraId) -> Self {
        Self { algebra: alg, terms: BTreeMap::new() }
    }

    pub fn one(alg: AlgebraId) -> Self {
        Self::scalar(alg, Scalar::one())
    }

    pub fn scalar(alg: AlgebraId, s: Scalar) -> Self {
        Self::term(s, Monomial::identity(alg))
    }

    pub fn from_i64(alg: AlgebraId, n: i64) -> Self {
        Self::scalar(alg, Scalar::from_i64(n))
    }

    pub fn term(s: Scalar, mono: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !s.is_zero() {
            terms.insert(mono, s);
        }
        Self { algebra: mono.algebra(), terms }
    }

    pub fn monomial(mono: Monomial) -> Self {
        Self::term(Scalar::one(), mono)
    }

    pub fn generator(alg: AlgebraId, g: Generator) -> Self {
        Self::monomial(Monomial::generator(alg, g))
    }

    pub fn z(alg: AlgebraId) -> Self {
        Self::generator(alg, Generator::Z)
    }
    pub fn zs(alg: AlgebraId) -> Self {
        Self::generator(alg, Generator::Zs)
    }
    pub fn w(alg: AlgebraId) -> Self {
        Self::generator(alg, Generator::W)
    }
    pub fn ws(alg: AlgebraId) -> Self {
        Self::generator(alg, Generator::Ws)
    }

    /// `|Z|^2 = Z Z*`.
    pub fn abs_z2(alg: AlgebraId) -> Self {
        &Self::z(alg) * &Self::zs(alg)
    }

    /// `|W|^2 = W W*`.
    pub fn abs_w2(alg: AlgebraId) -> Self {
        &Self::w(alg) * &Self::ws(alg)
    }

    /// The hermitian coordinates `X^1..X^4` (`index` in `1..=4`):
    /// `X^1 = (Z+Z*)/2`, `X^2 = (Z-Z*)/2i`, and likewise for `W`.
    pub fn x(alg: AlgebraId, index: usize) -> Self {
        let half = Scalar::from_rational(rational(1, 2));
        let minus_half_i = &Scalar::i() * &Scalar::from_rational(rational(-1, 2));
        let (g, gs) = match index {
            1 | 2 => (Self::z(alg), Self::zs(alg)),
            3 | 4 => (Self::w(alg), Self::ws(alg)),
            _ => panic!("X index out of range: {index}"),
        };
        if index % 2 == 1 {
            (&g + &gs).scale(&half)
        } else {
            (&g - &gs).scale(&minus_half_i)
        }
    }

    pub fn from_word(alg: AlgebraId, word: &[Generator]) -> Self {
        word.iter()
            .fold(Self::one(alg), |acc, g| &acc * &Self::generator(alg, *g))
    }

    pub fn algebra(&self) -> AlgebraId {
        self.algebra
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, mono: &Monomial) -> Scalar {
        self.terms.get(mono).cloned().unwrap_or_default()
    }

    /// The scalar `s` when the element is `s * 1`.
    pub fn as_scalar(&self) -> Option<Scalar> {
        match self.terms.len() {
            0 => Some(Scalar::zero()),
            1 => {
                let (mono, s) = self.terms.iter().next()?;
                mono.is_identity().then(|| s.clone())
            }
            _ => None,
        }
    }

    fn add_term(&mut self, mono: Monomial, s: &Scalar) {
        if s.is_zero() {
            return;
        }
        match self.terms.get_mut(&mono) {
            Some(existing) => {
                *existing += s;
                if existing.is_zero() {
                    self.terms.remove(&mono);
                }
            }
            None => {
                self.terms.insert(mono, s.clone());
            }
        }
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.algebra == other.algebra {
            Ok(())
        } else {
            Err(Error::MixedAlgebra { left: self.algebra, right: other.algebra })
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (mono, s) in &other.terms {
            out.add_term(*mono, s);
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&-other)
    }

    /// Normal form of `self * other`.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = Self::zero(self.algebra);
        for (ma, sa) in &self.terms {
            for (mb, sb) in &other.terms {
                let coeff = sa * sb;
                let (e, expansion) = multiply_monomials(ma, mb);
                let shifted = coeff.shift(e);
                for (c, mono) in expansion {
                    if c.is_one() {
                        out.add_term(mono, &shifted);
                    } else {
                        out.add_term(mono, &shifted.scale_rational(&BigRational::from_integer(c)));
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        let mut out = Self::zero(self.algebra);
        if s.is_zero() {
            return out;
        }
        for (mono, c) in &self.terms {
            out.add_term(*mono, &(c * s));
        }
        out
    }

    pub fn scale_rational(&self, r: &BigRational) -> Self {
        if r.is_zero() {
            return Self::zero(self.algebra);
        }
        Self {
            algebra: self.algebra,
            terms: self.terms.iter().map(|(m, c)| (*m, c.scale_rational(r))).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::one(self.algebra), |acc, _| &acc * self)
    }

    /// The anti-linear anti-multiplicative involution.
    pub fn star(&self) -> Self {
        let mut out = Self::zero(self.algebra);
        for (mono, c) in &self.terms {
            let (e, m) = star_monomial(mono);
            out.add_term(m, &c.conj().shift(e));
        }
        out
    }

    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.try_mul(other)?.try_sub(&other.try_mul(self)?)
    }

    pub fn is_hermitian(&self) -> bool {
        self.star() == *self
    }

    /// True iff the element commutes with all four generators.
    pub fn is_central(&self) -> bool {
        Generator::ALL.iter().all(|g| {
            let gen = Self::generator(self.algebra, *g);
            (&(self * &gen) - &(&gen * self)).is_zero()
        })
    }

    /// Largest word length among the monomials.
    pub fn degree(&self) -> u64 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }
}

impl Add for &AlgebraElement {
    type Output = AlgebraElement;
    fn add(self, rhs: &AlgebraElement) -> AlgebraElement {
        self.try_add(rhs).expect("algebra mismatch in addition")
    }
}

impl Sub for &AlgebraElement {
    type Output = AlgebraElement;
    fn sub(self, rhs: &AlgebraElement) -> AlgebraElement {
        self.try_sub(rhs).expect("algebra mismatch in subtraction")
    }
}

impl Mul for &AlgebraElement {
    type Output = AlgebraElement;
    fn mul(self, rhs: &AlgebraElement) -> AlgebraElement {
        self.try_mul(rhs).expect("algebra mismatch in product")
    }
}

impl Neg for &AlgebraElement {
    type Output = AlgebraElement;
    fn neg(self) -> AlgebraElement {
        AlgebraElement {
            algebra: self.algebra,
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }
}

impl Neg for AlgebraElement {
    type Output = AlgebraElement;
    fn neg(self) -> AlgebraElement {
        -&self
    }
}

forward_owned_binop!(AlgebraElement, Add, add);
forward_owned_binop!(AlgebraElement, Sub, sub);
forward_owned_binop!(AlgebraElement, Mul, mul);

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut factors: Vec<String> = Vec::new();
        let mut push = |name: &str, power: u64| match power {
            0 => {}
            1 => factors.push(name.to_string()),
            p => factors.push(format!("{name}^{p}")),
        };
        match *self {
            Monomial::Torus(TorusMonomial { m, n }) => {
                push(if m >= 0 { "Z" } else { "Zs" }, m.unsigned_abs());
                push(if n >= 0 { "W" } else { "Ws" }, n.unsigned_abs());
            }
            Monomial::Sphere(SphereMonomial { i, j, k }) => {
                push("Z", i.into());
                push("Zs", j.into());
                push(if k >= 0 { "W" } else { "Ws" }, k.unsigned_abs());
            }
        }
        if factors.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", factors.join("*"))
        }
    }
}

/// Renders `sum c * mono` in the expression grammar accepted by the parser.
impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (mono, s) in &self.terms {
            let identity = mono.is_identity();
            if s.num_terms() == 1 {
                let term = s.render_terms().next().expect("one term");
                let neg = term.is_negative();
                match (first, neg) {
                    (true, true) => write!(f, "-")?,
                    (true, false) => {}
                    (false, true) => write!(f, " - ")?,
                    (false, false) => write!(f, " + ")?,
                }
                let mut buf = String::new();
                {
                    use std::fmt::Write;
                    write!(buf, "{}", DisplayTerm(&term, !identity))?;
                }
                f.write_str(&buf)?;
                if !identity {
                    if !buf.is_empty() {
                        write!(f, "*")?;
                    }
                    write!(f, "{mono}")?;
                }
            } else {
                if !first {
                    write!(f, " + ")?;
                }
                write!(f, "({s})")?;
                if !identity {
                    write!(f, "*{mono}")?;
                }
            }
            first = false;
        }
        Ok(())
    }
}

struct DisplayTerm<'a, 'b>(&'a crate::scalars::ScalarTerm<'b>, bool);

impl fmt::Display for DisplayTerm<'_, '_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt_abs(f, self.1)
    }
}

/// A defining relation `lhs = rhs`, each side a combination of words.
#[derive(Clone, Debug)]
pub struct Relation {
    pub name: &'static str,
    pub lhs: Vec<(Scalar, Vec<Generator>)>,
    pub rhs: Vec<(Scalar, Vec<Generator>)>,
}

impl Relation {
    /// `lhs - rhs` as `(coefficient, word)` pairs.
    pub fn difference(&self) -> Vec<(Scalar, Vec<Generator>)> {
        self.lhs
            .iter()
            .cloned()
            .chain(self.rhs.iter().map(|(s, w)| (-s, w.clone())))
            .collect()
    }
}

/// The defining relations of the presentation.
pub fn relations(alg: AlgebraId) -> Vec<Relation> {
    use Generator::*;
    let one = Scalar::one;
    let q = || Scalar::q_pow(1);
    let qb = || Scalar::q_pow(-1);
    let rel = |name, lhs: Vec<(Scalar, Vec<Generator>)>, rhs: Vec<(Scalar, Vec<Generator>)>| Relation {
        name,
        lhs,
        rhs,
    };
    match alg {
        AlgebraId::Torus => vec![
            rel("W Z = q Z W", vec![(one(), vec![W, Z])], vec![(q(), vec![Z, W])]),
            rel("Z Z* = 1", vec![(one(), vec![Z, Zs])], vec![(one(), vec![])]),
            rel("Z* Z = 1", vec![(one(), vec![Zs, Z])], vec![(one(), vec![])]),
            rel("W W* = 1", vec![(one(), vec![W, Ws])], vec![(one(), vec![])]),
            rel("W* W = 1", vec![(one(), vec![Ws, W])], vec![(one(), vec![])]),
        ],
        AlgebraId::Sphere => vec![
            rel("W Z = q Z W", vec![(one(), vec![W, Z])], vec![(q(), vec![Z, W])]),
            rel("W* Z = qbar Z W*", vec![(one(), vec![Ws, Z])], vec![(qb(), vec![Z, Ws])]),
            rel("W Z* = qbar Z* W", vec![(one(), vec![W, Zs])], vec![(qb(), vec![Zs, W])]),
            rel("W* Z* = q Z* W*", vec![(one(), vec![Ws, Zs])], vec![(q(), vec![Zs, Ws])]),
            rel("Z* Z = Z Z*", vec![(one(), vec![Zs, Z])], vec![(one(), vec![Z, Zs])]),
            rel("W* W = W W*", vec![(one(), vec![Ws, W])], vec![(one(), vec![W, Ws])]),
            rel(
                "W W* = 1 - Z Z*",
                vec![(one(), vec![W, Ws])],
                vec![(one(), vec![]), (-one(), vec![Z, Zs])],
            ),
        ],
    }
}

/// Coefficient rings the connection machinery is generic over: the base
/// algebra and its localization.
pub trait StarRing: Clone + PartialEq + fmt::Debug + fmt::Display {
    fn algebra(&self) -> AlgebraId;
    fn zero_of(alg: AlgebraId) -> Self;
    fn from_base(a: &AlgebraElement) -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, rhs: &Self) -> Self;
    fn minus(&self, rhs: &Self) -> Self;
    fn times(&self, rhs: &Self) -> Self;
    fn negated(&self) -> Self;
    fn star(&self) -> Self;
    fn scaled(&self, s: &Scalar) -> Self;
    /// Applies a derivation of the underlying algebra.
    fn derive(&self, d: &Derivation) -> Self;

    fn one_of(alg: AlgebraId) -> Self {
        Self::from_base(&AlgebraElement::one(alg))
    }

    fn is_hermitian(&self) -> bool {
        self.star() == *self
    }
}

impl StarRing for AlgebraElement {
    fn algebra(&self) -> AlgebraId {
        self.algebra
    }
    fn zero_of(alg: AlgebraId) -> Self {
        AlgebraElement::zero(alg)
    }
    fn from_base(a: &AlgebraElement) -> Self {
        a.clone()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn plus(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn minus(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn negated(&self) -> Self {
        -self
    }
    fn star(&self) -> Self {
        AlgebraElement::star(self)
    }
    fn scaled(&self, s: &Scalar) -> Self {
        self.scale(s)
    }
    fn derive(&self, d: &Derivation) -> Self {
        d.apply(self).expect("derivation applied across algebras")
    }
}

/// `1/2` as a scalar; used often enough to name.
pub fn half() -> Scalar {
    Scalar::from_rational(rational(1, 2))
}

/// `c` as a pure-imaginary scalar `c*i`.
pub fn imaginary(c: BigRational) -> Scalar {
    Scalar::from_gaussian(GaussianRational::new(BigRational::zero(), c))
}

#[cfg(test)]
mod tests {
    use super::*;

    const S: AlgebraId = AlgebraId::Sphere;
    const T: AlgebraId = AlgebraId::Torus;

    fn q(alg: AlgebraId) -> AlgebraElement {
        AlgebraElement::scalar(alg, Scalar::q_pow(1))
    }

    #[test]
    fn sphere_rewrites() {
        let z = AlgebraElement::z(S);
        let w = AlgebraElement::w(S);
        assert_eq!(&w * &z, &q(S) * &(&z * &w));
        let ws = AlgebraElement::ws(S);
        assert_eq!(&w * &ws, &AlgebraElement::one(S) - &AlgebraElement::abs_z2(S));
        assert_eq!(&ws * &w, &w * &ws);
        let a = &z + &ws;
        assert_eq!(&AlgebraElement::one(S) * &a, a);
    }

    #[test]
    fn torus_q_power_commutation() {
        let w = AlgebraElement::w(T);
        for m in -3i64..=3 {
            let zm = AlgebraElement::monomial(Monomial::Torus(TorusMonomial { m, n: 0 }));
            let expected = (&zm * &w).scale(&Scalar::q_pow(m));
            assert_eq!(&w * &zm, expected, "m = {m}");
        }
        assert!((&AlgebraElement::z(T) * &AlgebraElement::zs(T)).as_scalar().unwrap().is_one());
    }

    #[test]
    fn star_examples() {
        assert_eq!(AlgebraElement::z(S).star(), AlgebraElement::zs(S));
        let zw = &AlgebraElement::z(S) * &AlgebraElement::w(S);
        let expected = &q(S) * &(&AlgebraElement::zs(S) * &AlgebraElement::ws(S));
        assert_eq!(zw.star(), expected);
        for idx in 1..=4 {
            assert!(AlgebraElement::x(S, idx).is_hermitian());
            assert!(AlgebraElement::x(T, idx).is_hermitian());
        }
        assert!(AlgebraElement::abs_z2(S).is_hermitian());
        assert!(!AlgebraElement::z(S).is_hermitian());
    }

    #[test]
    fn centrality() {
        assert!(AlgebraElement::abs_z2(S).is_central());
        assert!(AlgebraElement::abs_w2(S).is_central());
        assert!(AlgebraElement::one(S).is_central());
        assert!(!AlgebraElement::z(S).is_central());
        let z = AlgebraElement::z(S);
        let w = AlgebraElement::w(S);
        let comm = z.commutator(&w).unwrap();
        let expected = (&z * &w).scale(&(&Scalar::one() - &Scalar::q_pow(1)));
        assert_eq!(comm, expected);
    }

    #[test]
    fn sphere_of_radius_one() {
        let sum = (1..=4).fold(AlgebraElement::zero(S), |acc, i| {
            let x = AlgebraElement::x(S, i);
            &acc + &(&x * &x)
        });
        assert_eq!(sum, AlgebraElement::one(S));
        assert_eq!(&AlgebraElement::abs_z2(S) + &AlgebraElement::abs_w2(S), AlgebraElement::one(S));
    }

    #[test]
    fn relations_hold_in_normal_form() {
        for alg in [S, T] {
            for rel in relations(alg) {
                let total = rel.difference().into_iter().fold(AlgebraElement::zero(alg), |acc, (s, w)| {
                    &acc + &AlgebraElement::from_word(alg, &w).scale(&s)
                });
                assert!(total.is_zero(), "{alg}: {} leaves {total}", rel.name);
            }
        }
    }

    #[test]
    fn mixed_algebra_rejected() {
        let err = AlgebraElement::z(S).try_mul(&AlgebraElement::z(T)).unwrap_err();
        assert!(matches!(err, Error::MixedAlgebra { .. }));
    }

    #[test]
    fn rendering() {
        let w = AlgebraElement::w(S);
        assert_eq!((&w * &AlgebraElement::z(S)).to_string(), "q*Z*W");
        assert_eq!((&w * &AlgebraElement::ws(S)).to_string(), "1 - Z*Zs");
        assert_eq!(AlgebraElement::x(S, 2).to_string(), "1/2*i*Zs - 1/2*i*Z");
        assert_eq!(AlgebraElement::zero(S).to_string(), "0");
        let mixed = AlgebraElement::z(S).scale(&(&Scalar::q_pow(1) + &Scalar::one()));
        assert_eq!(mixed.to_string(), "(1 + q)*Z");
    }
}

#[cfg(test)]
mod props {
    use super::*;
    use crate::random;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn alg(torus: bool) -> AlgebraId {
        if torus {
            AlgebraId::Torus
        } else {
            AlgebraId::Sphere
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn associative(seed in any::<u64>(), torus in any::<bool>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let alg = alg(torus);
            let (a, b, c) = (random::element(&mut rng, alg), random::element(&mut rng, alg), random::element(&mut rng, alg));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        }

        #[test]
        fn distributive(seed in any::<u64>(), torus in any::<bool>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let alg = alg(torus);
            let (a, b, c) = (random::element(&mut rng, alg), random::element(&mut rng, alg), random::element(&mut rng, alg));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        }

        #[test]
        fn star_is_an_anti_involution(seed in any::<u64>(), torus in any::<bool>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let alg = alg(torus);
            let (a, b) = (random::element(&mut rng, alg), random::element(&mut rng, alg));
            prop_assert_eq!((&a * &b).star(), &b.star() * &a.star());
            prop_assert_eq!(a.star().star(), a.clone());
            let s = random::scalar(&mut rng);
            prop_assert_eq!(a.scale(&s).star(), a.star().scale(&s.conj()));
        }

        #[test]
        fn central_elements_commute(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = random::element(&mut rng, AlgebraId::Sphere);
            for c in [AlgebraElement::abs_z2(AlgebraId::Sphere), AlgebraElement::abs_w2(AlgebraId::Sphere)] {
                prop_assert!(c.commutator(&a).unwrap().is_zero());
            }
        }
    }
}
