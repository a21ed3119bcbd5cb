//! Exact coefficients: Laurent polynomials in a formal unit-modulus
//! parameter `q` with Gaussian-rational coefficients.
//!
//! Conjugation acts by `i -> -i` on coefficients and `q -> q^-1` on the
//! parameter, so `q + q^-1` is self-conjugate.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// An exact rational number.
pub type Rational = BigRational;

/// Builds the rational `num/den`.
///
/// Panics if `den == 0`.
pub fn rational(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// An element of the field `Q(i)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct GaussianRational {
    pub re: Rational,
    pub im: Rational,
}

impl GaussianRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        Self { re, im }
    }

    pub fn real(re: Rational) -> Self {
        Self { re, im: Rational::zero() }
    }

    pub fn i() -> Self {
        Self { re: Rational::zero(), im: Rational::one() }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self { re: self.re.clone(), im: -&self.im }
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let norm = &self.re * &self.re + &self.im * &self.im;
        Some(Self { re: &self.re / &norm, im: -&self.im / &norm })
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        use num_traits::ToPrimitive;
        (self.re.to_f64().unwrap_or(f64::NAN), self.im.to_f64().unwrap_or(f64::NAN))
    }
}

impl Add for &GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
}

impl Sub for &GaussianRational {
    type Output = GaussianRational;
    fn sub(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }
}

impl Mul for &GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational { re: -&self.re, im: -&self.im }
    }
}

/// `sum_k c_k q^k` with `c_k` in `Q(i)`; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Scalar {
    terms: BTreeMap<i64, GaussianRational>,
}

impl Scalar {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_gaussian(GaussianRational::real(Rational::one()))
    }

    pub fn from_i64(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(n.into()))
    }

    pub fn from_rational(r: Rational) -> Self {
        Self::from_gaussian(GaussianRational::real(r))
    }

    pub fn from_gaussian(c: GaussianRational) -> Self {
        Self::monomial(c, 0)
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        Self::from_gaussian(GaussianRational::i())
    }

    /// `q^k`.
    pub fn q_pow(k: i64) -> Self {
        Self::monomial(GaussianRational::real(Rational::one()), k)
    }

    /// `c q^k`.
    pub fn monomial(c: GaussianRational, k: i64) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(k, c);
        }
        Self { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(GaussianRational::is_one)
    }

    /// Iterates over `(exponent, coefficient)` pairs in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &GaussianRational)> {
        self.terms.iter().map(|(k, c)| (*k, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// The coefficient of `q^0` when the scalar is a pure rational, else `None`.
    pub fn as_rational(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let c = self.terms.get(&0)?;
                c.im.is_zero().then(|| c.re.clone())
            }
            _ => None,
        }
    }

    /// Complex conjugation: `i -> -i`, `q^k -> q^-k`.
    pub fn conj(&self) -> Self {
        Self { terms: self.terms.iter().map(|(k, c)| (-k, c.conj())).collect() }
    }

    /// Inverse of a unit `c q^k`; `None` for anything else.
    pub fn unit_inverse(&self) -> Option<Self> {
        if self.terms.len() != 1 {
            return None;
        }
        let (k, c) = self.terms.iter().next()?;
        Some(Self::monomial(c.inverse()?, -k))
    }

    /// Multiplies by `q^e`.
    pub fn shift(&self, e: i64) -> Self {
        if e == 0 {
            return self.clone();
        }
        Self { terms: self.terms.iter().map(|(k, c)| (k + e, c.clone())).collect() }
    }

    pub fn scale_rational(&self, r: &Rational) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (*k, GaussianRational { re: &c.re * r, im: &c.im * r }))
                .collect(),
        }
    }

    fn add_term(&mut self, k: i64, c: &GaussianRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&k) {
            Some(existing) => {
                let sum = &*existing + c;
                if sum.is_zero() {
                    self.terms.remove(&k);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(k, c.clone());
            }
        }
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        for (k, c) in &rhs.terms {
            self.add_term(*k, c);
        }
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        for (k, c) in &rhs.terms {
            self.add_term(*k, &-c);
        }
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        let mut out = Scalar::zero();
        for (ka, ca) in &self.terms {
            for (kb, cb) in &rhs.terms {
                out.add_term(ka + kb, &(ca * cb));
            }
        }
        out
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect() }
    }
}

macro_rules! forward_owned_binop {
    ($ty:ty, $tr:ident, $method:ident) => {
        impl $tr for $ty {
            type Output = $ty;
            fn $method(self, rhs: $ty) -> $ty {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&$ty> for $ty {
            type Output = $ty;
            fn $method(self, rhs: &$ty) -> $ty {
                (&self).$method(rhs)
            }
        }
    };
}
pub(crate) use forward_owned_binop;

forward_owned_binop!(Scalar, Add, add);
forward_owned_binop!(Scalar, Sub, sub);
forward_owned_binop!(Scalar, Mul, mul);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

fn fmt_rational(r: &Rational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if r.is_integer() {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

/// Writes `|c|`-style magnitude of a coefficient and reports whether it is
/// a bare `1` (so the caller may omit it before a `q` power).
fn fmt_coefficient_abs(c: &GaussianRational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match (c.re.is_zero(), c.im.is_zero()) {
        (_, true) => fmt_rational(&c.re.abs(), f),
        (true, false) => {
            if c.im.abs().is_one() {
                write!(f, "i")
            } else {
                fmt_rational(&c.im.abs(), f)?;
                write!(f, "*i")
            }
        }
        (false, false) => {
            write!(f, "(")?;
            fmt_rational(&c.re, f)?;
            write!(f, "{}", if c.im.is_negative() { " - " } else { " + " })?;
            if !c.im.abs().is_one() {
                fmt_rational(&c.im.abs(), f)?;
                write!(f, "*")?;
            }
            write!(f, "i)")
        }
    }
}

/// Sign of a coefficient for rendering; mixed complex coefficients render
/// parenthesised and count as positive.
fn coefficient_is_negative(c: &GaussianRational) -> bool {
    if c.re.is_zero() {
        c.im.is_negative()
    } else if c.im.is_zero() {
        c.re.is_negative()
    } else {
        false
    }
}

fn coefficient_abs_is_one(c: &GaussianRational) -> bool {
    c.im.is_zero() && c.re.abs().is_one()
}

pub(crate) struct ScalarTerm<'a> {
    pub k: i64,
    pub c: &'a GaussianRational,
}

impl ScalarTerm<'_> {
    pub fn is_negative(&self) -> bool {
        coefficient_is_negative(self.c)
    }

    /// Renders the magnitude; `omit_one` drops a leading unit coefficient
    /// when something else follows.
    pub fn fmt_abs(&self, f: &mut fmt::Formatter<'_>, omit_one: bool) -> fmt::Result {
        let q_part = match self.k {
            0 => None,
            1 => Some("q".to_string()),
            k => Some(format!("q^{k}")),
        };
        let skip_coeff = coefficient_abs_is_one(self.c) && (q_part.is_some() || omit_one);
        if !skip_coeff {
            fmt_coefficient_abs(self.c, f)?;
        }
        if let Some(qp) = q_part {
            if !skip_coeff {
                write!(f, "*")?;
            }
            write!(f, "{qp}")?;
        }
        Ok(())
    }
}

impl Scalar {
    pub(crate) fn render_terms(&self) -> impl Iterator<Item = ScalarTerm<'_>> {
        self.terms.iter().map(|(k, c)| ScalarTerm { k: *k, c })
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (idx, term) in self.render_terms().enumerate() {
            let neg = term.is_negative();
            match (idx, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            term.fmt_abs(f, false)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q() -> Scalar {
        Scalar::q_pow(1)
    }

    #[test]
    fn unit_modulus_identity() {
        assert!((&q() * &Scalar::q_pow(-1)).is_one());
        assert!((&q() + &(-&q())).is_zero());
        let half = Scalar::from_rational(rational(1, 2));
        let sym = &q() + &Scalar::q_pow(-1);
        assert_eq!(&(&half * &sym) * &Scalar::from_i64(2), sym);
    }

    #[test]
    fn conjugation() {
        let iq = &Scalar::i() * &q();
        assert_eq!(iq.conj(), -&(&Scalar::i() * &Scalar::q_pow(-1)));
        let half = Scalar::from_rational(rational(1, 2));
        assert_eq!(half.conj(), half);
        let sym = &q() + &Scalar::q_pow(-1);
        assert_eq!(sym.conj(), sym);
    }

    #[test]
    fn unit_inverse() {
        let s = &Scalar::from_rational(rational(3, 2)) * &(&Scalar::i() * &Scalar::q_pow(2));
        assert!((&s * &s.unit_inverse().unwrap()).is_one());
        assert!((&q() + &Scalar::one()).unit_inverse().is_none());
        assert!(Scalar::zero().unit_inverse().is_none());
    }

    #[test]
    fn rendering() {
        assert_eq!(Scalar::from_rational(rational(3, 2)).to_string(), "3/2");
        assert_eq!(Scalar::i().to_string(), "i");
        assert_eq!(Scalar::q_pow(-2).to_string(), "q^-2");
        assert_eq!((-&q()).to_string(), "-q");
        let s = &Scalar::q_pow(-1) + &(&Scalar::from_i64(2) * &q());
        assert_eq!(s.to_string(), "q^-1 + 2*q");
        let c = Scalar::from_gaussian(GaussianRational::new(rational(1, 2), rational(-1, 1)));
        assert_eq!(c.to_string(), "(1/2 - i)");
    }

    prop_compose! {
        fn arb_scalar()(terms in prop::collection::vec((-3i64..=3, -4i64..=4, -4i64..=4, 1i64..=3), 0..4)) -> Scalar {
            let mut s = Scalar::zero();
            for (k, re, im, den) in terms {
                s += &Scalar::monomial(GaussianRational::new(rational(re, den), rational(im, den)), k);
            }
            s
        }
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_scalar(), b in arb_scalar(), c in arb_scalar()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert!((&a - &a).is_zero());
        }

        #[test]
        fn conj_is_an_involutive_automorphism(a in arb_scalar(), b in arb_scalar()) {
            prop_assert_eq!(a.conj().conj(), a.clone());
            prop_assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
            prop_assert_eq!((&a + &b).conj(), &a.conj() + &b.conj());
        }
    }
}
