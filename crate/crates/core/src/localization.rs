//! Localization of the sphere at the central multiplicative set generated by
//! `|Z|^2` and `|W|^2`.
//!
//! Denominators are central and hermitian, so a fraction is a numerator
//! together with the exponents of `|Z|^-2` and `|W|^-2`.

use std::collections::BTreeMap;
use std::fmt;

use crate::algebra::{AlgebraElement, AlgebraId, Monomial, SphereMonomial, StarRing};
use crate::derivations::Derivation;
use crate::error::{Error, Result};
use crate::scalars::Scalar;

/// One of the two generators of the denominator set.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CentralFactor {
    AbsZ2,
    AbsW2,
}

impl CentralFactor {
    pub fn name(self) -> &'static str {
        match self {
            CentralFactor::AbsZ2 => "AbsZ2",
            CentralFactor::AbsW2 => "AbsW2",
        }
    }

    pub fn element(self) -> AlgebraElement {
        match self {
            CentralFactor::AbsZ2 => AlgebraElement::abs_z2(AlgebraId::Sphere),
            CentralFactor::AbsW2 => AlgebraElement::abs_w2(AlgebraId::Sphere),
        }
    }
}

fn sphere_parts(a: &AlgebraElement) -> Result<Vec<(SphereMonomial, &Scalar)>> {
    if a.algebra() != AlgebraId::Sphere {
        return Err(Error::UnsupportedAlgebra);
    }
    Ok(a.terms()
        .map(|(m, s)| match m {
            Monomial::Sphere(sm) => (*sm, s),
            Monomial::Torus(_) => unreachable!("sphere element with torus monomial"),
        })
        .collect())
}

/// Returns `b` with `d * b = a`, or `NotDivisible` with a witness.
pub fn divide_exact(a: &AlgebraElement, d: CentralFactor) -> Result<AlgebraElement> {
    let parts = sphere_parts(a)?;
    let mut out = AlgebraElement::zero(AlgebraId::Sphere);
    match d {
        CentralFactor::AbsZ2 => {
            for (m, s) in parts {
                if m.i == 0 || m.j == 0 {
                    return Err(Error::NotDivisible {
                        divisor: d.name(),
                        witness: format!("monomial {}", Monomial::Sphere(m)),
                    });
                }
                let shifted = SphereMonomial { i: m.i - 1, j: m.j - 1, k: m.k };
                out = &out + &AlgebraElement::term(s.clone(), Monomial::Sphere(shifted));
            }
        }
        CentralFactor::AbsW2 => {
            // (1 - ZZ*) b = a  <=>  a_t = b_t - b_{t-1} along each diagonal
            // (i0 + t, j0 + t, k), so b_t is the running sum of a.
            let mut diagonals: BTreeMap<(i64, i64), BTreeMap<u32, Scalar>> = BTreeMap::new();
            for (m, s) in parts {
                let key = (i64::from(m.i) - i64::from(m.j), m.k);
                diagonals.entry(key).or_default().insert(m.i.min(m.j), s.clone());
            }
            for ((offset, k), entries) in diagonals {
                let (i0, j0) = if offset >= 0 { (offset as u32, 0) } else { (0, (-offset) as u32) };
                let mut running = Scalar::zero();
                let first = *entries.keys().next().expect("non-empty diagonal");
                let last = *entries.keys().last().expect("non-empty diagonal");
                for t in first..=last {
                    if let Some(s) = entries.get(&t) {
                        running += s;
                    }
                    if t < last {
                        let mono = SphereMonomial { i: i0 + t, j: j0 + t, k };
                        out = &out + &AlgebraElement::term(running.clone(), Monomial::Sphere(mono));
                    }
                }
                if !running.is_zero() {
                    return Err(Error::NotDivisible {
                        divisor: d.name(),
                        witness: format!(
                            "diagonal through {} has coefficient sum {running}",
                            Monomial::Sphere(SphereMonomial { i: i0, j: j0, k })
                        ),
                    });
                }
            }
        }
    }
    Ok(out)
}

/// `|Z|^{2m} |W|^{2n}`.
pub fn central_power(m: u32, n: u32) -> AlgebraElement {
    let alg = AlgebraId::Sphere;
    &AlgebraElement::abs_z2(alg).pow(m) * &AlgebraElement::abs_w2(alg).pow(n)
}

/// A certified regular element `scale * |Z|^{2m} |W|^{2n}` with `scale` a
/// unit scalar; on the torus only nonzero unit scalars are certified.
#[derive(Clone, Debug, PartialEq)]
pub struct RegularElement {
    pub algebra: AlgebraId,
    pub scale: Scalar,
    pub z_power: u32,
    pub w_power: u32,
}

impl RegularElement {
    pub fn element(&self) -> AlgebraElement {
        match self.algebra {
            AlgebraId::Torus => AlgebraElement::scalar(AlgebraId::Torus, self.scale.clone()),
            AlgebraId::Sphere => central_power(self.z_power, self.w_power).scale(&self.scale),
        }
    }

    /// The inverse in the localization.
    pub fn inverse(&self) -> LocalizedElement {
        let inv = self.scale.unit_inverse().expect("certified scale is a unit");
        LocalizedElement {
            num: AlgebraElement::scalar(self.algebra, inv),
            m: self.z_power,
            n: self.w_power,
        }
    }
}

/// Recognises the whitelist of regular elements; `None` if `h` is not in it.
pub fn certify_regular(h: &AlgebraElement) -> Option<RegularElement> {
    if h.is_zero() {
        return None;
    }
    let algebra = h.algebra();
    let (mut rest, mut z_power, mut w_power) = (h.clone(), 0, 0);
    if algebra == AlgebraId::Sphere {
        while let Ok(next) = divide_exact(&rest, CentralFactor::AbsZ2) {
            rest = next;
            z_power += 1;
        }
        while let Ok(next) = divide_exact(&rest, CentralFactor::AbsW2) {
            rest = next;
            w_power += 1;
        }
    }
    let scale = rest.as_scalar()?;
    scale.unit_inverse()?;
    Some(RegularElement { algebra, scale, z_power, w_power })
}

/// `num * |Z|^{-2m} |W|^{-2n}`.
#[derive(Clone, Debug)]
pub struct LocalizedElement {
    num: AlgebraElement,
    m: u32,
    n: u32,
}

impl LocalizedElement {
    /// Builds and reduces a fraction. Denominators exist only over the sphere.
    pub fn new(num: AlgebraElement, m: u32, n: u32) -> Result<Self> {
        if num.algebra() != AlgebraId::Sphere && (m > 0 || n > 0) {
            return Err(Error::UnsupportedAlgebra);
        }
        Ok(Self { num, m, n }.reduced())
    }

    pub fn from_base(a: AlgebraElement) -> Self {
        Self { num: a, m: 0, n: 0 }
    }

    pub fn numerator(&self) -> &AlgebraElement {
        &self.num
    }

    /// `(m, n)` of the denominator `|Z|^{2m}|W|^{2n}`.
    pub fn denominator_exponents(&self) -> (u32, u32) {
        (self.m, self.n)
    }

    pub fn algebra(&self) -> AlgebraId {
        self.num.algebra()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Divides out `|Z|^2` and `|W|^2` from the numerator greedily.
    pub fn reduced(mut self) -> Self {
        if self.num.is_zero() {
            self.m = 0;
            self.n = 0;
            return self;
        }
        loop {
            let mut progressed = false;
            if self.m > 0 {
                if let Ok(next) = divide_exact(&self.num, CentralFactor::AbsZ2) {
                    self.num = next;
                    self.m -= 1;
                    progressed = true;
                }
            }
            if self.n > 0 {
                if let Ok(next) = divide_exact(&self.num, CentralFactor::AbsW2) {
                    self.num = next;
                    self.n -= 1;
                    progressed = true;
                }
            }
            if !progressed {
                return self;
            }
        }
    }

    /// The base-algebra representative, if the reduced denominator is trivial.
    pub fn lift_to_base(&self) -> Result<AlgebraElement> {
        let r = self.clone().reduced();
        if r.m == 0 && r.n == 0 {
            Ok(r.num)
        } else {
            Err(Error::NotLiftable(self.to_string()))
        }
    }

    fn expand_to(&self, m: u32, n: u32) -> AlgebraElement {
        if m == self.m && n == self.n {
            self.num.clone()
        } else {
            &self.num * &central_power(m - self.m, n - self.n)
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        let (m, n) = (self.m.max(other.m), self.n.max(other.n));
        let num = self.expand_to(m, n).try_add(&other.expand_to(m, n))?;
        Ok(Self { num, m, n }.reduced())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        let num = self.num.try_mul(&other.num)?;
        Ok(Self { num, m: self.m + other.m, n: self.n + other.n }.reduced())
    }

    pub fn star(&self) -> Self {
        Self { num: self.num.star(), m: self.m, n: self.n }
    }

    pub fn divide_by(&self, r: &RegularElement) -> Self {
        self.try_mul(&r.inverse()).expect("regular element from the same algebra")
    }
}

impl PartialEq for LocalizedElement {
    fn eq(&self, other: &Self) -> bool {
        if self.algebra() != other.algebra() {
            return false;
        }
        let (m, n) = (self.m.max(other.m), self.n.max(other.n));
        self.expand_to(m, n) == other.expand_to(m, n)
    }
}

impl fmt::Display for LocalizedElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.m == 0 && self.n == 0 {
            return write!(f, "{}", self.num);
        }
        let mut den = Vec::new();
        for (name, p) in [("AbsZ2", self.m), ("AbsW2", self.n)] {
            match p {
                0 => {}
                1 => den.push(name.to_string()),
                p => den.push(format!("{name}^{p}")),
            }
        }
        write!(f, "({}) / ({})", self.num, den.join(" "))
    }
}

impl StarRing for LocalizedElement {
    fn algebra(&self) -> AlgebraId {
        self.num.algebra()
    }
    fn zero_of(alg: AlgebraId) -> Self {
        Self::from_base(AlgebraElement::zero(alg))
    }
    fn from_base(a: &AlgebraElement) -> Self {
        LocalizedElement::from_base(a.clone())
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn plus(&self, rhs: &Self) -> Self {
        self.try_add(rhs).expect("algebra mismatch in addition")
    }
    fn minus(&self, rhs: &Self) -> Self {
        self.plus(&rhs.negated())
    }
    fn times(&self, rhs: &Self) -> Self {
        self.try_mul(rhs).expect("algebra mismatch in product")
    }
    fn negated(&self) -> Self {
        Self { num: -&self.num, m: self.m, n: self.n }
    }
    fn star(&self) -> Self {
        LocalizedElement::star(self)
    }
    fn scaled(&self, s: &Scalar) -> Self {
        Self { num: self.num.scale(s), m: self.m, n: self.n }.reduced()
    }
    /// Quotient rule with a central denominator `D`:
    /// `d(a / D) = (d(a) D - a d(D)) / D^2`.
    fn derive(&self, d: &Derivation) -> Self {
        let da = d.apply(&self.num).expect("derivation applied across algebras");
        if self.m == 0 && self.n == 0 {
            return Self::from_base(da);
        }
        let den = central_power(self.m, self.n);
        let dden = d.apply(&den).expect("sphere derivation");
        let num = &(&da * &den) - &(&self.num * &dden);
        Self { num, m: 2 * self.m, n: 2 * self.n }.reduced()
    }
}


#[cfg(test)]
mod props {
    use super::*;
    use crate::random;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const S: AlgebraId = AlgebraId::Sphere;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn division_round_trips(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let b = random::element(&mut rng, S);
            for d in [CentralFactor::AbsZ2, CentralFactor::AbsW2] {
                prop_assert_eq!(divide_exact(&(&d.element() * &b), d).unwrap(), b.clone());
            }
            let a = random::element(&mut rng, S);
            for d in [CentralFactor::AbsZ2, CentralFactor::AbsW2] {
                if let Ok(x) = divide_exact(&a, d) {
                    prop_assert_eq!(&d.element() * &x, a.clone());
                }
            }
        }

        #[test]
        fn division_operators_commute(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = &central_power(1, 1) * &random::element(&mut rng, S);
            let zw = divide_exact(&divide_exact(&a, CentralFactor::AbsZ2).unwrap(), CentralFactor::AbsW2).unwrap();
            let wz = divide_exact(&divide_exact(&a, CentralFactor::AbsW2).unwrap(), CentralFactor::AbsZ2).unwrap();
            prop_assert_eq!(zw, wz);
        }

        #[test]
        fn fractions_form_a_star_ring(seed in any::<u64>(), m in 0u32..3, n in 0u32..3) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let x = LocalizedElement::new(random::element(&mut rng, S), m, n).unwrap();
            let y = LocalizedElement::new(random::element(&mut rng, S), n, m).unwrap();
            let z = LocalizedElement::from_base(random::element(&mut rng, S));
            prop_assert_eq!(x.times(&y).times(&z), x.times(&y.times(&z)));
            prop_assert_eq!(x.times(&y).star(), y.star().times(&x.star()));
            prop_assert_eq!(x.plus(&y).minus(&y), x.clone());
            let cleared = x.times(&LocalizedElement::from_base(central_power(m, n)));
            prop_assert!(cleared.lift_to_base().is_ok());
        }
    }
}
