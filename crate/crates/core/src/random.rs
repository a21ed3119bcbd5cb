//! Seeded random elements for property checks.

use rand::Rng;

use crate::algebra::{AlgebraElement, AlgebraId, Monomial, SphereMonomial, TorusMonomial};
use crate::metric_module::ModuleElement;
use crate::scalars::{rational, GaussianRational, Scalar};

/// A small scalar: up to two terms `c q^k` with Gaussian-rational `c`.
pub fn scalar<R: Rng + ?Sized>(rng: &mut R) -> Scalar {
    let mut out = Scalar::zero();
    for _ in 0..rng.random_range(1..=2) {
        let re = rational(rng.random_range(-3..=3), rng.random_range(1..=3));
        let im = if rng.random_bool(0.4) { rational(rng.random_range(-2..=2), 1) } else { rational(0, 1) };
        let k = if rng.random_bool(0.5) { 0 } else { rng.random_range(-2..=2) };
        out += &Scalar::monomial(GaussianRational::new(re, im), k);
    }
    out
}

pub fn monomial<R: Rng + ?Sized>(rng: &mut R, alg: AlgebraId) -> Monomial {
    match alg {
        AlgebraId::Torus => Monomial::Torus(TorusMonomial { m: rng.random_range(-2..=2), n: rng.random_range(-2..=2) }),
        AlgebraId::Sphere => Monomial::Sphere(SphereMonomial {
            i: rng.random_range(0..=2),
            j: rng.random_range(0..=2),
            k: rng.random_range(-2..=2),
        }),
    }
}

/// A random element with up to three terms.
pub fn element<R: Rng + ?Sized>(rng: &mut R, alg: AlgebraId) -> AlgebraElement {
    let mut out = AlgebraElement::zero(alg);
    for _ in 0..rng.random_range(1..=3) {
        out = &out + &AlgebraElement::term(scalar(rng), monomial(rng, alg));
    }
    out
}

/// A random hermitian element `a + a*`.
pub fn hermitian_element<R: Rng + ?Sized>(rng: &mut R, alg: AlgebraId) -> AlgebraElement {
    let a = element(rng, alg);
    &a + &a.star()
}

pub fn module_element<R: Rng + ?Sized>(rng: &mut R, alg: AlgebraId, rank: usize) -> ModuleElement {
    ModuleElement::new((0..rank).map(|_| if rng.random_bool(0.25) { AlgebraElement::zero(alg) } else { element(rng, alg) }).collect())
}
