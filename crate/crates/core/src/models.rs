//! The two concrete calculi: the noncommutative torus with the flat metric
//! and the noncommutative 3-sphere with its round metric.

use crate::algebra::{AlgebraElement, AlgebraId};
use crate::derivations::{sphere_basis, torus_basis, LieAlgebra};
use crate::error::Result;
use crate::metric_module::{make_pseudo_inverse, AnchorMap, HermitianForm, PseudoInverse, RealMetricCalculus};

/// `h = diag(|Z|^2, |W|^2, |Z|^2 |W|^2)` with derivations `d1, d2, d3`.
pub fn sphere_calculus() -> Result<RealMetricCalculus> {
    let s = AlgebraId::Sphere;
    let z2 = AlgebraElement::abs_z2(s);
    let w2 = AlgebraElement::abs_w2(s);
    let form = HermitianForm::diagonal(vec![z2.clone(), w2.clone(), &z2 * &w2])?;
    RealMetricCalculus::new(form, LieAlgebra::new(sphere_basis())?, AnchorMap::canonical(s, 3))
}

/// `h = identity` with derivations `d1, d2`.
pub fn torus_calculus() -> Result<RealMetricCalculus> {
    let t = AlgebraId::Torus;
    let form = HermitianForm::diagonal(vec![AlgebraElement::one(t), AlgebraElement::one(t)])?;
    RealMetricCalculus::new(form, LieAlgebra::new(torus_basis())?, AnchorMap::canonical(t, 2))
}

pub fn calculus(alg: AlgebraId) -> Result<RealMetricCalculus> {
    match alg {
        AlgebraId::Torus => torus_calculus(),
        AlgebraId::Sphere => sphere_calculus(),
    }
}

fn diagonal(alg: AlgebraId, entries: Vec<AlgebraElement>) -> Vec<Vec<AlgebraElement>> {
    let n = entries.len();
    (0..n)
        .map(|a| (0..n).map(|b| if a == b { entries[a].clone() } else { AlgebraElement::zero(alg) }).collect())
        .collect()
}

/// `hhat = diag(|W|^2, |Z|^2, 1)`, `H = |Z|^2 |W|^2`.
pub fn sphere_pseudo_inverse(c: &RealMetricCalculus) -> Result<PseudoInverse> {
    let s = AlgebraId::Sphere;
    let z2 = AlgebraElement::abs_z2(s);
    let w2 = AlgebraElement::abs_w2(s);
    let hhat = diagonal(s, vec![w2.clone(), z2.clone(), AlgebraElement::one(s)]);
    make_pseudo_inverse(c.form(), hhat, &z2 * &w2)
}

pub fn torus_pseudo_inverse(c: &RealMetricCalculus) -> Result<PseudoInverse> {
    let t = AlgebraId::Torus;
    make_pseudo_inverse(c.form(), diagonal(t, vec![AlgebraElement::one(t); 2]), AlgebraElement::one(t))
}

pub fn pseudo_inverse(c: &RealMetricCalculus) -> Result<PseudoInverse> {
    match c.algebra() {
        AlgebraId::Torus => torus_pseudo_inverse(c),
        AlgebraId::Sphere => sphere_pseudo_inverse(c),
    }
}

/// `(hhat H, H^2)` built from a given pseudo-inverse `(hhat, H)`.
pub fn scaled_pseudo_inverse(c: &RealMetricCalculus, p: &PseudoInverse) -> Result<PseudoInverse> {
    let h = p.big_h();
    let hhat = p.hhat_matrix().iter().map(|row| row.iter().map(|x| x * h).collect()).collect();
    make_pseudo_inverse(c.form(), hhat, h * h)
}
