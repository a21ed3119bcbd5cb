//! Free right modules in basis coordinates, hermitian forms, and real metric
//! calculi.

use std::fmt;

use crate::algebra::{AlgebraElement, AlgebraId, Generator, StarRing};
use crate::derivations::{Derivation, LieAlgebra};
use crate::error::{Error, Result};
use crate::localization::{certify_regular, RegularElement};

/// `U = E_a U^a` in a fixed basis; the right action multiplies every
/// coordinate on the right.
#[derive(Clone, Debug, PartialEq)]
pub struct ModuleElement<C = AlgebraElement> {
    coords: Vec<C>,
}

impl<C: StarRing> ModuleElement<C> {
    pub fn new(coords: Vec<C>) -> Self {
        Self { coords }
    }

    pub fn zero(alg: AlgebraId, rank: usize) -> Self {
        Self { coords: vec![C::zero_of(alg); rank] }
    }

    /// The basis vector `E_a`.
    pub fn basis(alg: AlgebraId, rank: usize, a: usize) -> Self {
        let mut out = Self::zero(alg, rank);
        out.coords[a] = C::one_of(alg);
        out
    }

    pub fn rank(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[C] {
        &self.coords
    }

    pub fn coord(&self, a: usize) -> &C {
        &self.coords[a]
    }

    pub fn into_coords(self) -> Vec<C> {
        self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(C::is_zero)
    }

    fn check_rank(&self, other: &Self) -> Result<()> {
        if self.rank() == other.rank() {
            Ok(())
        } else {
            Err(Error::RankMismatch { expected: self.rank(), actual: other.rank() })
        }
    }

    pub fn plus(&self, other: &Self) -> Result<Self> {
        self.check_rank(other)?;
        Ok(Self { coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a.plus(b)).collect() })
    }

    pub fn minus(&self, other: &Self) -> Result<Self> {
        self.check_rank(other)?;
        Ok(Self { coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a.minus(b)).collect() })
    }

    /// `U a`.
    pub fn right_mul(&self, a: &C) -> Self {
        Self { coords: self.coords.iter().map(|c| c.times(a)).collect() }
    }

    pub fn negated(&self) -> Self {
        Self { coords: self.coords.iter().map(C::negated).collect() }
    }

    /// Re-expresses the coordinates in another coefficient ring.
    pub fn map<D: StarRing>(&self, f: impl Fn(&C) -> D) -> ModuleElement<D> {
        ModuleElement { coords: self.coords.iter().map(f).collect() }
    }
}

impl ModuleElement<AlgebraElement> {
    pub fn localized<D: StarRing>(&self) -> ModuleElement<D> {
        self.map(D::from_base)
    }
}

impl<C: StarRing> fmt::Display for ModuleElement<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coords
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(a, c)| format!("E{}*({})", a + 1, c))
            .collect();
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// The matrix `h_ab = h(E_a, E_b)`, extended by `h(U, V) = sum (U^a)* h_ab V^b`.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianForm {
    matrix: Vec<Vec<AlgebraElement>>,
}

impl HermitianForm {
    /// Checks squareness and `h_ab* = h_ba`.
    pub fn new(matrix: Vec<Vec<AlgebraElement>>) -> Result<Self> {
        let form = Self::new_unchecked(matrix)?;
        if let Some((row, col)) = form.hermiticity_violation() {
            return Err(Error::NotHermitianForm { row, col });
        }
        Ok(form)
    }

    /// Checks only the shape; used to represent deliberately broken forms.
    pub fn new_unchecked(matrix: Vec<Vec<AlgebraElement>>) -> Result<Self> {
        let n = matrix.len();
        if let Some(row) = matrix.iter().find(|row| row.len() != n) {
            return Err(Error::RankMismatch { expected: n, actual: row.len() });
        }
        if let Some(first) = matrix.first().and_then(|r| r.first()) {
            let alg = first.algebra();
            if let Some(bad) = matrix.iter().flatten().find(|e| e.algebra() != alg) {
                return Err(Error::MixedAlgebra { left: alg, right: bad.algebra() });
            }
        }
        Ok(Self { matrix })
    }

    pub fn diagonal(entries: Vec<AlgebraElement>) -> Result<Self> {
        let n = entries.len();
        let alg = entries.first().map(AlgebraElement::algebra).unwrap_or(AlgebraId::Sphere);
        let matrix = (0..n)
            .map(|a| (0..n).map(|b| if a == b { entries[a].clone() } else { AlgebraElement::zero(alg) }).collect())
            .collect();
        Self::new(matrix)
    }

    pub fn hermiticity_violation(&self) -> Option<(usize, usize)> {
        let n = self.rank();
        (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .find(|&(a, b)| self.matrix[a][b].star() != self.matrix[b][a])
    }

    pub fn rank(&self) -> usize {
        self.matrix.len()
    }

    pub fn algebra(&self) -> AlgebraId {
        self.matrix.first().and_then(|r| r.first()).map(AlgebraElement::algebra).unwrap_or(AlgebraId::Sphere)
    }

    pub fn entry(&self, a: usize, b: usize) -> &AlgebraElement {
        &self.matrix[a][b]
    }

    pub fn matrix(&self) -> &[Vec<AlgebraElement>] {
        &self.matrix
    }

    /// `h(U, V) = sum_{a,b} (U^a)* h_ab V^b`.
    pub fn h_eval<C: StarRing>(&self, u: &ModuleElement<C>, v: &ModuleElement<C>) -> Result<C> {
        let n = self.rank();
        for x in [u, v] {
            if x.rank() != n {
                return Err(Error::RankMismatch { expected: n, actual: x.rank() });
            }
        }
        let alg = self.algebra();
        for x in u.coords.iter().chain(&v.coords) {
            if x.algebra() != alg {
                return Err(Error::MixedAlgebra { left: alg, right: x.algebra() });
            }
        }
        let mut total = C::zero_of(alg);
        for (a, ua) in u.coords.iter().enumerate() {
            if ua.is_zero() {
                continue;
            }
            let left = ua.star();
            for (b, vb) in v.coords.iter().enumerate() {
                let h = &self.matrix[a][b];
                if h.is_zero() || vb.is_zero() {
                    continue;
                }
                total = total.plus(&left.times(&C::from_base(h)).times(vb));
            }
        }
        Ok(total)
    }
}

/// `phi(d_a) = images[a]`, extended rationally-linearly.
#[derive(Clone, Debug, PartialEq)]
pub struct AnchorMap {
    images: Vec<ModuleElement>,
}

impl AnchorMap {
    pub fn new(images: Vec<ModuleElement>) -> Self {
        Self { images }
    }

    /// `phi(d_a) = E_a`.
    pub fn canonical(alg: AlgebraId, rank: usize) -> Self {
        Self { images: (0..rank).map(|a| ModuleElement::basis(alg, rank, a)).collect() }
    }

    pub fn image(&self, a: usize) -> &ModuleElement {
        &self.images[a]
    }

    pub fn images(&self) -> &[ModuleElement] {
        &self.images
    }
}

/// A metric module with a Lie algebra of hermitian derivations and an
/// anchor map whose image is the module basis.
#[derive(Clone, Debug)]
pub struct RealMetricCalculus {
    form: HermitianForm,
    lie: LieAlgebra,
    anchor: AnchorMap,
}

impl RealMetricCalculus {
    pub fn new(form: HermitianForm, lie: LieAlgebra, anchor: AnchorMap) -> Result<Self> {
        let n = form.rank();
        if lie.dim() != n {
            return Err(Error::RankMismatch { expected: n, actual: lie.dim() });
        }
        if anchor.images.len() != n {
            return Err(Error::RankMismatch { expected: n, actual: anchor.images.len() });
        }
        if let Some(bad) = anchor.images.iter().find(|e| e.rank() != n) {
            return Err(Error::RankMismatch { expected: n, actual: bad.rank() });
        }
        if lie.algebra() != form.algebra() {
            return Err(Error::MixedAlgebra { left: form.algebra(), right: lie.algebra() });
        }
        Ok(Self { form, lie, anchor })
    }

    pub fn algebra(&self) -> AlgebraId {
        self.form.algebra()
    }

    pub fn rank(&self) -> usize {
        self.form.rank()
    }

    pub fn form(&self) -> &HermitianForm {
        &self.form
    }

    pub fn lie(&self) -> &LieAlgebra {
        &self.lie
    }

    pub fn anchor(&self) -> &AnchorMap {
        &self.anchor
    }

    pub fn derivation(&self, a: usize) -> &Derivation {
        self.lie.derivation(a)
    }

    pub fn h(&self, a: usize, b: usize) -> &AlgebraElement {
        self.form.entry(a, b)
    }

    /// `phi([d_a, d_b])` as a module element.
    pub fn anchor_of_bracket(&self, a: usize, b: usize) -> ModuleElement {
        let coeffs = self.lie.bracket_coefficients(a, b);
        let alg = self.algebra();
        let mut out = ModuleElement::zero(alg, self.rank());
        for (s, c) in coeffs.iter().enumerate() {
            if num_traits::Zero::is_zero(c) {
                continue;
            }
            let term = self.anchor.image(s).map(|x| x.scale_rational(c));
            out = out.plus(&term).expect("same rank");
        }
        out
    }
}

/// Outcome of a single named check.
#[derive(Clone, Debug, PartialEq)]
pub struct AxiomCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl AxiomCheck {
    pub fn new(name: impl Into<String>, failure: Option<String>) -> Self {
        let passed = failure.is_none();
        Self { name: name.into(), passed, detail: failure.unwrap_or_else(|| "ok".into()) }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ValidationReport {
    pub checks: Vec<AxiomCheck>,
}

impl ValidationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&AxiomCheck> {
        self.checks.iter().find(|c| !c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&AxiomCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

pub const CHECK_FREE_BASIS: &str = "free basis";
pub const CHECK_NONDEGENERATE: &str = "non-degeneracy witness";
pub const CHECK_HERMITIAN_FORM: &str = "hermitian form";
pub const CHECK_REAL_METRIC: &str = "h(E, E') hermitian";
pub const CHECK_HERMITIAN_DERIVATIONS: &str = "hermitian derivations";
pub const CHECK_WELL_DEFINED: &str = "derivations respect relations";
pub const CHECK_BRACKET_CLOSURE: &str = "bracket closure";

/// Checks the axioms of a real metric calculus, one entry per axiom.
pub fn validate_real_metric_calculus(c: &RealMetricCalculus) -> ValidationReport {
    let n = c.rank();
    let alg = c.algebra();
    let mut checks = Vec::new();

    // The module is presented in coordinates, so freeness reduces to the
    // anchor hitting the coordinate basis.
    let free = (0..n)
        .find(|&a| *c.anchor.image(a) != ModuleElement::basis(alg, n, a))
        .map(|a| format!("phi(d{}) is not the basis vector E{}", a + 1, a + 1));
    checks.push(AxiomCheck::new(CHECK_FREE_BASIS, free));

    // h(U, E_b) = 0 for all b must force U = 0; probe U = E_a g.
    let mut nondeg = None;
    'outer: for a in 0..n {
        for g in Generator::ALL {
            let u = ModuleElement::basis(alg, n, a).right_mul(&AlgebraElement::generator(alg, g));
            let all_zero = (0..n).all(|b| {
                c.form
                    .h_eval(&u, &ModuleElement::basis(alg, n, b))
                    .map(|x| x.is_zero())
                    .unwrap_or(true)
            });
            if all_zero {
                nondeg = Some(format!("h(E{} {}, E_b) = 0 for every b", a + 1, g.name()));
                break 'outer;
            }
        }
    }
    checks.push(AxiomCheck::new(CHECK_NONDEGENERATE, nondeg));

    let herm_form = c
        .form
        .hermiticity_violation()
        .map(|(a, b)| format!("h{}{}* != h{}{}", a + 1, b + 1, b + 1, a + 1));
    checks.push(AxiomCheck::new(CHECK_HERMITIAN_FORM, herm_form));

    let mut real = None;
    'real: for a in 0..n {
        for b in 0..n {
            let v = c.form.h_eval(c.anchor.image(a), c.anchor.image(b)).expect("ranks checked");
            if !v.is_hermitian() {
                real = Some(format!("h(E{}, E{}) = {v} is not hermitian", a + 1, b + 1));
                break 'real;
            }
        }
    }
    checks.push(AxiomCheck::new(CHECK_REAL_METRIC, real));

    let herm = c
        .lie
        .basis()
        .iter()
        .find(|d| !d.is_hermitian())
        .map(|d| format!("{} is not hermitian", d.label()));
    checks.push(AxiomCheck::new(CHECK_HERMITIAN_DERIVATIONS, herm));

    let wd = c.lie.basis().iter().find_map(|d| {
        d.relation_residuals()
            .into_iter()
            .find(|(_, r)| !r.is_zero())
            .map(|(name, r)| format!("{} on `{name}` leaves {r}", d.label()))
    });
    checks.push(AxiomCheck::new(CHECK_WELL_DEFINED, wd));

    let mut closure = None;
    'closure: for a in 0..n {
        for b in 0..n {
            let br = c.derivation(a).bracket(c.derivation(b)).expect("same algebra");
            let coeffs: Vec<_> = c
                .lie
                .bracket_coefficients(a, b)
                .iter()
                .cloned()
                .zip(c.lie.basis())
                .collect();
            let refs: Vec<_> = coeffs.iter().map(|(r, d)| (r.clone(), *d)).collect();
            let combo = Derivation::linear_combination(alg, "combo", &refs).expect("same algebra");
            if combo.values() != br.values() {
                closure = Some(format!("[d{}, d{}] differs from its structure-constant expansion", a + 1, b + 1));
                break 'closure;
            }
        }
    }
    checks.push(AxiomCheck::new(CHECK_BRACKET_CLOSURE, closure));

    ValidationReport { checks }
}

/// A validated pseudo-inverse `(hhat, H)`: `hhat h = h hhat = H * identity`
/// with `H` hermitian and certified regular.
#[derive(Clone, Debug, PartialEq)]
pub struct PseudoInverse {
    hhat: Vec<Vec<AlgebraElement>>,
    h: AlgebraElement,
    certificate: RegularElement,
}

impl PseudoInverse {
    pub fn hhat(&self, a: usize, b: usize) -> &AlgebraElement {
        &self.hhat[a][b]
    }

    pub fn hhat_matrix(&self) -> &[Vec<AlgebraElement>] {
        &self.hhat
    }

    /// The element `H`.
    pub fn big_h(&self) -> &AlgebraElement {
        &self.h
    }

    pub fn certificate(&self) -> &RegularElement {
        &self.certificate
    }

    pub fn rank(&self) -> usize {
        self.hhat.len()
    }
}

fn first_failure(
    n: usize,
    mut check: impl FnMut(usize, usize) -> Option<String>,
) -> Option<String> {
    (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).find_map(|(a, b)| check(a, b))
}

/// Validates a candidate pseudo-inverse, including the consequences
/// `[h_ab, H] = [hhat^ab, H] = 0` and `(hhat^ab)* = hhat^ba`.
pub fn make_pseudo_inverse(form: &HermitianForm, hhat: Vec<Vec<AlgebraElement>>, big_h: AlgebraElement) -> Result<PseudoInverse> {
    let n = form.rank();
    if hhat.len() != n || hhat.iter().any(|r| r.len() != n) {
        return Err(Error::RankMismatch { expected: n, actual: hhat.len() });
    }
    let alg = form.algebra();
    if big_h.algebra() != alg {
        return Err(Error::MixedAlgebra { left: alg, right: big_h.algebra() });
    }
    let zero = AlgebraElement::zero(alg);
    let expected = |a: usize, c: usize| if a == c { big_h.clone() } else { zero.clone() };

    let left = first_failure(n, |a, c| {
        let sum = (0..n).fold(zero.clone(), |acc, b| &acc + &(&hhat[a][b] * form.entry(b, c)));
        (sum != expected(a, c)).then(|| format!("(hhat h)[{}][{}] = {sum}", a + 1, c + 1))
    });
    if let Some(msg) = left {
        return Err(Error::NotPseudoInverse(msg));
    }
    let right = first_failure(n, |c, a| {
        let sum = (0..n).fold(zero.clone(), |acc, b| &acc + &(form.entry(c, b) * &hhat[b][a]));
        (sum != expected(a, c)).then(|| format!("(h hhat)[{}][{}] = {sum}", c + 1, a + 1))
    });
    if let Some(msg) = right {
        return Err(Error::NotPseudoInverse(msg));
    }
    if !big_h.is_hermitian() {
        return Err(Error::NotPseudoInverse(format!("H = {big_h} is not hermitian")));
    }
    let certificate = certify_regular(&big_h).ok_or_else(|| Error::IrregularDenominator(big_h.to_string()))?;

    let commute = first_failure(n, |a, b| {
        let h_comm = form.entry(a, b).commutator(&big_h).expect("same algebra");
        let hh_comm = hhat[a][b].commutator(&big_h).expect("same algebra");
        (!h_comm.is_zero() || !hh_comm.is_zero()).then(|| format!("entry ({}, {}) does not commute with H", a + 1, b + 1))
    });
    if let Some(msg) = commute {
        return Err(Error::NotPseudoInverse(msg));
    }
    let sym = first_failure(n, |a, b| {
        (hhat[a][b].star() != hhat[b][a]).then(|| format!("(hhat^{}{})* != hhat^{}{}", a + 1, b + 1, b + 1, a + 1))
    });
    if let Some(msg) = sym {
        return Err(Error::NotPseudoInverse(msg));
    }
    Ok(PseudoInverse { hhat, h: big_h, certificate })
}

/// Checks the relations between two pseudo-inverses `(hhat, H)`, `(ghat, G)`
/// of the same form: `ghat H = G hhat`, `H ghat = hhat G`, equality when
/// `G = H`, and `[G, hhat] = [H, G] = 0` whenever `[H, ghat] = 0`.
pub fn check_pseudo_inverse_pair(p: &PseudoInverse, g: &PseudoInverse) -> std::result::Result<(), String> {
    let n = p.rank();
    if g.rank() != n {
        return Err("rank mismatch".into());
    }
    let (hh, gh) = (&p.h, &g.h);
    if let Some(msg) = first_failure(n, |a, b| {
        let lhs = &g.hhat[a][b] * hh;
        let rhs = gh * &p.hhat[a][b];
        (lhs != rhs).then(|| format!("ghat^{}{} H != G hhat^{}{}", a + 1, b + 1, a + 1, b + 1))
    }) {
        return Err(msg);
    }
    if let Some(msg) = first_failure(n, |a, b| {
        let lhs = hh * &g.hhat[a][b];
        let rhs = &p.hhat[a][b] * gh;
        (lhs != rhs).then(|| format!("H ghat^{}{} != hhat^{}{} G", a + 1, b + 1, a + 1, b + 1))
    }) {
        return Err(msg);
    }
    if gh == hh && g.hhat != p.hhat {
        return Err("equal H but different hhat".into());
    }
    let h_commutes_with_ghat = (0..n).all(|a| (0..n).all(|b| hh.commutator(&g.hhat[a][b]).expect("same").is_zero()));
    if h_commutes_with_ghat {
        if !hh.commutator(gh).expect("same").is_zero() {
            return Err("[H, G] != 0".into());
        }
        if let Some(msg) = first_failure(n, |a, b| {
            (!gh.commutator(&p.hhat[a][b]).expect("same").is_zero()).then(|| format!("[G, hhat^{}{}] != 0", a + 1, b + 1))
        }) {
            return Err(msg);
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models;

    const S: AlgebraId = AlgebraId::Sphere;

    #[test]
    fn h_eval_examples() {
        let sphere = models::sphere_calculus().unwrap();
        let e1 = ModuleElement::<AlgebraElement>::basis(S, 3, 0);
        assert_eq!(sphere.form().h_eval(&e1, &e1).unwrap(), AlgebraElement::abs_z2(S));
        let zero = ModuleElement::zero(S, 3);
        assert!(sphere.form().h_eval(&e1, &zero).unwrap().is_zero());

        let torus = models::torus_calculus().unwrap();
        let t = AlgebraId::Torus;
        for a in 0..2 {
            for b in 0..2 {
                let v = torus
                    .form()
                    .h_eval(&ModuleElement::<AlgebraElement>::basis(t, 2, a), &ModuleElement::basis(t, 2, b))
                    .unwrap();
                assert_eq!(v, AlgebraElement::from_i64(t, i64::from(a == b)));
            }
        }
        let wrong = ModuleElement::<AlgebraElement>::zero(S, 2);
        assert!(matches!(sphere.form().h_eval(&e1, &wrong), Err(Error::RankMismatch { .. })));
    }

    #[test]
    fn validation() {
        for c in [models::sphere_calculus().unwrap(), models::torus_calculus().unwrap()] {
            let report = validate_real_metric_calculus(&c);
            assert!(report.all_passed(), "{report:?}");
        }
        let mut matrix = models::sphere_calculus().unwrap().form().matrix().to_vec();
        matrix[0][0] = AlgebraElement::z(S);
        assert!(matches!(HermitianForm::new(matrix.clone()), Err(Error::NotHermitianForm { row: 0, col: 0 })));
        let broken = RealMetricCalculus::new(
            HermitianForm::new_unchecked(matrix).unwrap(),
            LieAlgebra::new(crate::derivations::sphere_basis()).unwrap(),
            AnchorMap::canonical(S, 3),
        )
        .unwrap();
        let report = validate_real_metric_calculus(&broken);
        assert!(!report.check(CHECK_REAL_METRIC).unwrap().passed);
        assert!(!report.check(CHECK_HERMITIAN_FORM).unwrap().passed);
        assert!(report.check(CHECK_HERMITIAN_DERIVATIONS).unwrap().passed);
    }

    #[test]
    fn pseudo_inverses() {
        let c = models::sphere_calculus().unwrap();
        let p = models::sphere_pseudo_inverse(&c).unwrap();
        assert_eq!(*p.big_h(), &AlgebraElement::abs_z2(S) * &AlgebraElement::abs_w2(S));

        let id: Vec<Vec<_>> = (0..3)
            .map(|a| (0..3).map(|b| AlgebraElement::from_i64(S, i64::from(a == b))).collect())
            .collect();
        let err = make_pseudo_inverse(c.form(), id, AlgebraElement::one(S)).unwrap_err();
        assert!(matches!(err, Error::NotPseudoInverse(_)));

        let t = models::torus_calculus().unwrap();
        assert!(models::torus_pseudo_inverse(&t).is_ok());

        // a valid identity with an irregular H is rejected
        let z = AlgebraElement::z(S);
        let zs = AlgebraElement::zs(S);
        let form = HermitianForm::diagonal(vec![&z + &zs]).unwrap();
        let err = make_pseudo_inverse(&form, vec![vec![AlgebraElement::one(S)]], &z + &zs).unwrap_err();
        assert!(matches!(err, Error::IrregularDenominator(_)));
    }

    #[test]
    fn pseudo_inverse_pair() {
        let c = models::sphere_calculus().unwrap();
        let p = models::sphere_pseudo_inverse(&c).unwrap();
        let g = models::scaled_pseudo_inverse(&c, &p).unwrap();
        check_pseudo_inverse_pair(&p, &g).unwrap();
        check_pseudo_inverse_pair(&g, &p).unwrap();
        check_pseudo_inverse_pair(&p, &p).unwrap();
    }
}
