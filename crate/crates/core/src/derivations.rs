//! Derivations of the presented algebras, given by their values on the four
//! generators and extended by Leibniz's rule.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::algebra::{relations, AlgebraElement, AlgebraId, Generator, Monomial};
use crate::error::{Error, Result};
use crate::scalars::{Rational, Scalar};

/// A derivation determined by its values on `Z, Z*, W, W*`.
///
/// All four values are stored so that non-hermitian maps stay representable;
/// whether the map respects the defining relations is a separate check.
#[derive(Clone, Debug, PartialEq)]
pub struct Derivation {
    algebra: AlgebraId,
    label: String,
    values: [AlgebraElement; 4],
}

impl Derivation {
    /// Builds a derivation from its values on `[Z, Z*, W, W*]` without any checks.
    pub fn from_values(label: impl Into<String>, values: [AlgebraElement; 4]) -> Result<Self> {
        let algebra = values[0].algebra();
        for v in &values[1..] {
            if v.algebra() != algebra {
                return Err(Error::MixedAlgebra { left: algebra, right: v.algebra() });
            }
        }
        Ok(Self { algebra, label: label.into(), values })
    }

    /// The derivation with `d(Z) = on_z`, `d(W) = on_w`, and the starred
    /// generators fixed by `d(g*) = d(g)*`.
    pub fn hermitian_extension(label: impl Into<String>, on_z: AlgebraElement, on_w: AlgebraElement) -> Result<Self> {
        let zs = on_z.star();
        let ws = on_w.star();
        Self::from_values(label, [on_z, zs, on_w, ws])
    }

    pub fn zero(alg: AlgebraId) -> Self {
        let z = AlgebraElement::zero(alg);
        Self { algebra: alg, label: "0".into(), values: [z.clone(), z.clone(), z.clone(), z] }
    }

    pub fn algebra(&self) -> AlgebraId {
        self.algebra
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn value(&self, g: Generator) -> &AlgebraElement {
        &self.values[g.index()]
    }

    pub fn values(&self) -> &[AlgebraElement; 4] {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(AlgebraElement::is_zero)
    }

    /// Leibniz's rule on an unreduced word.
    pub fn apply_word(&self, word: &[Generator]) -> AlgebraElement {
        let alg = self.algebra;
        let n = word.len();
        let mut suffixes = vec![AlgebraElement::one(alg); n + 1];
        for pos in (0..n).rev() {
            suffixes[pos] = &AlgebraElement::generator(alg, word[pos]) * &suffixes[pos + 1];
        }
        let mut prefix = AlgebraElement::one(alg);
        let mut out = AlgebraElement::zero(alg);
        for (pos, g) in word.iter().enumerate() {
            let dg = self.value(*g);
            if !dg.is_zero() {
                out = &out + &(&(&prefix * dg) * &suffixes[pos + 1]);
            }
            prefix = &prefix * &AlgebraElement::generator(alg, *g);
        }
        out
    }

    /// Applies the derivation to a normal-form element.
    pub fn apply(&self, a: &AlgebraElement) -> Result<AlgebraElement> {
        if a.algebra() != self.algebra {
            return Err(Error::MixedAlgebra { left: self.algebra, right: a.algebra() });
        }
        let mut out = AlgebraElement::zero(self.algebra);
        for (mono, c) in a.terms() {
            if mono.is_identity() {
                continue;
            }
            out = &out + &self.apply_monomial(mono).scale(c);
        }
        Ok(out)
    }

    fn apply_monomial(&self, mono: &Monomial) -> AlgebraElement {
        self.apply_word(&mono.word())
    }

    /// `d(lhs) - d(rhs)` for every defining relation, computed on the
    /// unreduced words.
    pub fn relation_residuals(&self) -> Vec<(&'static str, AlgebraElement)> {
        relations(self.algebra)
            .into_iter()
            .map(|rel| {
                let residual = rel
                    .difference()
                    .into_iter()
                    .fold(AlgebraElement::zero(self.algebra), |acc, (s, w)| &acc + &self.apply_word(&w).scale(&s));
                (rel.name, residual)
            })
            .collect()
    }

    /// True iff every defining relation is annihilated.
    pub fn check_well_defined(&self) -> bool {
        self.relation_residuals().iter().all(|(_, r)| r.is_zero())
    }

    /// `[d1, d2] = d1 d2 - d2 d1`, given by its generator values.
    pub fn bracket(&self, other: &Derivation) -> Result<Derivation> {
        if self.algebra != other.algebra {
            return Err(Error::MixedAlgebra { left: self.algebra, right: other.algebra });
        }
        let values = Generator::ALL.map(|g| {
            let a = self.apply(other.value(g)).expect("same algebra");
            let b = other.apply(self.value(g)).expect("same algebra");
            &a - &b
        });
        Ok(Derivation { algebra: self.algebra, label: format!("[{}, {}]", self.label, other.label), values })
    }

    /// `d*(a) = (d(a*))*` on generators.
    pub fn hermitian_conjugate(&self) -> Derivation {
        let values = Generator::ALL.map(|g| self.value(g.star()).star());
        Derivation { algebra: self.algebra, label: format!("{}*", self.label), values }
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian_conjugate().values == self.values
    }

    /// `sum_i c_i d_i` with rational coefficients.
    pub fn linear_combination(alg: AlgebraId, label: impl Into<String>, terms: &[(Rational, &Derivation)]) -> Result<Derivation> {
        let mut values = std::array::from_fn(|_| AlgebraElement::zero(alg));
        for (c, d) in terms {
            if d.algebra != alg {
                return Err(Error::MixedAlgebra { left: alg, right: d.algebra });
            }
            for g in Generator::ALL {
                values[g.index()] = &values[g.index()] + &d.value(g).scale_rational(c);
            }
        }
        Ok(Derivation { algebra: alg, label: label.into(), values })
    }

    /// Flattens the generator values into rational coordinates, for linear algebra over `Q`.
    fn rational_coordinates(&self) -> BTreeMap<(usize, Monomial, i64, bool), Rational> {
        let mut out = BTreeMap::new();
        for g in Generator::ALL {
            for (mono, s) in self.value(g).terms() {
                for (k, c) in s.terms() {
                    if !c.re.is_zero() {
                        out.insert((g.index(), *mono, k, false), c.re.clone());
                    }
                    if !c.im.is_zero() {
                        out.insert((g.index(), *mono, k, true), c.im.clone());
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: ", self.label)?;
        let parts: Vec<String> = Generator::ALL
            .iter()
            .map(|g| format!("{} -> {}", g.name(), self.value(*g)))
            .collect();
        write!(f, "{}", parts.join(", "))
    }
}

/// Solves `sum_j x_j columns[j] = target` over `Q`; `None` if inconsistent.
fn solve_rational<K: Ord + Clone>(columns: &[BTreeMap<K, Rational>], target: &BTreeMap<K, Rational>) -> Option<Vec<Rational>> {
    let mut keys: Vec<K> = columns.iter().flat_map(|c| c.keys().cloned()).collect();
    keys.extend(target.keys().cloned());
    keys.sort();
    keys.dedup();
    let n = columns.len();
    let mut rows: Vec<Vec<Rational>> = keys
        .iter()
        .map(|k| {
            let mut row: Vec<Rational> = columns.iter().map(|c| c.get(k).cloned().unwrap_or_else(Rational::zero)).collect();
            row.push(target.get(k).cloned().unwrap_or_else(Rational::zero));
            row
        })
        .collect();
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for col in 0..n {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else { continue };
        rows.swap(r, p);
        let inv = Rational::one() / &rows[r][col];
        for v in rows[r].iter_mut() {
            *v = &*v * &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][col].is_zero() {
                let factor = rows[i][col].clone();
                for j in 0..=n {
                    let delta = &factor * &rows[r][j];
                    rows[i][j] = &rows[i][j] - &delta;
                }
            }
        }
        pivot_cols.push(col);
        r += 1;
    }
    if rows[r..].iter().any(|row| !row[n].is_zero()) {
        return None;
    }
    let mut x = vec![Rational::zero(); n];
    for (i, col) in pivot_cols.iter().enumerate() {
        x[*col] = rows[i][n].clone();
    }
    Some(x)
}

/// A real Lie algebra of derivations with a fixed ordered basis and
/// rational structure constants `[d_a, d_b] = sum_s c^s_ab d_s`.
#[derive(Clone, Debug)]
pub struct LieAlgebra {
    basis: Vec<Derivation>,
    structure: Vec<Vec<Vec<Rational>>>,
}

impl LieAlgebra {
    /// Computes the structure constants; fails if some bracket leaves the
    /// rational span of the basis.
    pub fn new(basis: Vec<Derivation>) -> Result<Self> {
        let n = basis.len();
        let alg = basis.first().map(Derivation::algebra).unwrap_or(AlgebraId::Sphere);
        if let Some(d) = basis.iter().find(|d| d.algebra() != alg) {
            return Err(Error::MixedAlgebra { left: alg, right: d.algebra() });
        }
        let columns: Vec<_> = basis.iter().map(Derivation::rational_coordinates).collect();
        let mut structure = vec![vec![vec![Rational::zero(); n]; n]; n];
        for a in 0..n {
            for b in (a + 1)..n {
                let br = basis[a].bracket(&basis[b])?;
                let coeffs = if br.is_zero() {
                    vec![Rational::zero(); n]
                } else {
                    solve_rational(&columns, &br.rational_coordinates()).ok_or_else(|| Error::NotClosed {
                        a: basis[a].label().to_string(),
                        b: basis[b].label().to_string(),
                    })?
                };
                structure[b][a] = coeffs.iter().map(|c| -c).collect();
                structure[a][b] = coeffs;
            }
        }
        Ok(Self { basis, structure })
    }

    pub fn algebra(&self) -> AlgebraId {
        self.basis.first().map(Derivation::algebra).unwrap_or(AlgebraId::Sphere)
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Derivation] {
        &self.basis
    }

    pub fn derivation(&self, a: usize) -> &Derivation {
        &self.basis[a]
    }

    /// Coefficients of `[d_a, d_b]` in the basis.
    pub fn bracket_coefficients(&self, a: usize, b: usize) -> &[Rational] {
        &self.structure[a][b]
    }

    pub fn is_abelian(&self) -> bool {
        self.structure.iter().flatten().flatten().all(Zero::is_zero)
    }
}

/// `d1, d2, d3` on the sphere: `d1(Z) = iZ`, `d2(W) = iW`,
/// `d3(Z) = Z|W|^2`, `d3(W) = -W|Z|^2`.
pub fn sphere_basis() -> Vec<Derivation> {
    let alg = AlgebraId::Sphere;
    let i = AlgebraElement::scalar(alg, Scalar::i());
    let z = AlgebraElement::z(alg);
    let w = AlgebraElement::w(alg);
    let zero = AlgebraElement::zero(alg);
    vec![
        Derivation::hermitian_extension("d1", &i * &z, zero.clone()).expect("sphere"),
        Derivation::hermitian_extension("d2", zero, &i * &w).expect("sphere"),
        Derivation::hermitian_extension(
            "d3",
            &z * &AlgebraElement::abs_w2(alg),
            -(&w * &AlgebraElement::abs_z2(alg)),
        )
        .expect("sphere"),
    ]
}

/// `d1, d2` on the torus: `d1(Z) = iZ`, `d2(W) = iW`.
pub fn torus_basis() -> Vec<Derivation> {
    let alg = AlgebraId::Torus;
    let i = AlgebraElement::scalar(alg, Scalar::i());
    let zero = AlgebraElement::zero(alg);
    vec![
        Derivation::hermitian_extension("d1", &i * &AlgebraElement::z(alg), zero.clone()).expect("torus"),
        Derivation::hermitian_extension("d2", zero, &i * &AlgebraElement::w(alg)).expect("torus"),
    ]
}


#[cfg(test)]
mod props {
    use super::*;
    use crate::random;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn leibniz_and_hermiticity(seed in any::<u64>(), torus in any::<bool>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (alg, basis) = if torus { (AlgebraId::Torus, torus_basis()) } else { (AlgebraId::Sphere, sphere_basis()) };
            let (a, b) = (random::element(&mut rng, alg), random::element(&mut rng, alg));
            for d in &basis {
                let lhs = d.apply(&(&a * &b)).unwrap();
                let rhs = &(&d.apply(&a).unwrap() * &b) + &(&a * &d.apply(&b).unwrap());
                prop_assert_eq!(lhs, rhs);
                prop_assert_eq!(d.apply(&a.star()).unwrap(), d.apply(&a).unwrap().star());
            }
        }

        #[test]
        fn derivations_commute_on_elements(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = random::element(&mut rng, AlgebraId::Sphere);
            let basis = sphere_basis();
            for x in &basis {
                for y in &basis {
                    let xy = x.apply(&y.apply(&a).unwrap()).unwrap();
                    let yx = y.apply(&x.apply(&a).unwrap()).unwrap();
                    prop_assert_eq!(xy, yx);
                }
            }
        }
    }
}
