//! Curvature operator, curvature components, their symmetries, and the
//! scalar curvature.

use num_traits::{One, Zero};

use crate::algebra::{AlgebraElement, AlgebraId, StarRing};
use crate::connection::{Connection, LocalModule};
use crate::derivations::{Derivation, LieAlgebra};
use crate::error::{Error, Result};
use crate::localization::LocalizedElement;
use crate::metric_module::{make_pseudo_inverse, AnchorMap, HermitianForm, ModuleElement, PseudoInverse, RealMetricCalculus};
use crate::scalars::Rational;

/// `R(d_p, d_q) U = nabla_p nabla_q U - nabla_q nabla_p U - nabla_{[d_p, d_q]} U`.
pub fn curvature_op(conn: &Connection, p: usize, q: usize, u: &LocalModule) -> LocalModule {
    let pq = conn.nabla(p, &conn.nabla(q, u));
    let qp = conn.nabla(q, &conn.nabla(p, u));
    pq.minus(&qp)
        .and_then(|x| x.minus(&conn.nabla_bracket(p, q, u)))
        .expect("same rank")
}

/// Dense tables of `R(d_p, d_q) E_b` and `R_abpq = h(E_a, R(d_p, d_q) E_b)`.
#[derive(Clone, Debug)]
pub struct CurvatureTable {
    rank: usize,
    algebra: AlgebraId,
    /// `op_values[p][q][b]`.
    op_values: Vec<Vec<Vec<LocalModule>>>,
    /// `components[a][b][p][q]`.
    components: Vec<Vec<Vec<Vec<LocalizedElement>>>>,
}

impl CurvatureTable {
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn algebra(&self) -> AlgebraId {
        self.algebra
    }

    /// `R(d_p, d_q) E_b`.
    pub fn op_value(&self, p: usize, q: usize, b: usize) -> &LocalModule {
        &self.op_values[p][q][b]
    }

    /// `R_abpq`.
    pub fn component(&self, a: usize, b: usize, p: usize, q: usize) -> &LocalizedElement {
        &self.components[a][b][p][q]
    }

    pub fn set_component(&mut self, a: usize, b: usize, p: usize, q: usize, value: LocalizedElement) {
        self.components[a][b][p][q] = value;
    }

    pub fn is_zero(&self) -> bool {
        self.indices4().all(|(a, b, p, q)| self.components[a][b][p][q].is_zero())
            && self.op_values.iter().flatten().flatten().all(ModuleElement::is_zero)
    }

    fn indices4(&self) -> impl Iterator<Item = (usize, usize, usize, usize)> {
        let n = self.rank;
        (0..n).flat_map(move |a| {
            (0..n).flat_map(move |b| (0..n).flat_map(move |p| (0..n).map(move |q| (a, b, p, q))))
        })
    }
}

pub fn components(conn: &Connection, form: &HermitianForm) -> CurvatureTable {
    let n = conn.rank();
    let alg = conn.algebra();
    let basis = |i: usize| -> LocalModule { ModuleElement::basis(alg, n, i) };
    let op_values: Vec<Vec<Vec<LocalModule>>> = (0..n)
        .map(|p| (0..n).map(|q| (0..n).map(|b| curvature_op(conn, p, q, &basis(b))).collect()).collect())
        .collect();
    let components = (0..n)
        .map(|a| {
            (0..n)
                .map(|b| {
                    (0..n)
                        .map(|p| {
                            (0..n)
                                .map(|q| form.h_eval(&basis(a), &op_values[p][q][b]).expect("ranks agree"))
                                .collect()
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    CurvatureTable { rank: n, algebra: alg, op_values, components }
}

pub const FAMILY_TRIVIAL: &str = "antisymmetry in the last pair";
pub const FAMILY_INTERCHANGE: &str = "antisymmetry in the first pair";
pub const FAMILY_PAIRS: &str = "pair interchange";
pub const FAMILY_BIANCHI: &str = "first Bianchi identity";
pub const FAMILY_REALITY: &str = "hermitian components";

/// The four component symmetry families, in this order.
pub const SYMMETRY_FAMILIES: [&str; 4] = [FAMILY_TRIVIAL, FAMILY_INTERCHANGE, FAMILY_PAIRS, FAMILY_BIANCHI];

#[derive(Clone, Debug, PartialEq)]
pub struct FamilyResult {
    pub name: &'static str,
    pub checked: usize,
    pub violations: usize,
    /// The first violation, with its residual.
    pub witness: Option<String>,
}

impl FamilyResult {
    pub fn holds(&self) -> bool {
        self.violations == 0
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SymmetryReport {
    pub families: Vec<FamilyResult>,
}

impl SymmetryReport {
    pub fn all_hold(&self) -> bool {
        self.families.iter().all(FamilyResult::holds)
    }

    pub fn family(&self, name: &str) -> Option<&FamilyResult> {
        self.families.iter().find(|f| f.name == name)
    }

    pub fn first_failure(&self) -> Option<&FamilyResult> {
        self.families.iter().find(|f| !f.holds())
    }
}

fn run_family(
    name: &'static str,
    t: &CurvatureTable,
    residual: impl Fn(usize, usize, usize, usize) -> LocalizedElement,
    label: impl Fn(usize, usize, usize, usize) -> String,
) -> FamilyResult {
    let mut out = FamilyResult { name, checked: 0, violations: 0, witness: None };
    for (a, b, p, q) in t.indices4() {
        out.checked += 1;
        let r = residual(a, b, p, q);
        if !r.is_zero() {
            out.violations += 1;
            if out.witness.is_none() {
                out.witness = Some(format!("{} has residual {r}", label(a + 1, b + 1, p + 1, q + 1)));
            }
        }
    }
    out
}

/// Checks the four component symmetries and the reality of every component
/// over all index tuples, never assuming any of them.
pub fn symmetry_suite(t: &CurvatureTable) -> SymmetryReport {
    let r = |a: usize, b: usize, p: usize, q: usize| &t.components[a][b][p][q];
    let families = vec![
        run_family(FAMILY_TRIVIAL, t, |a, b, p, q| r(a, b, p, q).plus(r(a, b, q, p)), |a, b, p, q| format!("R{a}{b}{p}{q} + R{a}{b}{q}{p}")),
        run_family(FAMILY_INTERCHANGE, t, |a, b, p, q| r(a, b, p, q).plus(r(b, a, p, q)), |a, b, p, q| format!("R{a}{b}{p}{q} + R{b}{a}{p}{q}")),
        run_family(FAMILY_PAIRS, t, |a, b, p, q| r(a, b, p, q).minus(r(p, q, a, b)), |a, b, p, q| format!("R{a}{b}{p}{q} - R{p}{q}{a}{b}")),
        run_family(
            FAMILY_BIANCHI,
            t,
            |a, p, q, s| r(a, p, q, s).plus(r(a, q, s, p)).plus(r(a, s, p, q)),
            |a, p, q, s| format!("R{a}{p}{q}{s} + R{a}{q}{s}{p} + R{a}{s}{p}{q}"),
        ),
        run_family(FAMILY_REALITY, t, |a, b, p, q| r(a, b, p, q).star().minus(r(a, b, p, q)), |a, b, p, q| format!("(R{a}{b}{p}{q})* - R{a}{b}{p}{q}")),
    ];
    SymmetryReport { families }
}

/// `R(d_1, d_2) E_3 + R(d_2, d_3) E_1 + R(d_3, d_1) E_2 = 0` for all triples.
pub fn operator_bianchi(t: &CurvatureTable) -> bool {
    let n = t.rank;
    (0..n).all(|x| {
        (0..n).all(|y| {
            (0..n).all(|z| {
                t.op_value(x, y, z)
                    .plus(t.op_value(y, z, x))
                    .and_then(|s| s.plus(t.op_value(z, x, y)))
                    .map(|s| s.is_zero())
                    .unwrap_or(false)
            })
        })
    })
}

/// The solution `S` of `hhat^ab R_apbq hhat^pq = H S H`.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalarCurvature {
    pub s: AlgebraElement,
    /// `T = hhat^ab R_apbq hhat^pq`.
    pub contraction: LocalizedElement,
    pub big_h: AlgebraElement,
}

/// `T = sum hhat^ab R_apbq hhat^pq`.
pub fn contraction(t: &CurvatureTable, p: &PseudoInverse) -> LocalizedElement {
    let n = t.rank;
    let mut total = LocalizedElement::zero_of(t.algebra);
    for (a, b, x, y) in t.indices4() {
        let r = &t.components[a][x][b][y];
        let (left, right) = (p.hhat(a, b), p.hhat(x, y));
        if r.is_zero() || left.is_zero() || right.is_zero() {
            continue;
        }
        let term = LocalizedElement::from_base(left.clone()).times(r).times(&LocalizedElement::from_base(right.clone()));
        total = total.plus(&term);
    }
    debug_assert_eq!(n, p.rank());
    total
}

pub fn scalar_curvature(t: &CurvatureTable, p: &PseudoInverse) -> Result<ScalarCurvature> {
    if p.rank() != t.rank {
        return Err(Error::RankMismatch { expected: t.rank, actual: p.rank() });
    }
    let big_t = contraction(t, p);
    let inv = p.certificate().inverse();
    let s_local = inv.times(&big_t).times(&inv);
    let s = s_local.lift_to_base()?;
    if !s.is_hermitian() {
        return Err(Error::NotLiftable(format!("S = {s} is not hermitian")));
    }
    let h = p.big_h();
    let back = LocalizedElement::from_base(&(h * &s) * h);
    if back != big_t {
        return Err(Error::NotLiftable(format!("H S H != T for S = {s}")));
    }
    Ok(ScalarCurvature { s, contraction: big_t, big_h: h.clone() })
}

fn invert_rational(m: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    let n = m.len();
    let mut aug: Vec<Vec<Rational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| row.iter().cloned().chain((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() })).collect())
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !aug[r][col].is_zero())?;
        aug.swap(col, pivot);
        let inv = aug[col][col].recip();
        for x in aug[col].iter_mut() {
            *x *= &inv;
        }
        for r in 0..n {
            if r != col && !aug[r][col].is_zero() {
                let f = aug[r][col].clone();
                let pivot_row = aug[col].clone();
                for (x, y) in aug[r].iter_mut().zip(pivot_row) {
                    *x -= &f * y;
                }
            }
        }
    }
    Some(aug.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Re-expresses a calculus in the derivation basis `d'_a = sum_b A_ab d_b`
/// with module basis `E'_a = phi(d'_a)`, so `h' = A h A^T` and
/// `hhat' = A^{-T} hhat A^{-1}` with the same `H`.
pub fn change_of_basis(c: &RealMetricCalculus, p: &PseudoInverse, a: &[Vec<i64>]) -> Result<(RealMetricCalculus, PseudoInverse)> {
    let n = c.rank();
    if a.len() != n || a.iter().any(|r| r.len() != n) {
        return Err(Error::RankMismatch { expected: n, actual: a.len() });
    }
    let alg = c.algebra();
    let am: Vec<Vec<Rational>> = a.iter().map(|r| r.iter().map(|&x| Rational::from_integer(x.into())).collect()).collect();
    let inv = invert_rational(&am).ok_or_else(|| Error::InvalidRepresentation("basis change is singular".into()))?;

    let derivations = (0..n)
        .map(|i| {
            let terms: Vec<(Rational, &Derivation)> = (0..n).map(|j| (am[i][j].clone(), c.derivation(j))).collect();
            Derivation::linear_combination(alg, format!("d{}'", i + 1), &terms)
        })
        .collect::<Result<Vec<_>>>()?;

    let combine = |left: &dyn Fn(usize, usize) -> Rational, mid: &dyn Fn(usize, usize) -> AlgebraElement, right: &dyn Fn(usize, usize) -> Rational| {
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let mut acc = AlgebraElement::zero(alg);
                        for k in 0..n {
                            for l in 0..n {
                                let coeff = left(i, k) * right(l, j);
                                if !coeff.is_zero() {
                                    acc = &acc + &mid(k, l).scale_rational(&coeff);
                                }
                            }
                        }
                        acc
                    })
                    .collect::<Vec<_>>()
            })
            .collect::<Vec<_>>()
    };
    let h_new = combine(&|i, k| am[i][k].clone(), &|k, l| c.h(k, l).clone(), &|l, j| am[j][l].clone());
    let hhat_new = combine(&|i, k| inv[k][i].clone(), &|k, l| p.hhat(k, l).clone(), &|l, j| inv[l][j].clone());

    let form = HermitianForm::new(h_new)?;
    let calc = RealMetricCalculus::new(form.clone(), LieAlgebra::new(derivations)?, AnchorMap::canonical(alg, n))?;
    let pinv = make_pseudo_inverse(&form, hhat_new, p.big_h().clone())?;
    Ok((calc, pinv))
}
