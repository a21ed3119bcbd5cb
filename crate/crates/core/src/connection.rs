//! Koszul right-hand sides, the connection solver, and the axiom verifiers.

use std::fmt;

use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::{half, AlgebraElement, AlgebraId, StarRing};
use crate::derivations::LieAlgebra;
use crate::error::{Error, Result};
use crate::localization::LocalizedElement;
use crate::metric_module::{HermitianForm, ModuleElement, PseudoInverse, RealMetricCalculus};
use crate::random;

/// Module elements with coordinates in the localization.
pub type LocalModule = ModuleElement<LocalizedElement>;

/// Outcome of a verifier: `holds`, plus a witness when it does not.
#[derive(Clone, Debug, PartialEq)]
pub struct Verdict {
    pub holds: bool,
    pub witness: Option<String>,
}

impl Verdict {
    pub fn pass() -> Self {
        Self { holds: true, witness: None }
    }

    pub fn fail(witness: impl Into<String>) -> Self {
        Self { holds: false, witness: Some(witness.into()) }
    }

    fn from_first(witness: Option<String>) -> Self {
        witness.map_or_else(Self::pass, Self::fail)
    }
}

/// `K_abc`, the right-hand side of `2 h(nabla_a E_b, E_c) = K_abc`:
///
/// `d_a h_bc + d_b h_ac - d_c h_ab - h(E_a, phi[d_b, d_c]) + h(E_b, phi[d_c, d_a]) + h(E_c, phi[d_a, d_b])`.
pub fn koszul_rhs(c: &RealMetricCalculus, a: usize, b: usize, k: usize) -> AlgebraElement {
    let form = c.form();
    let alg = c.algebra();
    let n = c.rank();
    let d = |i: usize, x: &AlgebraElement| c.derivation(i).apply(x).expect("same algebra");
    let e = |i: usize| ModuleElement::<AlgebraElement>::basis(alg, n, i);
    let hb = |u: &ModuleElement, v: &ModuleElement| form.h_eval(u, v).expect("ranks agree");

    let mut out = &(&d(a, form.entry(b, k)) + &d(b, form.entry(a, k))) - &d(k, form.entry(a, b));
    out = &out - &hb(&e(a), &c.anchor_of_bracket(b, k));
    out = &out + &hb(&e(b), &c.anchor_of_bracket(k, a));
    &out + &hb(&e(k), &c.anchor_of_bracket(a, b))
}

/// The flags the solver establishes by computation.
#[derive(Clone, Debug, PartialEq)]
pub struct ConnectionChecks {
    pub metric: Verdict,
    pub torsion_free: Verdict,
    pub first_order_hermitian: Verdict,
}

/// `nabla_{d_a} E_b = E_c Gamma^c_ab`, extended by the Leibniz rule.
#[derive(Clone, Debug)]
pub struct Connection {
    lie: LieAlgebra,
    /// `gamma[c][a][b]`.
    gamma: Vec<Vec<Vec<LocalizedElement>>>,
    checks: Option<ConnectionChecks>,
}

impl Connection {
    /// Wraps an explicit Christoffel table; nothing is verified.
    pub fn from_table(lie: LieAlgebra, gamma: Vec<Vec<Vec<LocalizedElement>>>) -> Result<Self> {
        let n = lie.dim();
        if gamma.len() != n || gamma.iter().flatten().any(|row| row.len() != n) || gamma.iter().any(|m| m.len() != n) {
            return Err(Error::RankMismatch { expected: n, actual: gamma.len() });
        }
        Ok(Self { lie, gamma, checks: None })
    }

    pub fn zero(lie: LieAlgebra) -> Self {
        let n = lie.dim();
        let zero = LocalizedElement::zero_of(lie.algebra());
        Self { gamma: vec![vec![vec![zero; n]; n]; n], lie, checks: None }
    }

    pub fn algebra(&self) -> AlgebraId {
        self.lie.algebra()
    }

    pub fn rank(&self) -> usize {
        self.lie.dim()
    }

    pub fn lie(&self) -> &LieAlgebra {
        &self.lie
    }

    /// `Gamma^c_ab`.
    pub fn gamma(&self, c: usize, a: usize, b: usize) -> &LocalizedElement {
        &self.gamma[c][a][b]
    }

    /// Overwrites one symbol and drops any stored verification.
    pub fn set_gamma(&mut self, c: usize, a: usize, b: usize, value: LocalizedElement) {
        self.gamma[c][a][b] = value;
        self.checks = None;
    }

    pub fn checks(&self) -> Option<&ConnectionChecks> {
        self.checks.as_ref()
    }

    fn indices(&self) -> impl Iterator<Item = (usize, usize, usize)> {
        let n = self.rank();
        (0..n).flat_map(move |c| (0..n).flat_map(move |a| (0..n).map(move |b| (c, a, b))))
    }

    /// True when every symbol lies in the base algebra.
    pub fn base_flag(&self) -> bool {
        self.indices().all(|(c, a, b)| self.gamma[c][a][b].lift_to_base().is_ok())
    }

    /// Base-algebra symbols, when `base_flag` holds.
    pub fn lifted_gamma(&self, c: usize, a: usize, b: usize) -> Result<AlgebraElement> {
        self.gamma[c][a][b].lift_to_base()
    }

    /// True when every symbol is central.
    pub fn is_central(&self) -> bool {
        self.indices().all(|(c, a, b)| {
            let g = &self.gamma[c][a][b];
            g.numerator().is_central()
        })
    }

    /// `nabla_{d_a} E_b`.
    pub fn nabla_basis(&self, a: usize, b: usize) -> LocalModule {
        ModuleElement::new((0..self.rank()).map(|c| self.gamma[c][a][b].clone()).collect())
    }

    /// `nabla_{d_a} U = E_c (Gamma^c_ab U^b + d_a(U^c))`.
    pub fn nabla(&self, a: usize, u: &LocalModule) -> LocalModule {
        let n = self.rank();
        let d = self.lie.derivation(a);
        let coords = (0..n)
            .map(|c| {
                let mut acc = u.coord(c).derive(d);
                for b in 0..n {
                    let (g, ub) = (&self.gamma[c][a][b], u.coord(b));
                    if !g.is_zero() && !ub.is_zero() {
                        acc = acc.plus(&g.times(ub));
                    }
                }
                acc
            })
            .collect();
        ModuleElement::new(coords)
    }

    /// `nabla_{[d_p, d_q]} U`, through the structure constants.
    pub fn nabla_bracket(&self, p: usize, q: usize, u: &LocalModule) -> LocalModule {
        let alg = self.algebra();
        let mut out = ModuleElement::zero(alg, self.rank());
        for (s, coeff) in self.lie.bracket_coefficients(p, q).iter().enumerate() {
            if coeff.is_zero() {
                continue;
            }
            let scale = LocalizedElement::from_base(AlgebraElement::one(alg).scale_rational(coeff));
            out = out.plus(&self.nabla(s, u).right_mul(&scale)).expect("same rank");
        }
        out
    }
}

impl fmt::Display for Connection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for a in 0..self.rank() {
            for b in 0..self.rank() {
                writeln!(f, "nabla_{} E{} = {}", a + 1, b + 1, self.nabla_basis(a, b))?;
            }
        }
        Ok(())
    }
}

fn basis(alg: AlgebraId, n: usize, a: usize) -> LocalModule {
    ModuleElement::basis(alg, n, a)
}

fn lift_form(form: &HermitianForm, u: &LocalModule, v: &LocalModule) -> LocalizedElement {
    form.h_eval(u, v).expect("ranks agree")
}

/// Solves `2 h(nabla_a E_b, E_c) = K_abc` through the pseudo-inverse:
/// `Gamma^s_ab = 1/2 H^{-1} sum_c hhat^{sc} (K_abc)*`, then checks the
/// equation exactly together with metric compatibility, torsion-freeness and
/// hermiticity of `h(nabla_a E_b, E_c)`.
pub fn solve_connection(c: &RealMetricCalculus, p: &PseudoInverse) -> Result<Connection> {
    let n = c.rank();
    if p.rank() != n {
        return Err(Error::RankMismatch { expected: n, actual: p.rank() });
    }
    let alg = c.algebra();
    let h_inv = p.certificate().inverse();
    let mut gamma = vec![vec![vec![LocalizedElement::zero_of(alg); n]; n]; n];
    let mut rhs = vec![vec![vec![AlgebraElement::zero(alg); n]; n]; n];
    for a in 0..n {
        for b in 0..n {
            for k in 0..n {
                rhs[a][b][k] = koszul_rhs(c, a, b, k);
            }
            for s in 0..n {
                let sum = (0..n).fold(AlgebraElement::zero(alg), |acc, k| &acc + &(p.hhat(s, k) * &rhs[a][b][k].star()));
                gamma[s][a][b] = h_inv.times(&LocalizedElement::from_base(sum.scale(&half())));
            }
        }
    }
    let mut conn = Connection::from_table(c.lie().clone(), gamma)?;

    for a in 0..n {
        for b in 0..n {
            let u = conn.nabla_basis(a, b);
            for k in 0..n {
                let lhs = lift_form(c.form(), &u, &basis(alg, n, k));
                let lhs = lhs.plus(&lhs);
                let expected = LocalizedElement::from_base(rhs[a][b][k].clone());
                if lhs != expected {
                    return Err(Error::KoszulUnsatisfied {
                        a: a + 1,
                        b: b + 1,
                        c: k + 1,
                        residual: lhs.minus(&expected).to_string(),
                    });
                }
            }
        }
    }

    conn.checks = Some(ConnectionChecks {
        metric: verify_metric(c, &conn),
        torsion_free: verify_torsion_free(c, &conn),
        first_order_hermitian: verify_first_order_hermitian(c, &conn),
    });
    Ok(conn)
}

/// Number of random module pairs tried by [`verify_metric`].
pub const METRIC_SAMPLES: usize = 6;
const METRIC_SEED: u64 = 0x6d65_7472_6963;

/// `d_a h(U, V) = h(nabla_a U, V) + h(U, nabla_a V)` on all basis pairs and
/// on random module elements.
pub fn verify_metric(c: &RealMetricCalculus, conn: &Connection) -> Verdict {
    verify_metric_with(c, conn, METRIC_SAMPLES, METRIC_SEED)
}

pub fn verify_metric_with(c: &RealMetricCalculus, conn: &Connection, samples: usize, seed: u64) -> Verdict {
    let n = c.rank();
    let alg = c.algebra();
    let check = |a: usize, u: &LocalModule, v: &LocalModule| -> bool {
        let lhs = lift_form(c.form(), u, v).derive(c.derivation(a));
        let rhs = lift_form(c.form(), &conn.nabla(a, u), v).plus(&lift_form(c.form(), u, &conn.nabla(a, v)));
        lhs == rhs
    };
    for a in 0..n {
        for i in 0..n {
            for j in 0..n {
                if !check(a, &basis(alg, n, i), &basis(alg, n, j)) {
                    return Verdict::fail(format!("d{0} h(E{1}, E{2}) != h(nabla_{0} E{1}, E{2}) + h(E{1}, nabla_{0} E{2})", a + 1, i + 1, j + 1));
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for s in 0..samples {
        let u = random::module_element(&mut rng, alg, n).localized();
        let v = random::module_element(&mut rng, alg, n).localized();
        let a = s % n;
        if !check(a, &u, &v) {
            return Verdict::fail(format!("metric identity fails for d{} on random sample {s}", a + 1));
        }
    }
    Verdict::pass()
}

/// `nabla_a E_b - nabla_b E_a - phi([d_a, d_b]) = 0` for all basis pairs.
pub fn verify_torsion_free(c: &RealMetricCalculus, conn: &Connection) -> Verdict {
    let n = c.rank();
    let mut witness = None;
    'outer: for a in 0..n {
        for b in 0..n {
            let bracket: LocalModule = c.anchor_of_bracket(a, b).localized();
            let t = conn
                .nabla_basis(a, b)
                .minus(&conn.nabla_basis(b, a))
                .and_then(|x| x.minus(&bracket))
                .expect("same rank");
            if !t.is_zero() {
                witness = Some(format!("T(d{}, d{}) = {t}", a + 1, b + 1));
                break 'outer;
            }
        }
    }
    Verdict::from_first(witness)
}

/// `h(nabla_a E_b, E_c)` hermitian for all triples.
pub fn verify_first_order_hermitian(c: &RealMetricCalculus, conn: &Connection) -> Verdict {
    let n = c.rank();
    let alg = c.algebra();
    for a in 0..n {
        for b in 0..n {
            let u = conn.nabla_basis(a, b);
            for k in 0..n {
                let v = lift_form(c.form(), &u, &basis(alg, n, k));
                if !v.is_hermitian() {
                    return Verdict::fail(format!("h(nabla_{} E{}, E{}) = {v} is not hermitian", a + 1, b + 1, k + 1));
                }
            }
        }
    }
    Verdict::pass()
}

/// Both forms of the second-order reality condition.
#[derive(Clone, Debug, PartialEq)]
pub struct RealityReport {
    /// `h(nabla_a nabla_b E_p, E_q)` hermitian for all quadruples.
    pub second_derivative_form: Verdict,
    /// `h(nabla_a E_p, nabla_b E_q)` hermitian for all quadruples.
    pub paired_form: Verdict,
}

impl RealityReport {
    pub fn holds(&self) -> bool {
        self.second_derivative_form.holds && self.paired_form.holds
    }

    pub fn forms_agree(&self) -> bool {
        self.second_derivative_form.holds == self.paired_form.holds
    }
}

pub fn verify_real_calculus(c: &RealMetricCalculus, conn: &Connection) -> RealityReport {
    let n = c.rank();
    let alg = c.algebra();
    let first: Vec<Vec<LocalModule>> = (0..n).map(|a| (0..n).map(|p| conn.nabla_basis(a, p)).collect()).collect();
    let mut second_form = None;
    let mut paired = None;
    for a in 0..n {
        for b in 0..n {
            for p in 0..n {
                let second = conn.nabla(a, &first[b][p]);
                for q in 0..n {
                    if second_form.is_none() {
                        let v = lift_form(c.form(), &second, &basis(alg, n, q));
                        if !v.is_hermitian() {
                            second_form = Some(format!("h(nabla_{} nabla_{} E{}, E{}) = {v} is not hermitian", a + 1, b + 1, p + 1, q + 1));
                        }
                    }
                    if paired.is_none() {
                        let v = lift_form(c.form(), &first[a][p], &first[b][q]);
                        if !v.is_hermitian() {
                            paired = Some(format!("h(nabla_{} E{}, nabla_{} E{}) = {v} is not hermitian", a + 1, p + 1, b + 1, q + 1));
                        }
                    }
                }
            }
        }
    }
    RealityReport { second_derivative_form: Verdict::from_first(second_form), paired_form: Verdict::from_first(paired) }
}

/// The two solved tables agree entry by entry (as fractions).
pub fn same_connection(x: &Connection, y: &Connection) -> bool {
    x.rank() == y.rank() && x.indices().all(|(c, a, b)| x.gamma[c][a][b] == y.gamma[c][a][b])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models;

    const S: AlgebraId = AlgebraId::Sphere;

    fn loc(a: AlgebraElement) -> LocalizedElement {
        LocalizedElement::from_base(a)
    }

    fn sphere() -> (RealMetricCalculus, Connection) {
        let c = models::sphere_calculus().unwrap();
        let p = models::sphere_pseudo_inverse(&c).unwrap();
        let conn = solve_connection(&c, &p).unwrap();
        (c, conn)
    }

    #[test]
    fn koszul_examples() {
        let c = models::sphere_calculus().unwrap();
        let h = &AlgebraElement::abs_z2(S) * &AlgebraElement::abs_w2(S);
        assert_eq!(koszul_rhs(&c, 0, 0, 2), -&(&h + &h));
        assert!(koszul_rhs(&c, 0, 1, 2).is_zero());
        for a in 0..3 {
            for b in 0..3 {
                for k in 0..3 {
                    assert!(koszul_rhs(&c, a, b, k).is_hermitian());
                }
            }
        }
        let t = models::torus_calculus().unwrap();
        for a in 0..2 {
            for b in 0..2 {
                for k in 0..2 {
                    assert!(koszul_rhs(&t, a, b, k).is_zero());
                }
            }
        }
    }

    #[test]
    fn sphere_table() {
        let (_, conn) = sphere();
        let z2 = AlgebraElement::abs_z2(S);
        let w2 = AlgebraElement::abs_w2(S);
        assert!(conn.base_flag());
        assert!(conn.is_central());
        assert_eq!(*conn.gamma(2, 0, 0), loc(AlgebraElement::from_i64(S, -1)));
        assert_eq!(*conn.gamma(0, 0, 2), loc(w2.clone()));
        assert_eq!(*conn.gamma(2, 2, 2), loc(&w2 - &z2));
        for c in 0..3 {
            assert!(conn.gamma(c, 0, 1).is_zero());
        }
        let checks = conn.checks().unwrap();
        assert!(checks.metric.holds && checks.torsion_free.holds && checks.first_order_hermitian.holds);
    }

    #[test]
    fn faults_detected() {
        let (c, conn) = sphere();
        let mut flipped = conn.clone();
        flipped.set_gamma(2, 0, 0, loc(AlgebraElement::one(S)));
        assert!(!verify_metric(&c, &flipped).holds);

        let mut skewed = conn.clone();
        let g = skewed.gamma(0, 1, 2).plus(&loc(AlgebraElement::one(S)));
        skewed.set_gamma(0, 1, 2, g);
        let v = verify_torsion_free(&c, &skewed);
        assert!(!v.holds);
        assert!(v.witness.unwrap().starts_with("T(d2, d3) = E1"));

        let mut complex = conn.clone();
        let g = complex.gamma(2, 0, 0).plus(&loc(AlgebraElement::scalar(S, crate::Scalar::i())));
        complex.set_gamma(2, 0, 0, g);
        let r = verify_real_calculus(&c, &complex);
        assert!(!r.holds());
    }

    #[test]
    fn reality_forms_agree() {
        let (c, conn) = sphere();
        let r = verify_real_calculus(&c, &conn);
        assert!(r.holds() && r.forms_agree());
    }

    #[test]
    fn torus_is_flat() {
        let c = models::torus_calculus().unwrap();
        let p = models::torus_pseudo_inverse(&c).unwrap();
        let conn = solve_connection(&c, &p).unwrap();
        assert!(same_connection(&conn, &Connection::zero(c.lie().clone())));
        assert!(verify_real_calculus(&c, &conn).holds());
    }

    #[test]
    fn unique_under_second_pseudo_inverse() {
        let c = models::sphere_calculus().unwrap();
        let p = models::sphere_pseudo_inverse(&c).unwrap();
        let g = models::scaled_pseudo_inverse(&c, &p).unwrap();
        assert!(same_connection(&solve_connection(&c, &p).unwrap(), &solve_connection(&c, &g).unwrap()));
    }

    #[test]
    fn modified_metric_still_solvable() {
        let s = S;
        let form = HermitianForm::diagonal(vec![AlgebraElement::abs_z2(s), AlgebraElement::abs_w2(s), AlgebraElement::one(s)]).unwrap();
        let c = RealMetricCalculus::new(
            form.clone(),
            LieAlgebra::new(crate::derivations::sphere_basis()).unwrap(),
            crate::metric_module::AnchorMap::canonical(s, 3),
        )
        .unwrap();
        let z2 = AlgebraElement::abs_z2(s);
        let w2 = AlgebraElement::abs_w2(s);
        let hhat = vec![
            vec![w2.clone(), AlgebraElement::zero(s), AlgebraElement::zero(s)],
            vec![AlgebraElement::zero(s), z2.clone(), AlgebraElement::zero(s)],
            vec![AlgebraElement::zero(s), AlgebraElement::zero(s), &z2 * &w2],
        ];
        let p = crate::metric_module::make_pseudo_inverse(&form, hhat, &z2 * &w2).unwrap();
        let conn = solve_connection(&c, &p).unwrap();
        let checks = conn.checks().unwrap();
        assert!(checks.metric.holds && checks.torsion_free.holds);
    }

    #[test]
    fn norm_of_basis_derivative() {
        // d(h(E, E)) = 2 h(E, nabla_d E)
        let (c, conn) = sphere();
        for a in 0..3 {
            for b in 0..3 {
                let e = basis(S, 3, b);
                let lhs = lift_form(c.form(), &e, &e).derive(c.derivation(a));
                let r = lift_form(c.form(), &e, &conn.nabla_basis(a, b));
                assert_eq!(lhs, r.plus(&r));
            }
        }
    }
}
