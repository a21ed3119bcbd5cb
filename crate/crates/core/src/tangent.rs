//! The ambient module `(S^3)^4`, the projection onto the tangent module, the
//! frames `{E_a}` and `{F_a}`, and the projected connection.

use crate::algebra::{AlgebraElement, AlgebraId, StarRing};
use crate::connection::{Connection, Verdict};
use crate::derivations::Derivation;
use crate::error::{Error, Result};
use crate::localization::{certify_regular, LocalizedElement};
use crate::metric_module::ModuleElement;
use crate::scalars::Scalar;

const S: AlgebraId = AlgebraId::Sphere;

/// `U = e_i U^i` in the free module of rank four.
pub type AmbientElement = ModuleElement<AlgebraElement>;

fn x(i: usize) -> AlgebraElement {
    AlgebraElement::x(S, i)
}

fn q() -> AlgebraElement {
    AlgebraElement::scalar(S, Scalar::q_pow(1))
}

fn ambient(c: [AlgebraElement; 4]) -> AmbientElement {
    ModuleElement::new(c.to_vec())
}

/// The canonical basis vector `e_i`, `i` in `1..=4`.
pub fn ambient_basis(i: usize) -> AmbientElement {
    ModuleElement::basis(S, 4, i - 1)
}

/// The normal vector `(X^1, X^2, X^3, X^4)`.
pub fn normal() -> AmbientElement {
    ambient([x(1), x(2), x(3), x(4)])
}

/// `E_1 = (-X^2, X^1, 0, 0)`, `E_2 = (0, 0, -X^4, X^3)`,
/// `E_3 = (X^1|W|^2, X^2|W|^2, -X^3|Z|^2, -X^4|Z|^2)`.
pub fn e_frame() -> Vec<AmbientElement> {
    let zero = AlgebraElement::zero(S);
    let z2 = AlgebraElement::abs_z2(S);
    let w2 = AlgebraElement::abs_w2(S);
    vec![
        ambient([-x(2), x(1), zero.clone(), zero.clone()]),
        ambient([zero.clone(), zero, -x(4), x(3)]),
        ambient([&x(1) * &w2, &x(2) * &w2, -&(&x(3) * &z2), -&(&x(4) * &z2)]),
    ]
}

/// `F_1 = (-X^4, X^3, -q X^2, q X^1)`, `F_2 = (-X^3, -X^4, q X^1, q X^2)`,
/// `F_3 = (-X^2, X^1, X^4, -X^3)`.
pub fn f_frame() -> Vec<AmbientElement> {
    let q = q();
    vec![
        ambient([-x(4), x(3), -&(&q * &x(2)), &q * &x(1)]),
        ambient([-x(3), -x(4), &q * &x(1), &q * &x(2)]),
        ambient([-x(2), x(1), x(4), -x(3)]),
    ]
}

/// `sum_i X^i U^i`.
fn normal_component<C: StarRing>(u: &ModuleElement<C>) -> C {
    (0..4).fold(C::zero_of(S), |acc, i| acc.plus(&C::from_base(&x(i + 1)).times(u.coord(i))))
}

/// `P(U)^i = U^i - X^i sum_j X^j U^j`.
pub fn project<C: StarRing>(u: &ModuleElement<C>) -> ModuleElement<C> {
    let n = normal_component(u);
    ModuleElement::new((0..4).map(|i| u.coord(i).minus(&C::from_base(&x(i + 1)).times(&n))).collect())
}

/// `X^i F^i = 0` for every member.
pub fn verify_frame_tangency(frame: &[AmbientElement]) -> Verdict {
    frame
        .iter()
        .enumerate()
        .find(|(_, f)| !normal_component(*f).is_zero())
        .map_or_else(Verdict::pass, |(a, f)| Verdict::fail(format!("member {} has normal component {}", a + 1, normal_component(f))))
}

/// `(name, lhs, rhs)` for the quadratic identities among the `X^i`.
pub fn lemma_x_relations() -> Vec<(&'static str, AlgebraElement, AlgebraElement)> {
    let p = |i: usize, j: usize| &x(i) * &x(j);
    let qbar = AlgebraElement::scalar(S, Scalar::q_pow(-1));
    let q = q();
    vec![
        ("X2X4 + X1X3 = q(X4X2 + X3X1)", &p(2, 4) + &p(1, 3), &q * &(&p(4, 2) + &p(3, 1))),
        ("X2X4 - X1X3 = qbar(X4X2 - X3X1)", &p(2, 4) - &p(1, 3), &qbar * &(&p(4, 2) - &p(3, 1))),
        ("X2X3 + X1X4 = qbar(X3X2 + X4X1)", &p(2, 3) + &p(1, 4), &qbar * &(&p(3, 2) + &p(4, 1))),
        ("X2X3 - X1X4 = q(X3X2 - X4X1)", &p(2, 3) - &p(1, 4), &q * &(&p(3, 2) - &p(4, 1))),
        ("[X1, X2] = 0", p(1, 2), p(2, 1)),
        ("[X3, X4] = 0", p(3, 4), p(4, 3)),
    ]
}

pub fn lemma_x_identities() -> Vec<(&'static str, bool)> {
    lemma_x_relations().into_iter().map(|(name, l, r)| (name, l == r)).collect()
}

/// `h_ab = sum_i (F_a^i)* F_b^i`.
pub fn induced_metric(frame: &[AmbientElement]) -> Vec<Vec<AlgebraElement>> {
    frame
        .iter()
        .map(|u| frame.iter().map(|v| ambient_inner(u, v)).collect())
        .collect()
}

fn ambient_inner<C: StarRing>(u: &ModuleElement<C>, v: &ModuleElement<C>) -> C {
    (0..u.rank()).fold(C::zero_of(S), |acc, i| acc.plus(&u.coord(i).star().times(v.coord(i))))
}

/// `sum_a frame_a c^a`.
pub fn recombine<C: StarRing>(frame: &[AmbientElement], coords: &[C]) -> ModuleElement<C> {
    frame.iter().zip(coords).fold(ModuleElement::zero(S, 4), |acc, (f, c)| {
        acc.plus(&f.localized::<C>().right_mul(c)).expect("rank four")
    })
}

/// Coordinates `c^a` with `U = sum_a frame_a c^a`, found by solving the Gram
/// system `<frame_b, frame_a> c^a = <frame_b, U>` with certified central
/// pivots and then checked by recombination.
pub fn expand_in_frame(u: &AmbientElement, frame: &[AmbientElement]) -> Result<Vec<LocalizedElement>> {
    let u_loc: ModuleElement<LocalizedElement> = u.localized();
    expand_localized(&u_loc, frame)
}

pub fn expand_localized(u: &ModuleElement<LocalizedElement>, frame: &[AmbientElement]) -> Result<Vec<LocalizedElement>> {
    if u.rank() != 4 {
        return Err(Error::RankMismatch { expected: 4, actual: u.rank() });
    }
    if project(u) != *u {
        return Err(Error::NotInTangentModule);
    }
    let n = frame.len();
    let loc = |a: &AlgebraElement| LocalizedElement::from_base(a.clone());
    let gram = induced_metric(frame);
    let mut rows: Vec<Vec<LocalizedElement>> = (0..n)
        .map(|b| {
            let mut row: Vec<LocalizedElement> = gram[b].iter().map(loc).collect();
            row.push(ambient_inner(&frame[b].localized(), u));
            row
        })
        .collect();

    for col in 0..n {
        let pivot_row = (col..n)
            .find(|&r| {
                let e = &rows[r][col];
                !e.is_zero() && certify_regular(e.numerator()).is_some()
            })
            .ok_or_else(|| Error::NotExpandable(format!("no regular pivot in column {}", col + 1)))?;
        rows.swap(col, pivot_row);
        let pivot = &rows[col][col];
        let (m, k) = pivot.denominator_exponents();
        let cert = certify_regular(pivot.numerator()).expect("checked above");
        // pivot^{-1} = D / num for pivot = num / D
        let inv = cert.inverse().times(&LocalizedElement::from_base(crate::localization::central_power(m, k)));
        let normalized: Vec<LocalizedElement> = rows[col].iter().map(|e| inv.times(e)).collect();
        rows[col] = normalized.clone();
        for r in 0..n {
            if r == col || rows[r][col].is_zero() {
                continue;
            }
            let factor = rows[r][col].clone();
            rows[r] = rows[r].iter().zip(&normalized).map(|(e, p)| e.minus(&factor.times(p))).collect();
        }
    }
    let coords: Vec<LocalizedElement> = rows.into_iter().map(|r| r[n].clone()).collect();
    if recombine(frame, &coords) != *u {
        return Err(Error::NotExpandable("recombination does not reproduce the input".into()));
    }
    Ok(coords)
}

/// `nabla-hat_d U = P(e_i d(U^i))`.
pub fn canonical_connection(d: &Derivation, u: &AmbientElement) -> AmbientElement {
    project(&u.map(|c| d.apply(c).expect("sphere derivation")))
}

/// Compares `nabla-hat_{d_a} E_b`, expanded in the E-frame, with the solved
/// `nabla_{d_a} E_b` for all pairs.
pub fn compare_with_connection(conn: &Connection) -> Verdict {
    let frame = e_frame();
    let n = conn.rank();
    if n != frame.len() || conn.algebra() != S {
        return Verdict::fail("connection is not on the sphere frame");
    }
    for a in 0..n {
        for b in 0..n {
            let hat = canonical_connection(conn.lie().derivation(a), &frame[b]);
            match expand_in_frame(&hat, &frame) {
                Ok(coords) if coords == conn.nabla_basis(a, b).coords() => {}
                Ok(coords) => {
                    let got = ModuleElement::new(coords);
                    return Verdict::fail(format!("projected nabla_{} E{} = {got}, solved {}", a + 1, b + 1, conn.nabla_basis(a, b)));
                }
                Err(e) => return Verdict::fail(format!("projected nabla_{} E{}: {e}", a + 1, b + 1)),
            }
        }
    }
    Verdict::pass()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::localization::LocalizedElement as L;
    use crate::models;
    use crate::random;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn loc(a: AlgebraElement) -> L {
        L::from_base(a)
    }

    #[test]
    fn projection() {
        for f in e_frame().iter().chain(&f_frame()) {
            assert_eq!(project(f), *f);
        }
        assert!(project(&normal()).is_zero());
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let u = random::module_element(&mut rng, S, 4);
            let p = project(&u);
            assert_eq!(project(&p), p);
        }
    }

    #[test]
    fn tangency() {
        assert!(verify_frame_tangency(&e_frame()).holds);
        assert!(verify_frame_tangency(&f_frame()).holds);
        let bad = vec![ambient([x(1), AlgebraElement::zero(S), AlgebraElement::zero(S), AlgebraElement::zero(S)])];
        assert!(!verify_frame_tangency(&bad).holds);
    }

    #[test]
    fn x_lemma() {
        for (name, ok) in lemma_x_identities() {
            assert!(ok, "{name}");
        }
    }

    #[test]
    fn induced_metric_matches() {
        let c = models::sphere_calculus().unwrap();
        assert_eq!(induced_metric(&e_frame()), c.form().matrix());
    }

    #[test]
    fn f_frame_expansions() {
        let f = f_frame();
        let expected = [
            [-x(4), -x(3), -x(2)],
            [x(3), -x(4), x(1)],
            [
                -&(AlgebraElement::scalar(S, Scalar::q_pow(-1)) * x(2)),
                &AlgebraElement::scalar(S, Scalar::q_pow(-1)) * &x(1),
                x(4),
            ],
            [
                &AlgebraElement::scalar(S, Scalar::q_pow(-1)) * &x(1),
                &AlgebraElement::scalar(S, Scalar::q_pow(-1)) * &x(2),
                -x(3),
            ],
        ];
        for (i, exp) in expected.into_iter().enumerate() {
            let coords = expand_in_frame(&project(&ambient_basis(i + 1)), &f).unwrap();
            let exp: Vec<L> = exp.into_iter().map(loc).collect();
            assert_eq!(coords, exp, "P(e{})", i + 1);
        }
    }

    #[test]
    fn frame_change() {
        let e = e_frame();
        let f = f_frame();
        let one = loc(AlgebraElement::one(S));
        assert_eq!(expand_in_frame(&f[2], &e).unwrap(), vec![one.clone(), one.negated(), L::zero_of(S)]);

        let s = &(&x(1) * &x(3)) + &(&x(2) * &x(4));
        let t = &(&x(2) * &x(3)) - &(&x(1) * &x(4));
        let f1 = vec![L::new(s.clone(), 1, 0).unwrap(), L::new(s.clone(), 0, 1).unwrap(), L::new(t.clone(), 1, 1).unwrap()];
        assert_eq!(expand_in_frame(&f[0], &e).unwrap(), f1);
        let f2 = vec![L::new(t.clone(), 1, 0).unwrap(), L::new(t, 0, 1).unwrap(), L::new(-s, 1, 1).unwrap()];
        assert_eq!(expand_in_frame(&f[1], &e).unwrap(), f2);

        assert!(matches!(expand_in_frame(&normal(), &e), Err(Error::NotInTangentModule)));
    }

    #[test]
    fn projected_connection_agrees() {
        let c = models::sphere_calculus().unwrap();
        let p = models::sphere_pseudo_inverse(&c).unwrap();
        let conn = crate::connection::solve_connection(&c, &p).unwrap();
        let v = compare_with_connection(&conn);
        assert!(v.holds, "{v:?}");

        let e = e_frame();
        let hat = canonical_connection(c.derivation(0), &e[0]);
        assert_eq!(hat, e[2].negated());
        let hat = canonical_connection(c.derivation(1), &e[1]);
        assert_eq!(hat, e[2]);
    }

    #[test]
    fn projected_connection_leibniz() {
        let c = models::sphere_calculus().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for k in 0..6 {
            let u = random::module_element(&mut rng, S, 4);
            let a = random::element(&mut rng, S);
            let d = c.derivation(k % 3);
            let lhs = canonical_connection(d, &u.right_mul(&a));
            let rhs = canonical_connection(d, &u).right_mul(&a).plus(&project(&u).right_mul(&d.apply(&a).unwrap())).unwrap();
            assert_eq!(lhs, rhs);
        }
    }
}
