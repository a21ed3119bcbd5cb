//! End to end: calculus, pseudo-inverse, connection, curvature, scalar curvature.

use nccalc_core::algebra::{AlgebraElement, AlgebraId};
use nccalc_core::connection::{self, verify_real_calculus};
use nccalc_core::curvature::{self, SYMMETRY_FAMILIES};
use nccalc_core::metric_module::validate_real_metric_calculus;
use nccalc_core::{models, oracle, solve_connection, tangent, LocalizedElement};

fn pipeline(alg: AlgebraId) -> (nccalc_core::Connection, curvature::CurvatureTable, curvature::ScalarCurvature) {
    let c = models::calculus(alg).unwrap();
    assert!(validate_real_metric_calculus(&c).all_passed());
    let p = models::pseudo_inverse(&c).unwrap();
    let conn = solve_connection(&c, &p).unwrap();
    let t = curvature::components(&conn, c.form());
    let s = curvature::scalar_curvature(&t, &p).unwrap();
    (conn, t, s)
}

#[test]
fn sphere_end_to_end() {
    let c = models::sphere_calculus().unwrap();
    let (conn, t, s) = pipeline(AlgebraId::Sphere);

    assert!(connection::verify_metric(&c, &conn).holds);
    assert!(connection::verify_torsion_free(&c, &conn).holds);
    assert!(connection::verify_first_order_hermitian(&c, &conn).holds);
    assert!(verify_real_calculus(&c, &conn).holds());

    let report = curvature::symmetry_suite(&t);
    for name in SYMMETRY_FAMILIES {
        assert!(report.family(name).is_some_and(|f| f.holds()), "{name}");
    }
    assert!(curvature::operator_bianchi(&t));
    assert_eq!(s.s, AlgebraElement::from_i64(AlgebraId::Sphere, 6));

    assert!(tangent::compare_with_connection(&conn).holds);
}

#[test]
fn torus_is_flat() {
    let (conn, t, s) = pipeline(AlgebraId::Torus);
    assert!(conn.is_central());
    assert!(t.is_zero());
    assert!(s.s.is_zero());
}

#[test]
fn scaled_pseudo_inverse_agrees() {
    let c = models::sphere_calculus().unwrap();
    let p = models::pseudo_inverse(&c).unwrap();
    let scaled = models::scaled_pseudo_inverse(&c, &p).unwrap();
    let a = solve_connection(&c, &p).unwrap();
    let b = solve_connection(&c, &scaled).unwrap();
    assert!(connection::same_connection(&a, &b));
    let t = curvature::components(&a, c.form());
    assert_eq!(curvature::scalar_curvature(&t, &p).unwrap().s, curvature::scalar_curvature(&t, &scaled).unwrap().s);
}

#[test]
fn sphere_curvature_holds_in_matrices() {
    let (_, t, s) = pipeline(AlgebraId::Sphere);
    let reps = oracle::default_reps(AlgebraId::Sphere);
    let hsh = &(&s.big_h * &s.s) * &s.big_h;
    assert!(oracle::check_localized_identity(&LocalizedElement::from_base(hsh), &s.contraction, &reps, oracle::DEFAULT_TOL));
    for rep in &reps {
        assert!(rep.relation_residual() < oracle::DEFAULT_TOL);
        let m = |a, b, p, q| oracle::evaluate_localized(t.component(a, b, p, q), rep).unwrap();
        for (a, b, p, q) in (0..27).map(|k| (k / 9, (k / 3) % 3, k % 3, (k + 1) % 3)) {
            assert!(oracle::op_norm(&(m(a, b, p, q) - m(p, q, a, b))) < oracle::DEFAULT_TOL);
            assert!(oracle::op_norm(&(m(a, b, p, q) + m(a, b, q, p))) < oracle::DEFAULT_TOL);
        }
        let r = m(0, 1, 0, 1);
        assert!(oracle::op_norm(&r) > 0.1);
    }
}
