//! Report generation for the `nccalc` command-line tool.

use std::fmt::Write as _;
use std::str::FromStr;
use std::time::Instant;

use nccalc_core::algebra::{AlgebraElement, AlgebraId, StarRing};
use nccalc_core::connection::{self, Connection, LocalModule};
use nccalc_core::curvature::{self, CurvatureTable};
use nccalc_core::localization::LocalizedElement;
use nccalc_core::metric_module::{validate_real_metric_calculus, HermitianForm, PseudoInverse, RealMetricCalculus};
use nccalc_core::oracle::{self, MatrixRep};
use nccalc_core::scalars::Scalar;
use nccalc_core::{expr, models, random, tangent};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

pub const SCHEMA_VERSION: u32 = 1;

/// Deliberate corruptions, used to show that each verifier can fail.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fault {
    /// Negates the component `R_1212`.
    NegateR1212,
    /// Sets `Gamma^3_11 = +1`.
    FlipGamma311,
    /// Adds `1` to `Gamma^1_23`.
    PerturbGamma123,
    /// Adds `i` to `Gamma^3_11`.
    ImaginaryGamma311,
    /// Replaces `h_11` by `Z`.
    NonHermitianMetric,
}

impl Fault {
    pub const ALL: [Fault; 5] = [
        Fault::NegateR1212,
        Fault::FlipGamma311,
        Fault::PerturbGamma123,
        Fault::ImaginaryGamma311,
        Fault::NonHermitianMetric,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Fault::NegateR1212 => "negate-R1212",
            Fault::FlipGamma311 => "flip-gamma311",
            Fault::PerturbGamma123 => "perturb-gamma123",
            Fault::ImaginaryGamma311 => "imaginary-gamma311",
            Fault::NonHermitianMetric => "non-hermitian-metric",
        }
    }

    fn needs_rank3(self) -> bool {
        !matches!(self, Fault::NegateR1212 | Fault::NonHermitianMetric)
    }
}

impl FromStr for Fault {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Fault::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| format!("unknown fault `{s}`; expected one of {}", Fault::ALL.map(Fault::name).join(", ")))
    }
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub target: AlgebraId,
    pub reps: Vec<MatrixRep>,
    pub tol: f64,
    pub fault: Option<Fault>,
    pub timing: bool,
}

impl VerifyOptions {
    pub fn new(target: AlgebraId) -> Self {
        Self { target, reps: oracle::default_reps(target), tol: oracle::DEFAULT_TOL, fault: None, timing: false }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Self { name: name.into(), passed, detail: detail.into() }
    }

    fn from_verdict(name: &str, v: &connection::Verdict) -> Self {
        Self::new(name, v.holds, v.witness.clone().unwrap_or_else(|| "ok".into()))
    }
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct Entry {
    pub key: String,
    pub value: String,
}

fn entry(key: impl Into<String>, value: impl ToString) -> Entry {
    Entry { key: key.into(), value: value.to_string() }
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct PseudoInverseSection {
    pub hhat: Vec<Entry>,
    pub big_h: String,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct ConnectionSection {
    pub base_flag: bool,
    pub central: bool,
    pub table: Vec<Entry>,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct CurvatureSection {
    pub operator: Vec<Entry>,
    pub nonzero_components: Vec<Entry>,
    pub nonzero_count: usize,
    pub total_components: usize,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct ScalarSection {
    pub s: String,
    pub contraction: String,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct Report {
    pub schema_version: u32,
    pub target: String,
    pub fault: Option<String>,
    pub passed: bool,
    pub first_failure: Option<String>,
    pub axioms: Vec<Check>,
    pub pseudo_inverse: Option<PseudoInverseSection>,
    pub connection: Option<ConnectionSection>,
    pub verifiers: Vec<Check>,
    pub curvature: Option<CurvatureSection>,
    pub symmetries: Vec<Check>,
    pub scalar_curvature: Option<ScalarSection>,
    pub scalar_checks: Vec<Check>,
    pub tangent: Vec<Check>,
    pub oracle: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u128>,
}

impl Report {
    fn sections(&self) -> [(&'static str, &[Check]); 6] {
        [
            ("axioms", &self.axioms),
            ("verifiers", &self.verifiers),
            ("symmetries", &self.symmetries),
            ("scalar curvature", &self.scalar_checks),
            ("tangent", &self.tangent),
            ("oracle", &self.oracle),
        ]
    }

    fn finish(&mut self) {
        self.first_failure = self
            .sections()
            .iter()
            .find_map(|(sec, checks)| checks.iter().find(|c| !c.passed).map(|c| format!("{sec}: {}: {}", c.name, c.detail)));
        self.passed = self.first_failure.is_none();
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Renders `E_c x^c`, omitting zero coordinates and unit coefficients.
pub fn render_module(u: &LocalModule) -> String {
    let one = LocalizedElement::one_of(u.coord(0).algebra());
    let parts: Vec<String> = u
        .coords()
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| {
            if *c == one {
                format!("E{}", i + 1)
            } else if c.negated() == one {
                format!("-E{}", i + 1)
            } else {
                format!("E{}*({c})", i + 1)
            }
        })
        .collect();
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}

fn apply_gamma_fault(conn: &mut Connection, fault: Fault) {
    let alg = conn.algebra();
    let loc = |a: AlgebraElement| LocalizedElement::from_base(a);
    match fault {
        Fault::FlipGamma311 => conn.set_gamma(2, 0, 0, loc(AlgebraElement::one(alg))),
        Fault::PerturbGamma123 => {
            let g = conn.gamma(0, 1, 2).plus(&loc(AlgebraElement::one(alg)));
            conn.set_gamma(0, 1, 2, g);
        }
        Fault::ImaginaryGamma311 => {
            let g = conn.gamma(2, 0, 0).plus(&loc(AlgebraElement::scalar(alg, Scalar::i())));
            conn.set_gamma(2, 0, 0, g);
        }
        Fault::NegateR1212 | Fault::NonHermitianMetric => {}
    }
}

fn build_calculus(opts: &VerifyOptions) -> nccalc_core::Result<RealMetricCalculus> {
    let c = models::calculus(opts.target)?;
    if opts.fault != Some(Fault::NonHermitianMetric) {
        return Ok(c);
    }
    let mut matrix = c.form().matrix().to_vec();
    matrix[0][0] = AlgebraElement::z(opts.target);
    RealMetricCalculus::new(HermitianForm::new_unchecked(matrix)?, c.lie().clone(), c.anchor().clone())
}

/// Runs the whole pipeline and collects every verdict.
pub fn run_verify(opts: &VerifyOptions) -> Result<Report, String> {
    let start = Instant::now();
    if let Some(f) = opts.fault {
        if f.needs_rank3() && opts.target == AlgebraId::Torus {
            return Err(format!("fault `{}` needs a rank-three calculus", f.name()));
        }
    }
    let mut report = Report {
        schema_version: SCHEMA_VERSION,
        target: opts.target.name().to_string(),
        fault: opts.fault.map(|f| f.name().to_string()),
        passed: false,
        first_failure: None,
        axioms: Vec::new(),
        pseudo_inverse: None,
        connection: None,
        verifiers: Vec::new(),
        curvature: None,
        symmetries: Vec::new(),
        scalar_curvature: None,
        scalar_checks: Vec::new(),
        tangent: Vec::new(),
        oracle: Vec::new(),
        timing_ms: None,
    };
    run_stages(opts, &mut report).map_err(|e| e.to_string())?;
    report.finish();
    if opts.timing {
        report.timing_ms = Some(start.elapsed().as_millis());
    }
    Ok(report)
}

fn run_stages(opts: &VerifyOptions, report: &mut Report) -> nccalc_core::Result<()> {
    let c = build_calculus(opts)?;
    let validation = validate_real_metric_calculus(&c);
    report.axioms = validation.checks.iter().map(|k| Check::new(&k.name, k.passed, &k.detail)).collect();
    if !validation.all_passed() {
        return Ok(());
    }

    let p = match models::pseudo_inverse(&c) {
        Ok(p) => p,
        Err(e) => {
            report.axioms.push(Check::new("pseudo-inverse", false, e.to_string()));
            return Ok(());
        }
    };
    report.axioms.push(Check::new("pseudo-inverse", true, "ok"));
    let n = c.rank();
    report.pseudo_inverse = Some(PseudoInverseSection {
        hhat: grid(n).map(|(a, b)| entry(format!("hhat^{}{}", a + 1, b + 1), p.hhat(a, b))).collect(),
        big_h: p.big_h().to_string(),
    });

    let mut conn = match connection::solve_connection(&c, &p) {
        Ok(conn) => conn,
        Err(e) => {
            report.verifiers.push(Check::new("Koszul equation", false, e.to_string()));
            return Ok(());
        }
    };
    report.verifiers.push(Check::new("Koszul equation", true, "ok"));
    let second = models::scaled_pseudo_inverse(&c, &p)?;
    let unique = connection::solve_connection(&c, &second).map(|g| connection::same_connection(&conn, &g));
    report.verifiers.push(Check::new(
        "same connection from (hhat H, H^2)",
        matches!(unique, Ok(true)),
        match unique {
            Ok(true) => "ok".to_string(),
            Ok(false) => "tables differ".to_string(),
            Err(e) => e.to_string(),
        },
    ));
    if let Some(f) = opts.fault {
        apply_gamma_fault(&mut conn, f);
    }
    report.connection = Some(ConnectionSection {
        base_flag: conn.base_flag(),
        central: conn.is_central(),
        table: grid(n).map(|(a, b)| entry(format!("nabla_{} E{}", a + 1, b + 1), render_module(&conn.nabla_basis(a, b)))).collect(),
    });
    report.verifiers.push(Check::from_verdict("metric", &connection::verify_metric(&c, &conn)));
    report.verifiers.push(Check::from_verdict("torsion-free", &connection::verify_torsion_free(&c, &conn)));
    report.verifiers.push(Check::from_verdict("h(nabla E, E') hermitian", &connection::verify_first_order_hermitian(&c, &conn)));
    let real = connection::verify_real_calculus(&c, &conn);
    report.verifiers.push(Check::from_verdict("real: h(nabla nabla E, E') hermitian", &real.second_derivative_form));
    report.verifiers.push(Check::from_verdict("real: h(nabla E, nabla E') hermitian", &real.paired_form));

    let mut table = curvature::components(&conn, c.form());
    if opts.fault == Some(Fault::NegateR1212) {
        let v = table.component(0, 1, 0, 1).negated();
        table.set_component(0, 1, 0, 1, v);
    }
    report.curvature = Some(curvature_section(&table));
    let suite = curvature::symmetry_suite(&table);
    report.symmetries = suite
        .families
        .iter()
        .map(|f| Check::new(f.name, f.holds(), f.witness.clone().unwrap_or_else(|| format!("{} tuples", f.checked))))
        .collect();
    let bianchi = curvature::operator_bianchi(&table);
    report.symmetries.push(Check::new("operator Bianchi identity", bianchi, if bianchi { "ok" } else { "cyclic sum nonzero" }));

    scalar_stage(&c, &p, &second, &table, report);
    if opts.target == AlgebraId::Sphere {
        report.tangent = tangent_checks(&conn);
    }
    report.oracle = oracle_checks(opts, &c, &conn, &table, report.scalar_curvature.is_some().then_some(&p));
    Ok(())
}

fn grid(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |a| (0..n).map(move |b| (a, b)))
}

fn curvature_section(t: &CurvatureTable) -> CurvatureSection {
    let n = t.rank();
    let mut operator = Vec::new();
    for (p, q) in grid(n) {
        for b in 0..n {
            let v = t.op_value(p, q, b);
            if p < q && !v.is_zero() {
                operator.push(entry(format!("R({}, {}) E{}", p + 1, q + 1, b + 1), render_module(v)));
            }
        }
    }
    let mut nonzero = Vec::new();
    for (a, b) in grid(n) {
        for (p, q) in grid(n) {
            let v = t.component(a, b, p, q);
            if !v.is_zero() {
                nonzero.push(entry(format!("R{}{}{}{}", a + 1, b + 1, p + 1, q + 1), v));
            }
        }
    }
    CurvatureSection { nonzero_count: nonzero.len(), nonzero_components: nonzero, operator, total_components: n.pow(4) }
}

fn scalar_stage(c: &RealMetricCalculus, p: &PseudoInverse, second: &PseudoInverse, t: &CurvatureTable, report: &mut Report) {
    let sc = match curvature::scalar_curvature(t, p) {
        Ok(sc) => sc,
        Err(e) => {
            report.scalar_checks.push(Check::new("H S H = T", false, e.to_string()));
            return;
        }
    };
    report.scalar_checks.push(Check::new("H S H = T", true, "ok"));
    report.scalar_checks.push(Check::new("S hermitian", sc.s.is_hermitian(), sc.s.to_string()));
    let alt = curvature::scalar_curvature(t, second);
    report.scalar_checks.push(match alt {
        Ok(s2) => Check::new("same S from (hhat H, H^2)", s2.s == sc.s, s2.s.to_string()),
        Err(e) => Check::new("same S from (hhat H, H^2)", false, e.to_string()),
    });
    if c.rank() == 3 {
        let a = vec![vec![1, 1, 0], vec![0, 1, 1], vec![0, 0, 1]];
        let basis_check = curvature::change_of_basis(c, p, &a).and_then(|(c2, p2)| {
            let conn2 = connection::solve_connection(&c2, &p2)?;
            Ok(curvature::contraction(&curvature::components(&conn2, c2.form()), &p2))
        });
        report.scalar_checks.push(match basis_check {
            Ok(t2) => Check::new("T independent of the derivation basis", t2 == sc.contraction, t2.to_string()),
            Err(e) => Check::new("T independent of the derivation basis", false, e.to_string()),
        });
    }
    report.scalar_curvature = Some(ScalarSection { s: sc.s.to_string(), contraction: sc.contraction.to_string() });
}

fn tangent_checks(conn: &Connection) -> Vec<Check> {
    let mut out = Vec::new();
    let e = tangent::e_frame();
    let f = tangent::f_frame();
    out.push(Check::from_verdict("E-frame tangent", &tangent::verify_frame_tangency(&e)));
    out.push(Check::from_verdict("F-frame tangent", &tangent::verify_frame_tangency(&f)));
    for (name, ok) in tangent::lemma_x_identities() {
        out.push(Check::new(name, ok, if ok { "ok" } else { "fails" }));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let idempotent = (0..10).all(|_| {
        let u = random::module_element(&mut rng, AlgebraId::Sphere, 4);
        let p = tangent::project(&u);
        tangent::project(&p) == p
    });
    out.push(Check::new("P^2 = P", idempotent, "10 random elements"));
    let f3 = tangent::expand_in_frame(&f[2], &e);
    let one = LocalizedElement::one_of(AlgebraId::Sphere);
    let ok = f3.as_ref().is_ok_and(|c| *c == vec![one.clone(), one.negated(), LocalizedElement::zero_of(AlgebraId::Sphere)]);
    let detail = match f3 {
        Ok(coords) => render_module(&LocalModule::new(coords)),
        Err(e) => e.to_string(),
    };
    out.push(Check::new("F3 = E1 - E2", ok, detail));
    out.push(Check::from_verdict("projected connection equals solved connection", &tangent::compare_with_connection(conn)));
    out
}

/// The quadratic `X` identities as source text, evaluated without normal forms.
const X_IDENTITY_SOURCES: [(&str, &str); 6] = [
    ("X2*X4 + X1*X3", "q*(X4*X2 + X3*X1)"),
    ("X2*X4 - X1*X3", "q^-1*(X4*X2 - X3*X1)"),
    ("X2*X3 + X1*X4", "q^-1*(X3*X2 + X4*X1)"),
    ("X2*X3 - X1*X4", "q*(X3*X2 - X4*X1)"),
    ("X1*X2", "X2*X1"),
    ("X3*X4", "X4*X3"),
];

fn cmatrix_adjoint_mul(a: &oracle::CMatrix, b: &oracle::CMatrix) -> oracle::CMatrix {
    a.adjoint() * b
}

fn oracle_checks(opts: &VerifyOptions, c: &RealMetricCalculus, conn: &Connection, t: &CurvatureTable, p: Option<&PseudoInverse>) -> Vec<Check> {
    let mut out = Vec::new();
    let reps = &opts.reps;
    let tol = opts.tol;
    let n = c.rank();
    let worst = reps.iter().map(MatrixRep::relation_residual).fold(0.0, f64::max);
    out.push(Check::new("defining relations", worst <= tol, format!("max residual {worst:.2e}")));

    let eval = |x: &LocalizedElement, r: &MatrixRep| oracle::evaluate_localized(x, r).expect("same algebra");
    let evalb = |x: &AlgebraElement, r: &MatrixRep| oracle::evaluate(x, r).expect("same algebra");

    // 2 sum_r (Gamma^r_ab)* h_rc = K_abc, with products and adjoints taken numerically
    let mut koszul = 0.0f64;
    for r in reps {
        for (a, b) in grid(n) {
            for k in 0..n {
                let mut lhs = oracle::CMatrix::zeros(r.dim(), r.dim());
                for s in 0..n {
                    lhs += cmatrix_adjoint_mul(&eval(conn.gamma(s, a, b), r), &evalb(c.h(s, k), r)) * Complex64::new(2.0, 0.0);
                }
                let rhs = evalb(&connection::koszul_rhs(c, a, b, k), r);
                koszul = koszul.max(oracle::op_norm(&(lhs - rhs)));
            }
        }
    }
    out.push(Check::new("Koszul equation", koszul <= tol, format!("max residual {koszul:.2e}")));

    // R_abpq = sum_c h_ac (R(p,q) E_b)^c
    let mut comp = 0.0f64;
    for r in reps {
        for (a, b) in grid(n) {
            for (pp, q) in grid(n) {
                let mut lhs = oracle::CMatrix::zeros(r.dim(), r.dim());
                for k in 0..n {
                    lhs += evalb(c.h(a, k), r) * eval(t.op_value(pp, q, b).coord(k), r);
                }
                comp = comp.max(oracle::op_norm(&(lhs - eval(t.component(a, b, pp, q), r))));
            }
        }
    }
    out.push(Check::new("curvature components", comp <= tol, format!("max residual {comp:.2e}")));

    if let Some(p) = p {
        if let Ok(sc) = curvature::scalar_curvature(t, p) {
            let mut res = 0.0f64;
            for r in reps {
                let h = evalb(p.big_h(), r);
                let lhs = &h * evalb(&sc.s, r) * &h;
                res = res.max(oracle::op_norm(&(lhs - eval(&sc.contraction, r))));
            }
            out.push(Check::new("H S H = T", res <= tol, format!("max residual {res:.2e}")));
        }
    }

    if opts.target == AlgebraId::Sphere {
        let mut res = 0.0f64;
        for (l, rr) in X_IDENTITY_SOURCES {
            let (le, re) = (expr::parse(l).expect("valid source"), expr::parse(rr).expect("valid source"));
            for r in reps {
                let d = oracle::evaluate_expr(&le, r).expect("sphere rep") - oracle::evaluate_expr(&re, r).expect("sphere rep");
                res = res.max(oracle::op_norm(&d));
            }
        }
        out.push(Check::new("X identities from parse trees", res <= tol, format!("max residual {res:.2e}")));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let mut hom = 0.0f64;
    for _ in 0..20 {
        let a = random::element(&mut rng, opts.target);
        let b = random::element(&mut rng, opts.target);
        for r in reps {
            let lhs = evalb(&(&a * &b), r);
            let rhs = evalb(&a, r) * evalb(&b, r);
            let scale = 1.0f64.max(oracle::op_norm(&rhs));
            hom = hom.max(oracle::op_norm(&(lhs - rhs)) / scale);
        }
    }
    out.push(Check::new("evaluation is multiplicative", hom <= tol, format!("max relative residual {hom:.2e}")));
    out
}

pub fn render_markdown(r: &Report) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# Verification report: {}\n", r.target);
    let _ = writeln!(s, "- schema version: {}", r.schema_version);
    if let Some(f) = &r.fault {
        let _ = writeln!(s, "- injected fault: `{f}`");
    }
    let _ = writeln!(s, "- result: **{}**", if r.passed { "PASS" } else { "FAIL" });
    if let Some(f) = &r.first_failure {
        let _ = writeln!(s, "- first failure: {f}");
    }
    if let Some(t) = r.timing_ms {
        let _ = writeln!(s, "- time: {t} ms");
    }
    let checks = |s: &mut String, title: &str, list: &[Check]| {
        if list.is_empty() {
            return;
        }
        let _ = writeln!(s, "\n## {title}\n\n| check | result | detail |\n|---|---|---|");
        for c in list {
            let _ = writeln!(s, "| {} | {} | `{}` |", c.name, if c.passed { "pass" } else { "FAIL" }, c.detail.replace('|', "\\|"));
        }
    };
    let entries = |s: &mut String, title: &str, list: &[Entry]| {
        let _ = writeln!(s, "\n## {title}\n\n| | value |\n|---|---|");
        for e in list {
            let _ = writeln!(s, "| {} | `{}` |", e.key, e.value);
        }
    };
    checks(&mut s, "Axioms", &r.axioms);
    if let Some(p) = &r.pseudo_inverse {
        let mut list = p.hhat.clone();
        list.push(entry("H", &p.big_h));
        entries(&mut s, "Pseudo-inverse", &list);
    }
    if let Some(c) = &r.connection {
        entries(&mut s, "Connection", &c.table);
        let _ = writeln!(s, "\nbase algebra: {}, central: {}", c.base_flag, c.central);
    }
    checks(&mut s, "Connection checks", &r.verifiers);
    if let Some(c) = &r.curvature {
        entries(&mut s, "Curvature operator (p < q)", &c.operator);
        entries(&mut s, "Nonzero curvature components", &c.nonzero_components);
        let _ = writeln!(s, "\n{} of {} components are nonzero", c.nonzero_count, c.total_components);
    }
    checks(&mut s, "Symmetries", &r.symmetries);
    if let Some(sc) = &r.scalar_curvature {
        entries(&mut s, "Scalar curvature", &[entry("S", &sc.s), entry("T", &sc.contraction)]);
    }
    checks(&mut s, "Scalar curvature checks", &r.scalar_checks);
    checks(&mut s, "Tangent module", &r.tangent);
    checks(&mut s, "Numeric oracle", &r.oracle);
    s
}

/// Normal form of `src`, plus its matrix in `rep` when given.
pub fn run_eval(src: &str, target: AlgebraId, rep: Option<&MatrixRep>) -> Result<String, nccalc_core::Error> {
    let e = expr::parse(src)?;
    let a = e.to_element(target)?;
    let mut out = format!("{a}\n");
    if let Some(r) = rep {
        let m = oracle::evaluate(&a, r)?;
        let direct = oracle::evaluate_expr(&e, r)?;
        let (p, n) = r.theta();
        let _ = write!(out, "matrix at theta = {p}/{n}");
        if let Some(l) = r.lambda2() {
            let _ = write!(out, ", lambda^2 = {l}");
        }
        let _ = writeln!(out, ":");
        for row in m.row_iter() {
            let cells: Vec<String> = row.iter().map(|z| format!("{:+.6}{:+.6}i", z.re, z.im)).collect();
            let _ = writeln!(out, "  [{}]", cells.join(", "));
        }
        let _ = writeln!(out, "difference from direct evaluation: {:.2e}", oracle::op_norm(&(m - direct)));
    }
    Ok(out)
}
