//! Numeric cross-checks in clock-and-shift matrix representations.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::ToPrimitive;

use crate::algebra::{AlgebraElement, AlgebraId, Generator, Monomial};
use crate::error::{Error, Result};
use crate::expr::{Atom, Expr};
use crate::localization::LocalizedElement;
use crate::scalars::{Rational, Scalar};

pub type CMatrix = DMatrix<Complex64>;

/// Default samples: `(p, N)` pairs, `lambda^2` values, and tolerance.
pub const DEFAULT_THETAS: [(u32, u32); 2] = [(1, 5), (2, 7)];
pub const DEFAULT_LAMBDA2: [(i64, i64); 3] = [(1, 2), (1, 3), (3, 4)];
pub const DEFAULT_TOL: f64 = 1e-10;

/// `Z`, `W` as `N x N` matrices with `q = exp(2 pi i p / N)`.
#[derive(Clone, Debug)]
pub struct MatrixRep {
    algebra: AlgebraId,
    dim: usize,
    p: u32,
    lambda2: Option<f64>,
    q: Complex64,
    z: CMatrix,
    w: CMatrix,
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn clock_and_shift(p: u32, n: u32) -> Result<(Complex64, CMatrix, CMatrix)> {
    if n < 2 {
        return Err(Error::InvalidRepresentation(format!("dimension {n} is below 2")));
    }
    if p == 0 || p >= n || gcd(p, n) != 1 {
        return Err(Error::InvalidRepresentation(format!("theta = {p}/{n} needs 0 < p < N with gcd(p, N) = 1")));
    }
    let n = n as usize;
    let q = Complex64::from_polar(1.0, 2.0 * PI * f64::from(p) / n as f64);
    let clock = CMatrix::from_fn(n, n, |r, c| if r == c { q.powu(r as u32) } else { Complex64::new(0.0, 0.0) });
    // W e_j = e_{j-1}, cyclically
    let shift = CMatrix::from_fn(n, n, |r, c| if (r + 1) % n == c { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) });
    Ok((q, clock, shift))
}

impl MatrixRep {
    pub fn torus(p: u32, n: u32) -> Result<Self> {
        let (q, z, w) = clock_and_shift(p, n)?;
        Ok(Self { algebra: AlgebraId::Torus, dim: n as usize, p, lambda2: None, q, z, w })
    }

    /// `Z = lambda * clock`, `W = mu * shift` with `lambda^2 + mu^2 = 1`.
    pub fn sphere(p: u32, n: u32, lambda2: f64) -> Result<Self> {
        if !(lambda2 > 0.0 && lambda2 < 1.0) {
            return Err(Error::InvalidRepresentation(format!("lambda^2 = {lambda2} must lie in (0, 1)")));
        }
        let (q, clock, shift) = clock_and_shift(p, n)?;
        let (lambda, mu) = (lambda2.sqrt(), (1.0 - lambda2).sqrt());
        Ok(Self {
            algebra: AlgebraId::Sphere,
            dim: n as usize,
            p,
            lambda2: Some(lambda2),
            q,
            z: clock * Complex64::new(lambda, 0.0),
            w: shift * Complex64::new(mu, 0.0),
        })
    }

    pub fn algebra(&self) -> AlgebraId {
        self.algebra
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `(p, N)` with `theta = p / N`.
    pub fn theta(&self) -> (u32, usize) {
        (self.p, self.dim)
    }

    pub fn lambda2(&self) -> Option<f64> {
        self.lambda2
    }

    pub fn q(&self) -> Complex64 {
        self.q
    }

    pub fn generator(&self, g: Generator) -> CMatrix {
        match g {
            Generator::Z => self.z.clone(),
            Generator::Zs => self.z.adjoint(),
            Generator::W => self.w.clone(),
            Generator::Ws => self.w.adjoint(),
        }
    }

    pub fn identity(&self) -> CMatrix {
        CMatrix::identity(self.dim, self.dim)
    }

    /// Largest operator-norm residual over the defining relations.
    pub fn relation_residual(&self) -> f64 {
        crate::algebra::relations(self.algebra)
            .iter()
            .map(|rel| {
                let mut total = CMatrix::zeros(self.dim, self.dim);
                for (s, word) in rel.difference() {
                    let m = word.iter().fold(self.identity(), |acc, g| acc * self.generator(*g));
                    total += m * scalar_value(&s, self.q);
                }
                op_norm(&total)
            })
            .fold(0.0, f64::max)
    }

    fn monomial(&self, mono: &Monomial) -> CMatrix {
        mono.word().iter().fold(self.identity(), |acc, g| acc * self.generator(*g))
    }
}

pub fn rational_value(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// `sum c_k q^k` at a numeric `q`.
pub fn scalar_value(s: &Scalar, q: Complex64) -> Complex64 {
    s.terms()
        .map(|(k, c)| {
            let (re, im) = c.to_f64_pair();
            Complex64::new(re, im) * q.powi(k as i32)
        })
        .sum()
}

/// The largest singular value.
pub fn op_norm(m: &CMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.singular_values().max()
}

fn check_algebra(alg: AlgebraId, rep: &MatrixRep) -> Result<()> {
    if alg == rep.algebra {
        Ok(())
    } else {
        Err(Error::MixedAlgebra { left: alg, right: rep.algebra })
    }
}

pub fn evaluate(a: &AlgebraElement, rep: &MatrixRep) -> Result<CMatrix> {
    check_algebra(a.algebra(), rep)?;
    let mut out = CMatrix::zeros(rep.dim, rep.dim);
    for (mono, s) in a.terms() {
        out += rep.monomial(mono) * scalar_value(s, rep.q);
    }
    Ok(out)
}

/// `num * (|Z|^2)^{-m} (|W|^2)^{-n}` through numeric inverses.
pub fn evaluate_localized(x: &LocalizedElement, rep: &MatrixRep) -> Result<CMatrix> {
    let num = evaluate(x.numerator(), rep)?;
    let (m, n) = x.denominator_exponents();
    if m == 0 && n == 0 {
        return Ok(num);
    }
    let den = evaluate(&crate::localization::central_power(m, n), rep)?;
    let inv = den
        .try_inverse()
        .ok_or_else(|| Error::InvalidRepresentation("denominator is singular in this representation".into()))?;
    Ok(num * inv)
}

/// Evaluates the parse tree directly, without normal forms.
pub fn evaluate_expr(e: &Expr, rep: &MatrixRep) -> Result<CMatrix> {
    let id = rep.identity();
    Ok(match e {
        Expr::Atom(a) => match a {
            Atom::Number(r) => id * Complex64::new(rational_value(r), 0.0),
            Atom::I => id * Complex64::i(),
            Atom::Q => id * rep.q,
            Atom::Gen(g) => rep.generator(*g),
            Atom::X(i) => {
                let (g, gs) = if *i <= 2 { (rep.z.clone(), rep.z.adjoint()) } else { (rep.w.clone(), rep.w.adjoint()) };
                if i % 2 == 1 {
                    (g + gs) * Complex64::new(0.5, 0.0)
                } else {
                    (g - gs) * Complex64::new(0.0, -0.5)
                }
            }
            Atom::AbsZ2 => &rep.z * rep.z.adjoint(),
            Atom::AbsW2 => &rep.w * rep.w.adjoint(),
        },
        Expr::Add(l, r) => evaluate_expr(l, rep)? + evaluate_expr(r, rep)?,
        Expr::Sub(l, r) => evaluate_expr(l, rep)? - evaluate_expr(r, rep)?,
        Expr::Mul(l, r) => evaluate_expr(l, rep)? * evaluate_expr(r, rep)?,
        Expr::Neg(x) => -evaluate_expr(x, rep)?,
        Expr::Pow(b, n, at) => {
            let base = evaluate_expr(b, rep)?;
            let base = if *n < 0 {
                base.try_inverse().ok_or_else(|| Error::Parse { position: *at, message: "singular base for a negative power".into() })?
            } else {
                base
            };
            (0..n.unsigned_abs()).fold(id, |acc, _| acc * &base)
        }
    })
}

/// `||eval(a) - eval(b)||_op <= tol` in every representation.
pub fn check_identity(a: &AlgebraElement, b: &AlgebraElement, reps: &[MatrixRep], tol: f64) -> bool {
    !reps.is_empty() && reps.iter().all(|r| max_residual(a, b, r).is_ok_and(|d| d <= tol))
}

pub fn max_residual(a: &AlgebraElement, b: &AlgebraElement, rep: &MatrixRep) -> Result<f64> {
    Ok(op_norm(&(evaluate(a, rep)? - evaluate(b, rep)?)))
}

pub fn check_localized_identity(a: &LocalizedElement, b: &LocalizedElement, reps: &[MatrixRep], tol: f64) -> bool {
    !reps.is_empty()
        && reps.iter().all(|r| match (evaluate_localized(a, r), evaluate_localized(b, r)) {
            (Ok(x), Ok(y)) => op_norm(&(x - y)) <= tol,
            _ => false,
        })
}

/// The default sample set for one algebra.
pub fn default_reps(alg: AlgebraId) -> Vec<MatrixRep> {
    reps_for(alg, &DEFAULT_THETAS, &DEFAULT_LAMBDA2.map(|(n, d)| n as f64 / d as f64)).expect("default samples are valid")
}

pub fn reps_for(alg: AlgebraId, thetas: &[(u32, u32)], lambda2: &[f64]) -> Result<Vec<MatrixRep>> {
    let mut out = Vec::new();
    for &(p, n) in thetas {
        match alg {
            AlgebraId::Torus => out.push(MatrixRep::torus(p, n)?),
            AlgebraId::Sphere => {
                for &l in lambda2 {
                    out.push(MatrixRep::sphere(p, n, l)?);
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse;
    use crate::random;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const S: AlgebraId = AlgebraId::Sphere;
    const T: AlgebraId = AlgebraId::Torus;

    #[test]
    fn relations_hold() {
        for alg in [S, T] {
            for r in default_reps(alg) {
                assert!(r.relation_residual() < 1e-12, "{alg} {:?}", r.theta());
            }
        }
    }

    #[test]
    fn basic_evaluations() {
        let r = MatrixRep::sphere(1, 5, 0.5).unwrap();
        assert!(op_norm(&(evaluate(&AlgebraElement::one(S), &r).unwrap() - r.identity())) < 1e-14);
        let z2 = evaluate(&AlgebraElement::abs_z2(S), &r).unwrap();
        assert!(op_norm(&(z2 - r.identity() * Complex64::new(0.5, 0.0))) < 1e-12);
        let wz = &r.generator(Generator::W) * &r.generator(Generator::Z);
        let zw = &r.generator(Generator::Z) * &r.generator(Generator::W);
        assert!(op_norm(&(wz - zw * r.q())) < 1e-12);
    }

    #[test]
    fn identities() {
        let reps = default_reps(S);
        let z = AlgebraElement::z(S);
        let w = AlgebraElement::w(S);
        let star = (&z * &w).star();
        let rhs = (&AlgebraElement::zs(S) * &AlgebraElement::ws(S)).scale(&Scalar::q_pow(1));
        assert!(check_identity(&star, &rhs, &reps, DEFAULT_TOL));
        assert!(!check_identity(&z, &AlgebraElement::zs(S), &reps, DEFAULT_TOL));
        assert!(!check_identity(&z, &z, &[], DEFAULT_TOL));
        assert!(evaluate(&AlgebraElement::z(T), &reps[0]).is_err());
    }

    #[test]
    fn homomorphism() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for alg in [S, T] {
            let reps = default_reps(alg);
            for _ in 0..20 {
                let a = random::element(&mut rng, alg);
                let b = random::element(&mut rng, alg);
                for r in &reps {
                    let lhs = evaluate(&(&a * &b), r).unwrap();
                    let rhs = evaluate(&a, r).unwrap() * evaluate(&b, r).unwrap();
                    assert!(op_norm(&(lhs - rhs)) < 1e-9);
                }
            }
        }
    }

    #[test]
    fn parse_tree_agrees_with_normal_form() {
        for src in ["W*Z", "(X1 + 2*X3)^3 * Ws - q^-1*AbsW2", "(Z - i*W)*(Zs + W)^2", "X1^2+X2^2+X3^2+X4^2"] {
            let e = parse(src).unwrap();
            let a = e.to_element(S).unwrap();
            for r in default_reps(S) {
                assert!(op_norm(&(evaluate_expr(&e, &r).unwrap() - evaluate(&a, &r).unwrap())) < 1e-10, "{src}");
            }
        }
    }

    #[test]
    fn invalid_reps() {
        assert!(MatrixRep::torus(2, 4).is_err());
        assert!(MatrixRep::torus(1, 1).is_err());
        assert!(MatrixRep::sphere(1, 5, 1.0).is_err());
    }
}
