//! A small expression language for algebra elements.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary ('*' unary)*
//! unary := '-' unary | power
//! power := atom ('^' '-'? digits)?
//! atom  := digits ('/' digits)? | name | '(' expr ')'
//! name  := Z | Zs | W | Ws | X1..X4 | AbsZ2 | AbsW2 | i | q
//! ```

use crate::algebra::{AlgebraElement, AlgebraId, Generator, Monomial};
use crate::error::{Error, Result};
use crate::scalars::{Rational, Scalar};

#[derive(Clone, Debug, PartialEq)]
pub enum Atom {
    Number(Rational),
    I,
    Q,
    Gen(Generator),
    X(usize),
    AbsZ2,
    AbsW2,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Atom(Atom),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    /// Base, exponent, and the source position of the `^`.
    Pow(Box<Expr>, i64, usize),
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

fn err<T>(position: usize, message: impl Into<String>) -> Result<T> {
    Err(Error::Parse { position, message: message.into() })
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn digits(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return err(start, "expected a number");
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .expect("ascii digits")
            .parse()
            .or_else(|_| err(start, "number too large"))
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(b'+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat(b'-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        while self.eat(b'*') {
            lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat(b'-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            let at = self.pos;
            self.pos += 1;
            let negative = self.eat(b'-');
            let n = self.digits()?;
            return Ok(Expr::Pow(Box::new(base), if negative { -n } else { n }, at));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        let start = match self.peek() {
            None => return err(self.pos, "unexpected end of input"),
            Some(_) => self.pos,
        };
        let c = self.src[start];
        if c == b'(' {
            self.pos += 1;
            let inner = self.expr()?;
            if !self.eat(b')') {
                return err(self.pos, "expected `)`");
            }
            return Ok(inner);
        }
        if c.is_ascii_digit() {
            let num = self.digits()?;
            let save = self.pos;
            if self.eat(b'/') {
                if self.peek().is_some_and(|c| c.is_ascii_digit()) {
                    let den_at = self.pos;
                    let den = self.digits()?;
                    if den == 0 {
                        return err(den_at, "zero denominator");
                    }
                    return Ok(Expr::Atom(Atom::Number(Rational::new(num.into(), den.into()))));
                }
                self.pos = save;
                return err(save, "expected a denominator after `/`");
            }
            return Ok(Expr::Atom(Atom::Number(Rational::from_integer(num.into()))));
        }
        if c.is_ascii_alphabetic() {
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
                self.pos += 1;
            }
            let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
            let atom = match name {
                "Z" => Atom::Gen(Generator::Z),
                "Zs" => Atom::Gen(Generator::Zs),
                "W" => Atom::Gen(Generator::W),
                "Ws" => Atom::Gen(Generator::Ws),
                "X1" => Atom::X(1),
                "X2" => Atom::X(2),
                "X3" => Atom::X(3),
                "X4" => Atom::X(4),
                "AbsZ2" => Atom::AbsZ2,
                "AbsW2" => Atom::AbsW2,
                "i" => Atom::I,
                "q" => Atom::Q,
                _ => return err(start, format!("unknown name `{name}`")),
            };
            return Ok(Expr::Atom(atom));
        }
        err(start, format!("unexpected character `{}`", c as char))
    }
}

pub fn parse(src: &str) -> Result<Expr> {
    let mut p = Parser { src: src.as_bytes(), pos: 0 };
    let e = p.expr()?;
    if let Some(c) = p.peek() {
        return err(p.pos, format!("unexpected character `{}`", c as char));
    }
    Ok(e)
}

/// The inverse of an invertible element, when it is recognisably one: a
/// unit scalar, or a unit multiple of a torus monomial.
fn invert(a: &AlgebraElement) -> Option<AlgebraElement> {
    if let Some(s) = a.as_scalar() {
        return Some(AlgebraElement::scalar(a.algebra(), s.unit_inverse().or_else(|| gaussian_inverse(&s))?));
    }
    if a.algebra() == AlgebraId::Torus && a.num_terms() == 1 {
        let (mono, coeff): (&Monomial, &Scalar) = a.terms().next()?;
        let inv = coeff.unit_inverse()?;
        // torus monomials are unitary
        return Some(AlgebraElement::monomial(*mono).star().scale(&inv));
    }
    None
}

fn gaussian_inverse(s: &Scalar) -> Option<Scalar> {
    let (k, c) = {
        let mut it = s.terms();
        let first = it.next()?;
        if it.next().is_some() {
            return None;
        }
        first
    };
    Some(Scalar::monomial(c.inverse()?, -k))
}

impl Expr {
    pub fn to_element(&self, alg: AlgebraId) -> Result<AlgebraElement> {
        Ok(match self {
            Expr::Atom(a) => match a {
                Atom::Number(r) => AlgebraElement::scalar(alg, Scalar::from_rational(r.clone())),
                Atom::I => AlgebraElement::scalar(alg, Scalar::i()),
                Atom::Q => AlgebraElement::scalar(alg, Scalar::q_pow(1)),
                Atom::Gen(g) => AlgebraElement::generator(alg, *g),
                Atom::X(i) => AlgebraElement::x(alg, *i),
                Atom::AbsZ2 => AlgebraElement::abs_z2(alg),
                Atom::AbsW2 => AlgebraElement::abs_w2(alg),
            },
            Expr::Add(l, r) => l.to_element(alg)?.try_add(&r.to_element(alg)?)?,
            Expr::Sub(l, r) => l.to_element(alg)?.try_sub(&r.to_element(alg)?)?,
            Expr::Mul(l, r) => l.to_element(alg)?.try_mul(&r.to_element(alg)?)?,
            Expr::Neg(e) => -e.to_element(alg)?,
            Expr::Pow(base, n, at) => {
                let b = base.to_element(alg)?;
                let b = if *n < 0 {
                    match invert(&b) {
                        Some(inv) => inv,
                        None => return err(*at, format!("negative power of non-invertible `{b}`")),
                    }
                } else {
                    b
                };
                let e = u32::try_from(n.unsigned_abs()).or_else(|_| err(*at, "exponent too large"))?;
                b.pow(e)
            }
        })
    }
}

/// Parses and normalizes in one step.
pub fn parse_element(src: &str, alg: AlgebraId) -> Result<AlgebraElement> {
    parse(src)?.to_element(alg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const S: AlgebraId = AlgebraId::Sphere;
    const T: AlgebraId = AlgebraId::Torus;

    #[test]
    fn examples() {
        assert_eq!(parse_element("W*Z", S).unwrap().to_string(), "q*Z*W");
        assert_eq!(parse_element("W*Ws", S).unwrap().to_string(), "1 - Z*Zs");
        assert_eq!(parse_element("X1^2+X2^2+X3^2+X4^2", S).unwrap().to_string(), "1");
        assert_eq!(parse_element("Z^-1", T).unwrap(), AlgebraElement::zs(T));
        assert_eq!(parse_element("q^-2 * q^2", S).unwrap(), AlgebraElement::one(S));
        assert_eq!(parse_element("(2/3)^-1", S).unwrap(), parse_element("3/2", S).unwrap());
        assert_eq!(parse_element("-(Z)", S).unwrap(), -AlgebraElement::z(S));
    }

    #[test]
    fn errors_carry_positions() {
        assert_eq!(parse("Z + "), Err(Error::Parse { position: 4, message: "unexpected end of input".into() }));
        assert!(matches!(parse("Z + Y"), Err(Error::Parse { position: 4, .. })));
        assert!(matches!(parse("(Z"), Err(Error::Parse { position: 2, .. })));
        assert!(matches!(parse("Z Z"), Err(Error::Parse { position: 2, .. })));
        assert!(matches!(parse_element("Z^-1", S), Err(Error::Parse { position: 1, .. })));
        assert!(matches!(parse("1/0"), Err(Error::Parse { position: 2, .. })));
    }

    #[test]
    fn rendering_round_trips() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for alg in [S, T] {
            for _ in 0..50 {
                let a = random::element(&mut rng, alg);
                assert_eq!(parse_element(&a.to_string(), alg).unwrap(), a, "{a}");
            }
        }
    }

    proptest! {
        #[test]
        fn round_trip_prop(seed in any::<u64>(), torus in any::<bool>()) {
            let alg = if torus { T } else { S };
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = &random::element(&mut rng, alg) * &random::element(&mut rng, alg);
            prop_assert_eq!(parse_element(&a.to_string(), alg).unwrap(), a);
        }
    }
}
