//! Real-number expressions: decimal literals, `pi`, `e`, `phi`, `sqrt`, `log`,
//! `exp`, the four operations and integer powers.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};

use super::field::{FieldElem, Quadratic};
use super::interval::Interval;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(BigRational),
    Pi,
    E,
    Phi,
    Sqrt(Box<Expr>),
    Log(Box<Expr>),
    Exp(Box<Expr>),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { offset: self.pos, message: msg.into() })
    }

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

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected '{}'", c as char))
        }
    }

    fn sum(&mut self) -> Result<Expr> {
        let mut lhs = self.product()?;
        loop {
            if self.eat(b'+') {
                lhs = Expr::Add(Box::new(lhs), Box::new(self.product()?));
            } else if self.eat(b'-') {
                lhs = Expr::Sub(Box::new(lhs), Box::new(self.product()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn product(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat(b'*') {
                lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat(b'/') {
                lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat(b'-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        if self.eat(b'+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.eat(b'^') {
            let neg = if self.eat(b'-') {
                true
            } else {
                self.eat(b'+');
                false
            };
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if start == self.pos {
                return self.err("exponent must be an integer");
            }
            let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
            let Ok(mut e) = s.parse::<i64>() else { return self.err("exponent too large") };
            if neg {
                e = -e;
            }
            return Ok(Expr::Pow(Box::new(base), e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.sum()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                match name {
                    "pi" => Ok(Expr::Pi),
                    "e" => Ok(Expr::E),
                    "phi" => Ok(Expr::Phi),
                    "sqrt" | "log" | "exp" => {
                        self.expect(b'(')?;
                        let arg = Box::new(self.sum()?);
                        self.expect(b')')?;
                        Ok(match name {
                            "sqrt" => Expr::Sqrt(arg),
                            "log" => Expr::Log(arg),
                            _ => Expr::Exp(arg),
                        })
                    }
                    _ => {
                        self.pos = start;
                        self.err(format!("unknown identifier '{name}'"))
                    }
                }
            }
            Some(c) => self.err(format!("unexpected character '{}'", c as char)),
            None => self.err("unexpected end of input"),
        }
    }

    fn number(&mut self) -> Result<Expr> {
        let start = self.pos;
        let mut int = String::new();
        let mut frac = String::new();
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            int.push(self.src[self.pos] as char);
            self.pos += 1;
        }
        if self.pos < self.src.len() && self.src[self.pos] == b'.' {
            self.pos += 1;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                frac.push(self.src[self.pos] as char);
                self.pos += 1;
            }
        }
        if int.is_empty() && frac.is_empty() {
            self.pos = start;
            return self.err("malformed number");
        }
        let digits: BigInt = format!("0{int}{frac}").parse().unwrap();
        let mut exp10 = -(frac.len() as i64);
        let at = |i: usize| self.src.get(i).copied().unwrap_or(0);
        let sci = matches!(at(self.pos), b'e' | b'E')
            && (at(self.pos + 1).is_ascii_digit()
                || (matches!(at(self.pos + 1), b'+' | b'-') && at(self.pos + 2).is_ascii_digit()));
        if sci {
            self.pos += 1;
            let neg = self.pos < self.src.len() && self.src[self.pos] == b'-';
            if neg || (self.pos < self.src.len() && self.src[self.pos] == b'+') {
                self.pos += 1;
            }
            let es = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            let Ok(e) = std::str::from_utf8(&self.src[es..self.pos]).unwrap().parse::<i64>() else {
                return self.err("malformed exponent");
            };
            exp10 += if neg { -e } else { e };
        }
        Ok(Expr::Num(pow10(exp10) * BigRational::from_integer(digits)))
    }
}

fn pow10(e: i64) -> BigRational {
    let p = BigInt::from(10).pow(e.unsigned_abs());
    if e >= 0 {
        BigRational::from_integer(p)
    } else {
        BigRational::new(BigInt::one(), p)
    }
}

/// Largest `s` with `s² | n` and the squarefree cofactor, for `n > 0`.
fn square_part(n: &BigInt) -> Option<(BigInt, i64)> {
    let v = n.to_u64()?;
    let mut s = 1u64;
    let mut rest = v;
    let mut p = 2u64;
    while p * p <= rest {
        while rest % (p * p) == 0 {
            rest /= p * p;
            s *= p;
        }
        p += 1;
    }
    Some((BigInt::from(s), i64::try_from(rest).ok()?))
}

// `d = 1` marks a value that is still purely rational.
fn quad_join(a: &Quadratic, b: &Quadratic) -> Option<(Quadratic, Quadratic)> {
    match (a.d, b.d) {
        (x, y) if x == y => Some((a.clone(), b.clone())),
        (1, y) => Some((Quadratic::rational(y, a.a.clone()), b.clone())),
        (x, 1) => Some((a.clone(), Quadratic::rational(x, b.a.clone()))),
        _ => None,
    }
}

impl Expr {
    pub fn parse(src: &str) -> Result<Expr> {
        let mut p = Parser { src: src.as_bytes(), pos: 0 };
        let e = p.sum()?;
        if p.peek().is_some() {
            return p.err("trailing input");
        }
        Ok(e)
    }

    /// Outward-rounded enclosure at `prec` bits.
    pub fn eval(&self, prec: u32) -> Result<Interval> {
        Ok(match self {
            Expr::Num(q) => Interval::from_rational(prec, q),
            Expr::Pi => Interval::pi(prec),
            Expr::E => Interval::e(prec),
            Expr::Phi => Interval::from_i64(prec, 5).sqrt().add(&Interval::one(prec)).div(&Interval::from_i64(prec, 2)),
            Expr::Sqrt(a) => {
                let v = a.eval(prec)?;
                if v.lo() < &0 {
                    return Err(Error::invalid(format!("sqrt of a possibly negative value {v}")));
                }
                v.sqrt()
            }
            Expr::Log(a) => {
                let v = a.eval(prec)?;
                if !v.certainly_positive() {
                    return Err(Error::invalid(format!("log of a value not certified positive {v}")));
                }
                v.ln()
            }
            Expr::Exp(a) => a.eval(prec)?.exp(),
            Expr::Neg(a) => a.eval(prec)?.neg(),
            Expr::Add(a, b) => a.eval(prec)?.add(&b.eval(prec)?),
            Expr::Sub(a, b) => a.eval(prec)?.sub(&b.eval(prec)?),
            Expr::Mul(a, b) => a.eval(prec)?.mul(&b.eval(prec)?),
            Expr::Div(a, b) => {
                let d = b.eval(prec)?;
                if d.contains_zero() {
                    return Err(Error::invalid("division by a value not certified nonzero"));
                }
                a.eval(prec)?.div(&d)
            }
            Expr::Pow(a, n) => {
                let v = a.eval(prec)?;
                if *n < 0 && v.contains_zero() {
                    return Err(Error::invalid("negative power of a value not certified nonzero"));
                }
                v.powi(*n)
            }
        })
    }

    /// Exact value when the expression is built from rationals with the four
    /// operations and integer powers only.
    pub fn eval_rational(&self) -> Option<BigRational> {
        match self {
            Expr::Num(q) => Some(q.clone()),
            Expr::Neg(a) => Some(-a.eval_rational()?),
            Expr::Add(a, b) => Some(a.eval_rational()? + b.eval_rational()?),
            Expr::Sub(a, b) => Some(a.eval_rational()? - b.eval_rational()?),
            Expr::Mul(a, b) => Some(a.eval_rational()? * b.eval_rational()?),
            Expr::Div(a, b) => {
                let d = b.eval_rational()?;
                if Zero::is_zero(&d) {
                    return None;
                }
                Some(a.eval_rational()? / d)
            }
            Expr::Pow(a, n) => {
                let v = a.eval_rational()?;
                if *n < 0 && Zero::is_zero(&v) {
                    return None;
                }
                Some(Pow::pow(v, *n as i32))
            }
            _ => None,
        }
    }

    /// Exact value in a single quadratic field ℚ(√d), if the expression lives
    /// in one. Pure rationals come back with `d = 1`.
    pub fn eval_quadratic(&self) -> Option<Quadratic> {
        let one = BigRational::one();
        match self {
            Expr::Num(q) => Some(Quadratic::rational(1, q.clone())),
            Expr::Phi => {
                let half = BigRational::new(1.into(), 2.into());
                Some(Quadratic::new(5, half.clone(), half))
            }
            Expr::Sqrt(a) => {
                let v = a.eval_quadratic()?;
                if v.d != 1 || v.a.is_negative() {
                    return None;
                }
                // √(p/q) = √(pq)/q
                let pq = v.a.numer() * v.a.denom();
                if pq.is_zero() {
                    return Some(Quadratic::rational(1, BigRational::zero()));
                }
                let (s, rest) = square_part(&pq)?;
                let coeff = BigRational::new(s, v.a.denom().clone());
                if rest == 1 {
                    Some(Quadratic::rational(1, coeff))
                } else {
                    Some(Quadratic::new(rest, BigRational::zero(), coeff))
                }
            }
            Expr::Neg(a) => {
                let v = a.eval_quadratic()?;
                Some(Quadratic::new(v.d, -v.a, -v.b))
            }
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                let (x, y) = quad_join(&a.eval_quadratic()?, &b.eval_quadratic()?)?;
                match self {
                    Expr::Add(..) => Some(x.add(&y)),
                    Expr::Sub(..) => Some(x.sub(&y)),
                    Expr::Mul(..) => Some(x.mul(&y)),
                    _ => {
                        if y.is_zero() {
                            None
                        } else {
                            Some(x.mul(&y.inv()))
                        }
                    }
                }
            }
            Expr::Pow(a, n) => {
                let v = a.eval_quadratic()?;
                if *n < 0 && v.is_zero() {
                    return None;
                }
                let base = if *n < 0 { v.inv() } else { v };
                let mut acc = Quadratic::rational(base.d, one);
                for _ in 0..n.unsigned_abs() {
                    acc = acc.mul(&base);
                }
                Some(acc)
            }
            _ => None,
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(q) => write!(f, "{q}"),
            Expr::Pi => write!(f, "pi"),
            Expr::E => write!(f, "e"),
            Expr::Phi => write!(f, "phi"),
            Expr::Sqrt(a) => write!(f, "sqrt({a})"),
            Expr::Log(a) => write!(f, "log({a})"),
            Expr::Exp(a) => write!(f, "exp({a})"),
            Expr::Neg(a) => write!(f, "-({a})"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "({a} * {b})"),
            Expr::Div(a, b) => write!(f, "({a} / {b})"),
            Expr::Pow(a, n) => write!(f, "({a})^{n}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_evaluates() {
        let e = Expr::parse("sqrt(2) * sqrt(2) - 2").unwrap();
        assert!(e.eval(128).unwrap().contains_zero());
        let g = Expr::parse("phi^2 - phi - 1").unwrap();
        assert!(g.eval(128).unwrap().contains_zero());
        let l = Expr::parse("log(exp(3))").unwrap();
        assert!(l.eval(128).unwrap().contains_f64(3.0) || l.eval(128).unwrap().width_f64() < 1e-30);
    }

    #[test]
    fn precedence_and_powers() {
        let e = Expr::parse("-2^2 + 10^-1*10").unwrap();
        assert_eq!(e.eval_rational().unwrap(), BigRational::from_integer((-3).into()));
        let d = Expr::parse("1.25e-2").unwrap();
        assert!(Expr::parse("2*e").unwrap().eval_rational().is_none());
        assert_eq!(d.eval_rational().unwrap(), BigRational::new(1.into(), 80.into()));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(Expr::parse("2 +"), Err(Error::Parse { .. })));
        assert!(matches!(Expr::parse("foo(2)"), Err(Error::Parse { .. })));
        assert!(Expr::parse("log(0)").unwrap().eval(64).is_err());
        assert!(Expr::parse("sqrt(-1)").unwrap().eval(64).is_err());
        assert!(matches!(Expr::parse("2^x"), Err(Error::Parse { .. })));
    }

    #[test]
    fn quadratic_exact() {
        let e = Expr::parse("phi^2").unwrap().eval_quadratic().unwrap();
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(e, Quadratic::new(5, BigRational::from_integer(1.into()) + &half, half));
        let s = Expr::parse("sqrt(8)/2").unwrap().eval_quadratic().unwrap();
        assert_eq!(s, Quadratic::new(2, BigRational::zero(), BigRational::one()));
        assert!(Expr::parse("sqrt(2)+sqrt(3)").unwrap().eval_quadratic().is_none());
    }
}
