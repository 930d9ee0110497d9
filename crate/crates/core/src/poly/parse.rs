//! Recursive-descent parser for polynomial expressions.
//!
//! Grammar (whitespace is insignificant):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' INT)?
//! atom   := INT ('/' INT)? | IDENT | '(' expr ')'
//! ```
//!
//! Juxtaposition (`2x`, `x y`, `(x)(y)`) is rejected. The parser produces an
//! [`Expr`] tree that can be evaluated into any [`ExprTarget`]; commutative
//! polynomials, noncommutative polynomials and series all reuse it.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use super::{Poly, RingSpec};
use crate::Q;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax(String),
    UnknownVariable(String),
    BadExponent(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ParseError {
    pub kind: ParseErrorKind,
    /// Byte offset into the input.
    pub position: usize,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ParseErrorKind::Syntax(msg) => {
                write!(f, "syntax error at position {}: {msg}", self.position)
            }
            ParseErrorKind::UnknownVariable(v) => {
                write!(f, "unknown variable `{v}` at position {}", self.position)
            }
            ParseErrorKind::BadExponent(msg) => {
                write!(f, "bad exponent at position {}: {msg}", self.position)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Number(Q),
    Var { name: String, position: usize },
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
}

/// Something an [`Expr`] can be evaluated into.
pub trait ExprTarget: Sized {
    type Value;

    fn number(&self, q: Q) -> Self::Value;
    fn variable(&self, name: &str, position: usize) -> Result<Self::Value, ParseError>;
    fn add(&self, a: Self::Value, b: Self::Value) -> Self::Value;
    fn sub(&self, a: Self::Value, b: Self::Value) -> Self::Value;
    fn mul(&self, a: Self::Value, b: Self::Value) -> Self::Value;
    fn neg(&self, a: Self::Value) -> Self::Value;
    fn pow(&self, a: Self::Value, e: u32) -> Self::Value;
}

impl Expr {
    pub fn eval<T: ExprTarget>(&self, target: &T) -> Result<T::Value, ParseError> {
        Ok(match self {
            Expr::Number(q) => target.number(q.clone()),
            Expr::Var { name, position } => target.variable(name, *position)?,
            Expr::Neg(a) => target.neg(a.eval(target)?),
            Expr::Add(a, b) => target.add(a.eval(target)?, b.eval(target)?),
            Expr::Sub(a, b) => target.sub(a.eval(target)?, b.eval(target)?),
            Expr::Mul(a, b) => target.mul(a.eval(target)?, b.eval(target)?),
            Expr::Pow(a, e) => target.pow(a.eval(target)?, *e),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn describe(t: Option<&(Tok, usize)>) -> String {
    match t {
        None => "end of input".into(),
        Some((Tok::Int(n), _)) => format!("number `{n}`"),
        Some((Tok::Ident(s), _)) => format!("`{s}`"),
        Some((Tok::Plus, _)) => "`+`".into(),
        Some((Tok::Minus, _)) => "`-`".into(),
        Some((Tok::Star, _)) => "`*`".into(),
        Some((Tok::Slash, _)) => "`/`".into(),
        Some((Tok::Caret, _)) => "`^`".into(),
        Some((Tok::LParen, _)) => "`(`".into(),
        Some((Tok::RParen, _)) => "`)`".into(),
    }
}

fn syntax(position: usize, msg: impl Into<String>) -> ParseError {
    ParseError {
        kind: ParseErrorKind::Syntax(msg.into()),
        position,
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => i += 1,
            b'0'..=b'9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((Tok::Int(text[start..i].parse().unwrap()), start));
            }
            b'A'..=b'Z' | b'a'..=b'z' | b'_' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((Tok::Ident(text[start..i].to_string()), start));
            }
            _ => {
                let tok = match c {
                    b'+' => Tok::Plus,
                    b'-' => Tok::Minus,
                    b'*' => Tok::Star,
                    b'/' => Tok::Slash,
                    b'^' => Tok::Caret,
                    b'(' => Tok::LParen,
                    b')' => Tok::RParen,
                    _ => {
                        let ch = text[i..].chars().next().unwrap();
                        return Err(syntax(i, format!("unexpected character `{ch}`")));
                    }
                };
                out.push((tok, i));
                i += 1;
            }
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|(_, p)| *p).unwrap_or(self.end)
    }

    fn bump(&mut self) -> Option<(Tok, usize)> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(Tok::Minus) => {
                    self.bump();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Some(Tok::Int(_)) | Some(Tok::Ident(_)) | Some(Tok::LParen) => {
                    return Err(syntax(
                        self.here(),
                        "implicit multiplication is not allowed; write `*`",
                    ));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if let Some(Tok::Minus) = self.peek() {
            self.bump();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if let Some(Tok::Caret) = self.peek() {
            self.bump();
            let at = self.here();
            let e = match self.bump() {
                Some((Tok::Int(n), _)) => n.to_u32().ok_or_else(|| ParseError {
                    kind: ParseErrorKind::BadExponent(format!("exponent {n} is too large")),
                    position: at,
                })?,
                Some((Tok::Minus, _)) => {
                    return Err(ParseError {
                        kind: ParseErrorKind::BadExponent(
                            "exponent must be a nonnegative integer literal".into(),
                        ),
                        position: at,
                    })
                }
                other => {
                    return Err(ParseError {
                        kind: ParseErrorKind::BadExponent(format!(
                            "expected an integer literal, found {}",
                            describe(other.as_ref())
                        )),
                        position: at,
                    })
                }
            };
            if let Some(Tok::Caret) = self.peek() {
                return Err(syntax(
                    self.here(),
                    "chained `^` is ambiguous; use parentheses",
                ));
            }
            if let Some(Tok::Slash) = self.peek() {
                return Err(ParseError {
                    kind: ParseErrorKind::BadExponent("exponent must be an integer".into()),
                    position: self.here(),
                });
            }
            return Ok(Expr::Pow(Box::new(base), e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let at = self.here();
        match self.bump() {
            Some((Tok::Int(n), _)) => {
                if let Some(Tok::Slash) = self.peek() {
                    self.bump();
                    let dat = self.here();
                    match self.bump() {
                        Some((Tok::Int(d), _)) => {
                            if d.is_zero() {
                                return Err(syntax(dat, "zero denominator"));
                            }
                            Ok(Expr::Number(Q::new(n, d)))
                        }
                        other => Err(syntax(
                            dat,
                            format!(
                                "`/` is only allowed inside rational literals, found {}",
                                describe(other.as_ref())
                            ),
                        )),
                    }
                } else {
                    Ok(Expr::Number(Q::from_integer(n)))
                }
            }
            Some((Tok::Ident(name), p)) => Ok(Expr::Var { name, position: p }),
            Some((Tok::LParen, _)) => {
                let inner = self.expr()?;
                match self.bump() {
                    Some((Tok::RParen, _)) => Ok(inner),
                    other => Err(syntax(
                        other.as_ref().map(|(_, p)| *p).unwrap_or(self.end),
                        format!("expected `)`, found {}", describe(other.as_ref())),
                    )),
                }
            }
            Some((Tok::Slash, _)) => {
                Err(syntax(at, "`/` is only allowed inside rational literals"))
            }
            other => Err(syntax(
                at,
                format!(
                    "expected a number, variable or `(`, found {}",
                    describe(other.as_ref())
                ),
            )),
        }
    }
}

/// Parses text into an expression tree.
pub fn parse_expr(text: &str) -> Result<Expr, ParseError> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: text.len(),
    };
    let e = p.expr()?;
    if p.pos < p.toks.len() {
        let t = &p.toks[p.pos];
        let msg = match t.0 {
            Tok::RParen => "unbalanced `)`".to_string(),
            Tok::Slash => "`/` is only allowed inside rational literals".to_string(),
            _ => format!("unexpected {}", describe(Some(t))),
        };
        return Err(syntax(t.1, msg));
    }
    Ok(e)
}

struct PolyTarget<'a>(&'a Arc<RingSpec>);

impl ExprTarget for PolyTarget<'_> {
    type Value = Poly;

    fn number(&self, q: Q) -> Poly {
        Poly::constant(self.0, q)
    }

    fn variable(&self, name: &str, position: usize) -> Result<Poly, ParseError> {
        match self.0.index_of(name) {
            Some(i) => Ok(Poly::var(self.0, i)),
            None => Err(ParseError {
                kind: ParseErrorKind::UnknownVariable(name.to_string()),
                position,
            }),
        }
    }

    fn add(&self, a: Poly, b: Poly) -> Poly {
        a + b
    }

    fn sub(&self, a: Poly, b: Poly) -> Poly {
        a - b
    }

    fn mul(&self, a: Poly, b: Poly) -> Poly {
        a * b
    }

    fn neg(&self, a: Poly) -> Poly {
        -a
    }

    fn pow(&self, a: Poly, e: u32) -> Poly {
        a.pow(e)
    }
}

/// Parses a polynomial in the given ring.
pub fn parse_poly(text: &str, ring: &Arc<RingSpec>) -> Result<Poly, ParseError> {
    parse_expr(text)?.eval(&PolyTarget(ring))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::MonomialOrder;
    use proptest::prelude::*;

    fn ring() -> Arc<RingSpec> {
        RingSpec::new(&["x", "y", "z", "w"], MonomialOrder::GlobalDegRevLex).unwrap()
    }

    #[test]
    fn parses_ca1_potential() {
        let w = parse_poly("x^2 - y^4 + z*w", &ring()).unwrap();
        assert_eq!(w.len(), 3);
        assert_eq!(w.to_string(), "-y^4 + x^2 + z*w");
    }

    #[test]
    fn zero_and_identities() {
        assert!(parse_poly("0", &ring()).unwrap().is_zero());
        assert!(parse_poly("(x+y)^2 - x^2 - 2*x*y - y^2", &ring())
            .unwrap()
            .is_zero());
    }

    #[test]
    fn precedence() {
        let r = ring();
        // ^ binds tighter than unary minus
        assert_eq!(
            parse_poly("-x^2", &r).unwrap(),
            -parse_poly("x^2", &r).unwrap()
        );
        assert_eq!(
            parse_poly("2*-x", &r).unwrap(),
            parse_poly("-2*x", &r).unwrap()
        );
        assert_eq!(parse_poly("1/2*x", &r).unwrap().to_string(), "1/2*x");
        assert_eq!(
            parse_poly("x - y - z", &r).unwrap(),
            parse_poly("x - (y + z)", &r).unwrap()
        );
        assert_eq!(parse_poly("--x", &r).unwrap(), parse_poly("x", &r).unwrap());
    }

    #[test]
    fn errors_carry_positions() {
        let r = ring();
        let e = parse_poly("2x", &r).unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::Syntax(_)));
        assert_eq!(e.position, 1);

        let e = parse_poly("x + t", &r).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UnknownVariable("t".into()));
        assert_eq!(e.position, 4);

        let e = parse_poly("x^-1", &r).unwrap_err();
        assert!(matches!(e.kind, ParseErrorKind::BadExponent(_)));
        assert_eq!(e.position, 2);

        assert!(matches!(
            parse_poly("x^y", &r).unwrap_err().kind,
            ParseErrorKind::BadExponent(_)
        ));
        assert!(matches!(
            parse_poly("x^1/2", &r).unwrap_err().kind,
            ParseErrorKind::BadExponent(_)
        ));
        assert_eq!(parse_poly("(x + y", &r).unwrap_err().position, 6);
        assert_eq!(parse_poly("x + y)", &r).unwrap_err().position, 5);
        assert!(parse_poly("x / y", &r).is_err());
        assert!(parse_poly("", &r).is_err());
        assert!(parse_poly("1/0", &r).is_err());
        assert!(parse_poly("x $ y", &r).is_err());
        assert!(parse_poly("(x)(y)", &r).is_err());
    }

    fn small_poly() -> impl Strategy<Value = Poly> {
        prop::collection::vec(
            ((0u32..3, 0u32..3, 0u32..2, 0u32..2), -5i64..6, 1i64..4),
            0..6,
        )
        .prop_map(|terms| {
            let r = ring();
            Poly::from_terms(
                &r,
                terms.into_iter().map(|((a, b, c, d), n, den)| {
                    (
                        crate::poly::Monomial::new(vec![a, b, c, d]),
                        crate::qf(n, den),
                    )
                }),
            )
        })
    }

    proptest! {
        #[test]
        fn print_parse_round_trip(f in small_poly()) {
            let back = parse_poly(&f.to_string(), f.ring()).unwrap();
            prop_assert_eq!(back, f);
        }

        #[test]
        fn ring_axioms(a in small_poly(), b in small_poly(), c in small_poly()) {
            prop_assert_eq!((&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!((&a * &b) * &c, &a * &(&b * &c));
        }

        #[test]
        fn mixed_partials_commute(f in small_poly(), i in 0usize..4, j in 0usize..4) {
            let dij = f.derivative(i).unwrap().derivative(j).unwrap();
            let dji = f.derivative(j).unwrap().derivative(i).unwrap();
            prop_assert_eq!(dij, dji);
        }

        #[test]
        fn leibniz_rule(f in small_poly(), g in small_poly(), i in 0usize..4) {
            let lhs = (&f * &g).derivative(i).unwrap();
            let rhs = &f.derivative(i).unwrap() * &g + &f * &g.derivative(i).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
