//! Expression grammar:
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*      // '/' only by a nonzero constant
//! factor := base ('^' natural)?
//! base   := variable | integer | '(' expr ')' | '-' factor
//! ```
//!
//! Whitespace is ignored and implicit multiplication is rejected.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::{Field, Poly, Ring};
use crate::error::PolyError;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Op(char),
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, PolyError> {
    let bytes: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = bytes[start..i].iter().collect();
            out.push((start, Tok::Int(s.parse().unwrap())));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == '_') {
                i += 1;
            }
            out.push((start, Tok::Ident(bytes[start..i].iter().collect())));
        } else if "+-*/^()".contains(c) {
            out.push((i, Tok::Op(c)));
            i += 1;
        } else {
            return Err(PolyError::Syntax { pos: i, message: format!("unexpected character '{c}'") });
        }
    }
    Ok(out)
}

struct Parser<'a, K: Field> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    ring: &'a Ring<K>,
}

impl<K: Field> Parser<'_, K> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|t| t.0).unwrap_or(self.end)
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, PolyError> {
        Err(PolyError::Syntax { pos: self.offset(), message: message.into() })
    }

    fn expr(&mut self) -> Result<Poly<K>, PolyError> {
        let mut acc = self.term()?;
        while let Some(Tok::Op(c @ ('+' | '-'))) = self.peek() {
            let c = *c;
            self.pos += 1;
            let t = self.term()?;
            acc = if c == '+' { &acc + &t } else { &acc - &t };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Poly<K>, PolyError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Op('*')) => {
                    self.pos += 1;
                    let f = self.factor()?;
                    acc = &acc * &f;
                }
                Some(Tok::Op('/')) => {
                    self.pos += 1;
                    let at = self.offset();
                    let f = self.factor()?;
                    match f.as_constant() {
                        Some(c) => {
                            let inv = self.ring.field.inv(c).ok_or(PolyError::DivisionByZero)?;
                            acc = acc.scale(&inv);
                        }
                        None if f.is_zero() => return Err(PolyError::DivisionByZero),
                        None => {
                            return Err(PolyError::Syntax {
                                pos: at,
                                message: "division is only allowed by a nonzero constant".into(),
                            })
                        }
                    }
                }
                Some(Tok::Ident(_)) | Some(Tok::Int(_)) | Some(Tok::Op('(')) => {
                    return self.err("implicit multiplication is not allowed; use '*'");
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Poly<K>, PolyError> {
        let b = self.base()?;
        if let Some(Tok::Op('^')) = self.peek() {
            self.pos += 1;
            match self.peek().cloned() {
                Some(Tok::Int(n)) => {
                    let e: u32 = n.try_into().or_else(|_| self.err("exponent too large"))?;
                    self.pos += 1;
                    return Ok(b.pow(e));
                }
                _ => return self.err("expected a natural number exponent"),
            }
        }
        Ok(b)
    }

    fn base(&mut self) -> Result<Poly<K>, PolyError> {
        match self.peek().cloned() {
            Some(Tok::Ident(name)) => {
                let v = self.ring.vars.index_of(&name).ok_or(PolyError::UnknownVariable(name))?;
                self.pos += 1;
                Ok(Poly::var(self.ring, v))
            }
            Some(Tok::Int(n)) => {
                self.pos += 1;
                let c = self
                    .ring
                    .field
                    .from_rational(&BigRational::from_integer(n))
                    .expect("integers always map into the field");
                Ok(Poly::constant(self.ring, c))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                match self.peek() {
                    Some(Tok::Op(')')) => {
                        self.pos += 1;
                        Ok(e)
                    }
                    _ => self.err("expected ')'"),
                }
            }
            Some(Tok::Op('-')) => {
                self.pos += 1;
                Ok(-&self.factor()?)
            }
            Some(Tok::Op(c)) => self.err(format!("unexpected '{c}'")),
            None => self.err("unexpected end of input"),
        }
    }
}

pub(super) fn parse<K: Field>(text: &str, ring: &Ring<K>) -> Result<Poly<K>, PolyError> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, end: text.chars().count(), ring };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("unexpected trailing input");
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::super::{Monomial, PolyRing, PrimeField, Rationals, TermOrder, VarSet};
    use super::*;

    fn q2() -> Ring<Rationals> {
        PolyRing::new(VarSet::standard(2), Rationals, TermOrder::Grevlex)
    }

    #[test]
    fn reads_terms() {
        let r = q2();
        let f = parse("x1^2 - 2*x2", &r).unwrap();
        assert_eq!(f.num_terms(), 2);
        assert_eq!(f.coefficient(&Monomial::from_exponents(vec![2, 0])), Rationals.from_i64(1));
        assert_eq!(f.coefficient(&Monomial::from_exponents(vec![0, 1])), Rationals.from_i64(-2));
        assert!(parse("0", &r).unwrap().is_zero());
    }

    #[test]
    fn errors() {
        let r = q2();
        assert_eq!(parse("x3", &r), Err(PolyError::UnknownVariable("x3".into())));
        assert!(matches!(parse("2x1", &r), Err(PolyError::Syntax { pos: 1, .. })));
        assert!(matches!(parse("x1 +", &r), Err(PolyError::Syntax { .. })));
        assert!(matches!(parse("(x1", &r), Err(PolyError::Syntax { .. })));
        assert!(matches!(parse("x1 / x2", &r), Err(PolyError::Syntax { .. })));
        assert_eq!(parse("x1 / 0", &r), Err(PolyError::DivisionByZero));
        assert!(matches!(parse("x1 # 2", &r), Err(PolyError::Syntax { pos: 3, .. })));
    }

    #[test]
    fn unary_minus_and_powers() {
        let r = q2();
        assert_eq!(parse("-x1^2", &r).unwrap(), -&parse("x1*x1", &r).unwrap());
        assert_eq!(parse("(x1 - x2)^2", &r).unwrap(), parse("x1^2 - 2*x1*x2 + x2^2", &r).unwrap());
        assert_eq!(parse("--x1", &r).unwrap(), parse("x1", &r).unwrap());
    }

    #[test]
    fn rational_literals_round_trip() {
        let r = q2();
        let f = parse("3/4*x1 - 1/2", &r).unwrap();
        assert_eq!(f.to_string(), "3/4*x1 - 1/2");
        assert_eq!(parse(&f.to_string(), &r).unwrap(), f);
    }

    #[test]
    fn prime_field_reduces() {
        let r = PolyRing::new(VarSet::standard(2), PrimeField::new(7).unwrap(), TermOrder::Grevlex);
        let f = parse("8*x1 - 1", &r).unwrap();
        assert_eq!(f.to_string(), "x1 + 6");
        assert_eq!(parse("x1/2", &r).unwrap().to_string(), "4*x1");
    }
}
