//! Text input for polynomials.
//!
//! Accepts the canonical output form plus parentheses, e.g.
//! `(z10 - z01)^2*L + 1/2*c1^2`. Negative exponents and division are only
//! allowed where the divisor is a single term.

use std::sync::Arc;

use num_bigint::BigInt;

use super::mpoly::MPoly;
use super::{PolyError, Rational, VariableContext};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
}

fn tokenize(src: &str) -> Result<Vec<(usize, Tok)>, PolyError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let n: BigInt = src[start..i].parse().expect("digits");
            out.push((start, Tok::Num(n)));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((start, Tok::Ident(src[start..i].to_string())));
        } else if "+-*/^()".contains(c) {
            out.push((i, Tok::Op(c)));
            i += 1;
        } else {
            return Err(PolyError::Parse {
                pos: i,
                msg: format!("unexpected character '{c}'"),
            });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    ctx: &'a Arc<VariableContext>,
    toks: Vec<(usize, Tok)>,
    pos: usize,
    len: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map(|t| t.0).unwrap_or(self.len)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, PolyError> {
        Err(PolyError::Parse {
            pos: self.offset(),
            msg: msg.into(),
        })
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<MPoly, PolyError> {
        let mut acc = if self.eat('-') {
            -self.term()?
        } else {
            self.eat('+');
            self.term()?
        };
        loop {
            if self.eat('+') {
                acc = acc.checked_add(&self.term()?)?;
            } else if self.eat('-') {
                acc = acc.checked_sub(&self.term()?)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<MPoly, PolyError> {
        let mut acc = self.power()?;
        loop {
            if self.eat('*') {
                acc = acc.checked_mul(&self.power()?)?;
            } else if self.eat('/') {
                let d = self.power()?;
                acc = acc.checked_mul(&d.pow(-1)?)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn power(&mut self) -> Result<MPoly, PolyError> {
        let base = self.atom()?;
        if self.eat('^') {
            let neg = self.eat('-');
            let n = match self.peek() {
                Some(Tok::Num(n)) => {
                    let n = i32::try_from(n.clone()).or_else(|_| self.err("exponent too large"))?;
                    self.pos += 1;
                    n
                }
                _ => return self.err("expected integer exponent"),
            };
            base.pow(if neg { -n } else { n })
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<MPoly, PolyError> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(MPoly::constant(self.ctx, Rational::from_integer(n)))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                let v = self.ctx.require(&name)?;
                Ok(MPoly::var(self.ctx, v))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return self.err("expected ')'");
                }
                Ok(e)
            }
            Some(Tok::Op('-')) => {
                self.pos += 1;
                Ok(-self.power()?)
            }
            _ => self.err("expected number, variable or '('"),
        }
    }
}

impl MPoly {
    /// Parses a polynomial expression over the variables of `ctx`.
    pub fn parse(ctx: &Arc<VariableContext>, src: &str) -> Result<MPoly, PolyError> {
        let toks = tokenize(src)?;
        if toks.is_empty() {
            return Err(PolyError::Parse {
                pos: 0,
                msg: "empty expression".into(),
            });
        }
        let mut p = Parser {
            ctx,
            toks,
            pos: 0,
            len: src.len(),
        };
        let e = p.expr()?;
        if p.pos != p.toks.len() {
            return p.err("trailing input");
        }
        Ok(e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> Arc<VariableContext> {
        VariableContext::builder()
            .residue("z10")
            .residue("z01")
            .geometry("L", 1)
            .geometry("c1", 1)
            .geometry("c2", 2)
            .build()
            .unwrap()
    }

    #[test]
    fn parses_canonical_form() {
        let c = ctx();
        let p = MPoly::parse(&c, "3*L^2 + 2*L*c1 + c2").unwrap();
        assert_eq!(p.to_string(), "3*L^2 + 2*L*c1 + c2");
    }

    #[test]
    fn parses_parentheses_and_fractions() {
        let c = ctx();
        let p = MPoly::parse(&c, "(z10 - z01)^2 / 2").unwrap();
        assert_eq!(p.to_string(), "1/2*z10^2 - z10*z01 + 1/2*z01^2");
        let q = MPoly::parse(&c, "-3/4*z10^-2").unwrap();
        assert_eq!(q.to_string(), "-3/4*z10^-2");
    }

    #[test]
    fn rejects_bad_input() {
        let c = ctx();
        assert!(matches!(
            MPoly::parse(&c, "x + 1"),
            Err(PolyError::UnknownVariable(_))
        ));
        assert!(matches!(MPoly::parse(&c, "L +"), Err(PolyError::Parse { .. })));
        assert!(matches!(MPoly::parse(&c, ""), Err(PolyError::Parse { .. })));
        assert!(matches!(
            MPoly::parse(&c, "1/(z10 + z01)"),
            Err(PolyError::NonInvertible(_))
        ));
        assert!(matches!(MPoly::parse(&c, "L $ 2"), Err(PolyError::Parse { .. })));
    }
}
