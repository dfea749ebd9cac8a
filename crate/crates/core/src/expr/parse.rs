//! Recursive-descent parser for the expression grammar:
//!
//! ```text
//! expr   := term (("+"|"-") term)*
//! term   := factor (("*"|"/") factor)*
//! factor := ["-"] atom ["^" exponent]
//! atom   := number | ident | func "(" expr ")" | "(" expr ")"
//! func   := "sin" | "cos" | "sqrt" | "exp" | "log"
//! exponent := ["-"] int | "(" expr ")"     (the latter must be rational)
//! ```
//!
//! Numbers may carry a decimal point and an `e` exponent; they are read exactly.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};


use super::{Expr, Func, Symbol};
use crate::error::{Error, Result};

/// Maps identifiers to coordinate symbols.
pub trait Resolver {
    fn resolve(&self, name: &str) -> Result<Symbol>;
}

pub const RESERVED: [&str; 6] = ["pi", "sin", "cos", "sqrt", "exp", "log"];

/// Parses `text` into a canonical expression over the resolver's coordinates.
pub fn parse_expr(text: &str, resolver: &dyn Resolver) -> Result<Expr> {
    let mut p = Parser { chars: text.char_indices().collect(), i: 0, len: text.len(), resolver };
    let e = p.expr()?;
    p.skip_ws();
    if p.i < p.chars.len() {
        return Err(p.error(format!("unexpected `{}`", p.chars[p.i].1)));
    }
    Ok(e)
}

struct Parser<'a> {
    chars: Vec<(usize, char)>,
    i: usize,
    len: usize,
    resolver: &'a dyn Resolver,
}

impl Parser<'_> {
    fn pos(&self) -> usize {
        self.chars.get(self.i).map_or(self.len, |c| c.0)
    }

    fn error(&self, msg: impl Into<String>) -> Error {
        Error::Syntax { pos: self.pos(), msg: msg.into() }
    }

    fn skip_ws(&mut self) {
        while self.i < self.chars.len() && self.chars[self.i].1.is_whitespace() {
            self.i += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.i).map(|c| c.1)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            let msg = match self.peek() {
                Some(d) => format!("expected `{c}`, found `{d}`"),
                None => format!("expected `{c}`, found end of input"),
            };
            Err(self.error(msg))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut terms = vec![self.term()?];
        loop {
            if self.eat('+') {
                terms.push(self.term()?);
            } else if self.eat('-') {
                terms.push(-self.term()?);
            } else {
                break;
            }
        }
        Ok(Expr::add(terms))
    }

    fn term(&mut self) -> Result<Expr> {
        let mut acc = self.factor()?;
        loop {
            if self.eat('*') {
                acc = acc * self.factor()?;
            } else if self.eat('/') {
                acc = acc / self.factor()?;
            } else {
                break;
            }
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Expr> {
        let neg = self.eat('-');
        let mut base = self.atom()?;
        if self.eat('^') {
            let q = self.exponent()?;
            base = base.pow(q);
        }
        Ok(if neg { -base } else { base })
    }

    fn exponent(&mut self) -> Result<BigRational> {
        if self.eat('(') {
            let start = self.pos();
            let e = self.expr()?;
            self.expect(')')?;
            return e.as_rational().cloned().ok_or(Error::Syntax { pos: start, msg: "exponent must be a rational constant".into() });
        }
        let neg = self.eat('-');
        let q = BigRational::from_integer(self.integer()?);
        Ok(if neg { -q } else { q })
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.i;
        while self.i < self.chars.len() && self.chars[self.i].1.is_ascii_digit() {
            self.i += 1;
        }
        if start == self.i {
            return Err(self.error("expected an integer"));
        }
        let s: String = self.chars[start..self.i].iter().map(|c| c.1).collect();
        Ok(s.parse().expect("digits"))
    }

    fn number(&mut self) -> Result<Expr> {
        let int = self.integer()?;
        let mut value = BigRational::from_integer(int);
        if self.i < self.chars.len() && self.chars[self.i].1 == '.' {
            self.i += 1;
            let mut scale = BigInt::one();
            let mut frac = BigInt::zero();
            while self.i < self.chars.len() && self.chars[self.i].1.is_ascii_digit() {
                frac = frac * 10 + self.chars[self.i].1.to_digit(10).unwrap();
                scale *= 10;
                self.i += 1;
            }
            value += BigRational::new(frac, scale);
        }
        if self.i < self.chars.len() && matches!(self.chars[self.i].1, 'e' | 'E') {
            let save = self.i;
            self.i += 1;
            let neg = if self.i < self.chars.len() && matches!(self.chars[self.i].1, '-' | '+') {
                self.i += 1;
                self.chars[self.i - 1].1 == '-'
            } else {
                false
            };
            if self.i < self.chars.len() && self.chars[self.i].1.is_ascii_digit() {
                let e: u32 = self.integer()?.try_into().map_err(|_| self.error("exponent too large"))?;
                let p = BigRational::from_integer(num_traits::pow(BigInt::from(10), e as usize));
                value = if neg { value / p } else { value * p };
            } else {
                self.i = save;
            }
        }
        Ok(Expr::rational(value))
    }

    fn ident(&mut self) -> String {
        let start = self.i;
        while self.i < self.chars.len() && (self.chars[self.i].1.is_alphanumeric() || self.chars[self.i].1 == '_') {
            self.i += 1;
        }
        self.chars[start..self.i].iter().map(|c| c.1).collect()
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => self.number(),
            Some(c) if c.is_alphabetic() => {
                let start = self.pos();
                let name = self.ident();
                let func = match name.as_str() {
                    "sin" => Some(Some(Func::Sin)),
                    "cos" => Some(Some(Func::Cos)),
                    "exp" => Some(Some(Func::Exp)),
                    "log" => Some(Some(Func::Log)),
                    "sqrt" => Some(None),
                    _ => None,
                };
                if let Some(f) = func {
                    if self.peek() != Some('(') {
                        return Err(Error::Syntax { pos: start, msg: format!("function `{name}` needs an argument") });
                    }
                    self.expect('(')?;
                    let arg = self.expr()?;
                    self.expect(')')?;
                    return Ok(match f {
                        Some(f) => Expr::apply(f, &arg),
                        None => arg.sqrt(),
                    });
                }
                if name == "pi" {
                    return Ok(Expr::pi());
                }
                Ok(Expr::sym(&self.resolver.resolve(&name)?))
            }
            Some('(') => {
                self.i += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(c) => Err(self.error(format!("unexpected `{c}`"))),
            None => Err(self.error("unexpected end of input")),
        }
    }
}
