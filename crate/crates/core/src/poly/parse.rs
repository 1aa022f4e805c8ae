//! Polynomial expression grammar.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary ('*' unary)*
//! unary := '-' unary | power
//! power := atom ('^' uint)?
//! atom  := number ('/' number)? | ident | '(' expr ')'
//! ```
//!
//! Whitespace is ignored; juxtaposition (`2x`) is rejected.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use super::polynomial::Polynomial;
use crate::scalar::Field;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("parse error at position {pos}: {message}")]
pub struct ParseError {
    /// Byte offset into the source.
    pub pos: usize,
    pub message: String,
}

impl ParseError {
    fn new(pos: usize, message: impl Into<String>) -> Self {
        ParseError { pos, message: message.into() }
    }

    /// The source line with a caret under the offending position.
    pub fn caret(&self, src: &str) -> String {
        format!("{}\n{}^", src, " ".repeat(self.pos))
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Sym(char),
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Num(n) => write!(f, "number {n}"),
            Tok::Ident(s) => write!(f, "identifier '{s}'"),
            Tok::Sym(c) => write!(f, "'{c}'"),
            Tok::End => write!(f, "end of input"),
        }
    }
}

fn tokenize(src: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
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
            out.push((start, Tok::Num(src[start..i].parse().unwrap())));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((start, Tok::Ident(src[start..i].to_string())));
        } else if "+-*^/()".contains(c) {
            out.push((i, Tok::Sym(c)));
            i += 1;
        } else {
            let ch = src[i..].chars().next().unwrap();
            return Err(ParseError::new(i, format!("unexpected character '{ch}'")));
        }
    }
    out.push((src.len(), Tok::End));
    Ok(out)
}

/// Sorted, deduplicated identifiers appearing in `src`.
pub fn collect_variables(src: &str) -> Result<Vec<String>, ParseError> {
    let mut names: Vec<String> = tokenize(src)?
        .into_iter()
        .filter_map(|(_, t)| match t {
            Tok::Ident(s) => Some(s),
            _ => None,
        })
        .collect();
    names.sort();
    names.dedup();
    Ok(names)
}

/// Parses `src` as a polynomial in the given variables.
pub fn parse_polynomial<F: Field>(src: &str, vars: &[String]) -> Result<Polynomial<F>, ParseError> {
    let toks = tokenize(src)?;
    let mut p = Parser { toks, at: 0, vars };
    let e = p.expr()?;
    let (pos, t) = p.peek();
    match t {
        Tok::End => Ok(e),
        Tok::Sym(')') => Err(ParseError::new(pos, "unmatched ')'")),
        Tok::Num(_) | Tok::Ident(_) | Tok::Sym('(') => {
            Err(ParseError::new(pos, "implicit multiplication is not allowed; insert '*'"))
        }
        t => Err(ParseError::new(pos, format!("unexpected {t}"))),
    }
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    at: usize,
    vars: &'a [String],
}

impl<'a> Parser<'a> {
    fn peek(&self) -> (usize, Tok) {
        self.toks[self.at].clone()
    }

    fn bump(&mut self) -> (usize, Tok) {
        let t = self.peek();
        if t.1 != Tok::End {
            self.at += 1;
        }
        t
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek().1 == Tok::Sym(c) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn n(&self) -> usize {
        self.vars.len()
    }

    fn expr<F: Field>(&mut self) -> Result<Polynomial<F>, ParseError> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term<F: Field>(&mut self) -> Result<Polynomial<F>, ParseError> {
        let mut acc = self.unary()?;
        while self.eat('*') {
            acc = &acc * &self.unary()?;
        }
        Ok(acc)
    }

    fn unary<F: Field>(&mut self) -> Result<Polynomial<F>, ParseError> {
        if self.eat('-') {
            Ok(-self.unary()?)
        } else {
            self.power()
        }
    }

    fn power<F: Field>(&mut self) -> Result<Polynomial<F>, ParseError> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        match self.bump() {
            (pos, Tok::Num(e)) => {
                let e: u32 = e
                    .try_into()
                    .map_err(|_| ParseError::new(pos, "exponent too large"))?;
                Ok(base.pow(e))
            }
            (pos, t) => Err(ParseError::new(pos, format!("expected exponent, found {t}"))),
        }
    }

    fn atom<F: Field>(&mut self) -> Result<Polynomial<F>, ParseError> {
        match self.bump() {
            (pos, Tok::Num(numer)) => {
                let denom = if self.eat('/') {
                    match self.bump() {
                        (dpos, Tok::Num(d)) if d.is_zero() => {
                            return Err(ParseError::new(dpos, "zero denominator"))
                        }
                        (_, Tok::Num(d)) => d,
                        (dpos, t) => {
                            return Err(ParseError::new(dpos, format!("expected denominator, found {t}")))
                        }
                    }
                } else {
                    BigInt::from(1)
                };
                let c = F::from_bigint_ratio(&numer, &denom)
                    .ok_or_else(|| ParseError::new(pos, "literal out of range for scalar type"))?;
                Ok(Polynomial::constant(self.n(), c))
            }
            (pos, Tok::Ident(name)) => match self.vars.iter().position(|v| *v == name) {
                Some(i) => Ok(Polynomial::var(self.n(), i)),
                None => Err(ParseError::new(pos, format!("unknown variable '{name}'"))),
            },
            (_, Tok::Sym('(')) => {
                let e = self.expr()?;
                match self.bump() {
                    (_, Tok::Sym(')')) => Ok(e),
                    (pos, t) => Err(ParseError::new(pos, format!("expected ')', found {t}"))),
                }
            }
            (pos, t) => Err(ParseError::new(pos, format!("expected a number, variable or '(', found {t}"))),
        }
    }
}
