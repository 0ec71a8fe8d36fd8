//! Text grammar for polynomials.
//!
//! ```text
//! expr   := ('-')? term (('+'|'-') term)*
//! term   := coef ('*' factor)* | factor ('*' factor)*
//! factor := var ('^' posint)?
//! coef   := int | int '/' posint
//! ```
//! Whitespace is insignificant. A single leading minus is accepted so that
//! printed polynomials with a negative leading term parse back.

use std::fmt;

use num::{BigInt, One, Zero};

use super::{Monomial, Poly, VarList};
use crate::exactlin::Q;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    /// Byte offset into the input.
    pub position: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at {}: {}", self.position, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
}

fn err(position: usize, message: impl Into<String>) -> ParseError {
    ParseError { position, message: message.into() }
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => i += 1,
            b'+' => {
                out.push((i, Tok::Plus));
                i += 1
            }
            b'-' => {
                out.push((i, Tok::Minus));
                i += 1
            }
            b'*' => {
                out.push((i, Tok::Star));
                i += 1
            }
            b'^' => {
                out.push((i, Tok::Caret));
                i += 1
            }
            b'/' => {
                out.push((i, Tok::Slash));
                i += 1
            }
            b'0'..=b'9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if i < bytes.len() && (bytes[i].is_ascii_alphabetic() || bytes[i] == b'_') {
                    return Err(err(start, "malformed literal"));
                }
                let n: BigInt = text[start..i].parse().map_err(|_| err(start, "malformed literal"))?;
                out.push((start, Tok::Int(n)));
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((start, Tok::Ident(text[start..i].to_string())));
            }
            _ => {
                let ch = text[i..].chars().next().unwrap_or('?');
                return Err(err(i, format!("unexpected character '{ch}'")));
            }
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: &'a [(usize, Tok)],
    pos: usize,
    end: usize,
    vars: &'a VarList,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn expr(&mut self) -> Result<Poly, ParseError> {
        let mut poly = Poly::zero(self.vars.clone());
        let mut sign_neg = false;
        if self.peek() == Some(&Tok::Minus) {
            sign_neg = true;
            self.pos += 1;
        }
        loop {
            let (m, c) = self.term()?;
            poly.add_term(m, if sign_neg { -c } else { c });
            match self.peek() {
                None => break,
                Some(Tok::Plus) => sign_neg = false,
                Some(Tok::Minus) => sign_neg = true,
                Some(_) => return Err(err(self.offset(), "expected '+' or '-'")),
            }
            self.pos += 1;
        }
        Ok(poly)
    }

    fn posint(&mut self, what: &str) -> Result<BigInt, ParseError> {
        let at = self.offset();
        match self.peek() {
            Some(Tok::Int(n)) if !n.is_zero() => {
                let n = n.clone();
                self.pos += 1;
                Ok(n)
            }
            Some(Tok::Int(_)) => Err(err(at, format!("{what} must be positive"))),
            _ => Err(err(at, format!("expected {what}"))),
        }
    }

    fn term(&mut self) -> Result<(Monomial, Q), ParseError> {
        let mut mono = vec![0u32; self.vars.len()];
        let mut coef = Q::one();
        let at = self.offset();
        match self.peek() {
            Some(Tok::Int(n)) => {
                let n = n.clone();
                self.pos += 1;
                if self.peek() == Some(&Tok::Slash) {
                    self.pos += 1;
                    let d = self.posint("denominator")?;
                    coef = Q::new(n, d);
                } else {
                    coef = Q::from_integer(n);
                }
            }
            Some(Tok::Ident(_)) => self.factor(&mut mono)?,
            _ => return Err(err(at, "expected a term")),
        }
        while self.peek() == Some(&Tok::Star) {
            self.pos += 1;
            self.factor(&mut mono)?;
        }
        Ok((mono, coef))
    }

    fn factor(&mut self, mono: &mut Monomial) -> Result<(), ParseError> {
        let at = self.offset();
        let name = match self.peek() {
            Some(Tok::Ident(s)) => s.clone(),
            _ => return Err(err(at, "expected a variable")),
        };
        self.pos += 1;
        let idx = self.vars.iter().position(|v| *v == name).ok_or_else(|| err(at, format!("unknown variable {name}")))?;
        let mut e: u32 = 1;
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            let eat = self.offset();
            let n = self.posint("exponent")?;
            e = u32::try_from(n).map_err(|_| err(eat, "exponent too large"))?;
        }
        mono[idx] = mono[idx].checked_add(e).ok_or_else(|| err(at, "exponent too large"))?;
        Ok(())
    }
}

/// Parses `text` over the given ordered variables.
pub fn parse_poly(text: &str, vars: &VarList) -> Result<Poly, ParseError> {
    let toks = tokenize(text)?;
    if toks.is_empty() {
        return Err(err(0, "empty input"));
    }
    let mut p = Parser { toks: &toks, pos: 0, end: text.len(), vars };
    p.expr()
}

/// Parses `text`, taking variables in order of first appearance.
pub fn parse_poly_auto(text: &str) -> Result<(Poly, VarList), ParseError> {
    let toks = tokenize(text)?;
    let mut names: Vec<String> = Vec::new();
    for (_, t) in &toks {
        if let Tok::Ident(s) = t {
            if !names.contains(s) {
                names.push(s.clone());
            }
        }
    }
    let vars: VarList = names.into();
    let poly = parse_poly(text, &vars)?;
    Ok((poly, vars))
}
