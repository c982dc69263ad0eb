//! Text grammar for polynomials.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/' | <juxtaposition>) unary)*
//! unary  := '-' unary | '+' unary | power
//! power  := atom ('^' integer)?
//! atom   := integer | 'x' | 'y' | '(' expr ')'
//! ```
//!
//! Division is only allowed by nonzero constants, so `p/q` literals and
//! `1/2*x` both work. Whitespace is ignored.

use num_bigint::BigInt;

use super::BivarPoly;
use crate::arith::Field;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    X,
    Y,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn lex(s: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = s.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let tok = match c {
            ' ' | '\t' | '\n' | '\r' => {
                i += 1;
                continue;
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                out.push((start, Tok::Num(s[start..i].parse().expect("digits"))));
                continue;
            }
            'x' | 'X' => Tok::X,
            'y' | 'Y' => Tok::Y,
            '+' => Tok::Plus,
            '-' | '\u{2212}' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            _ => return Err(Error::Parse { pos: i, msg: format!("unexpected character {c:?}") }),
        };
        out.push((i, tok));
        i += c.len_utf8();
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
    field: Field,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |t| t.0)
    }

    fn err<T>(&self, msg: &str) -> Result<T> {
        Err(Error::Parse { pos: self.here(), msg: msg.to_string() })
    }

    fn expr(&mut self) -> Result<BivarPoly> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<BivarPoly> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    acc = acc.mul(&self.unary()?);
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    let at = self.here();
                    let d = self.unary()?;
                    let c = match (d.num_terms(), d.is_zero()) {
                        (_, true) => return Err(Error::Parse { pos: at, msg: "division by zero".into() }),
                        (1, _) if d.coeff(0, 0) != self.field.zero() => d.coeff(0, 0),
                        _ => return Err(Error::Parse { pos: at, msg: "division by a non-constant".into() }),
                    };
                    acc = acc.scale(&c.inv().ok_or(Error::Parse { pos: at, msg: "division by zero".into() })?);
                }
                Some(Tok::Num(_)) | Some(Tok::X) | Some(Tok::Y) | Some(Tok::LParen) => {
                    acc = acc.mul(&self.power()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<BivarPoly> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                Ok(self.unary()?.neg())
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<BivarPoly> {
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            match self.peek().cloned() {
                Some(Tok::Num(n)) => {
                    self.pos += 1;
                    let e: u32 = n.try_into().or_else(|_| self.err("exponent too large"))?;
                    Ok(base.pow(e))
                }
                _ => self.err("expected a nonnegative integer exponent"),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<BivarPoly> {
        let tok = match self.peek().cloned() {
            Some(t) => t,
            None => return self.err("unexpected end of input"),
        };
        self.pos += 1;
        match tok {
            Tok::Num(n) => Ok(BivarPoly::constant(self.field.bigint(&n))),
            Tok::X => Ok(BivarPoly::x(self.field)),
            Tok::Y => Ok(BivarPoly::y(self.field)),
            Tok::LParen => {
                let e = self.expr()?;
                if self.peek() != Some(&Tok::RParen) {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                Ok(e)
            }
            _ => {
                self.pos -= 1;
                self.err("expected a number, x, y or '('")
            }
        }
    }
}

/// Parse a polynomial over the given field.
pub fn parse_poly(s: &str, field: Field) -> Result<BivarPoly> {
    let toks = lex(s)?;
    if toks.is_empty() {
        return Err(Error::Parse { pos: 0, msg: "empty polynomial".into() });
    }
    let mut p = Parser { toks, pos: 0, end: s.len(), field };
    let out = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(out)
}
