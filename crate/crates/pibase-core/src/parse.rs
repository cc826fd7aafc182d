//! Parser for the ASCII expression grammar.
//!
//! ```text
//! expr   := term ('+' term)*            left associative
//! term   := power ('*' power)*          left associative
//! power  := factor ('^' power)?         right associative
//! factor := NAT | 'w' | 'w'NAT | '(' expr ')'
//! ```
//!
//! `^` is supported where it stays inside the notation system: `w ^ e` for an
//! arbitrary exponent (that is the normal-form constructor), and `b ^ n` for
//! a finite natural `n` (iterated multiplication). General ordinal
//! exponentiation is deliberately not an operation of this crate.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::cardinal::{DEFAULT_MAX_LEVEL, HARD_MAX_LEVEL};
use crate::error::ParseError;
use crate::term::OrdinalTerm;

/// Largest finite exponent accepted by `b ^ n`.
const MAX_FINITE_POWER: u64 = 1 << 16;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Nat(BigUint),
    W(Option<u32>),
    Plus,
    Star,
    Caret,
    LParen,
    RParen,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer { src: src.as_bytes(), pos: 0 }
    }

    fn next_token(&mut self) -> Result<Option<(usize, Tok)>, ParseError> {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        if self.pos >= self.src.len() {
            return Ok(None);
        }
        let start = self.pos;
        let c = self.src[self.pos];
        let tok = match c {
            b'+' => {
                self.pos += 1;
                Tok::Plus
            }
            b'*' => {
                self.pos += 1;
                Tok::Star
            }
            b'^' => {
                self.pos += 1;
                Tok::Caret
            }
            b'(' => {
                self.pos += 1;
                Tok::LParen
            }
            b')' => {
                self.pos += 1;
                Tok::RParen
            }
            b'0'..=b'9' => {
                let digits = self.take_digits();
                Tok::Nat(digits)
            }
            b'w' => {
                self.pos += 1;
                if self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    let digits = self.take_digits();
                    let level = digits.to_u32().ok_or_else(|| {
                        ParseError::new(start, "atom level out of range")
                    })?;
                    Tok::W(Some(level))
                } else {
                    Tok::W(None)
                }
            }
            other => {
                return Err(ParseError::new(
                    start,
                    format!("unexpected character {:?}", other as char),
                ))
            }
        };
        Ok(Some((start, tok)))
    }

    fn take_digits(&mut self) -> BigUint {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).expect("digits are ascii");
        s.parse::<BigUint>().expect("digit string parses")
    }
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    idx: usize,
    max_level: u32,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&(usize, Tok)> {
        self.toks.get(self.idx)
    }

    fn bump(&mut self) -> Option<(usize, Tok)> {
        let t = self.toks.get(self.idx).cloned();
        if t.is_some() {
            self.idx += 1;
        }
        t
    }

    fn here(&self) -> usize {
        self.peek().map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn expr(&mut self) -> Result<OrdinalTerm, ParseError> {
        let mut acc = self.term()?;
        while matches!(self.peek(), Some((_, Tok::Plus))) {
            self.bump();
            let rhs = self.term()?;
            acc = acc.add(&rhs);
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<OrdinalTerm, ParseError> {
        let mut acc = self.power()?;
        while matches!(self.peek(), Some((_, Tok::Star))) {
            self.bump();
            let rhs = self.power()?;
            acc = acc.mul(&rhs);
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<OrdinalTerm, ParseError> {
        let base_pos = self.here();
        let base = self.factor()?;
        if !matches!(self.peek(), Some((_, Tok::Caret))) {
            return Ok(base);
        }
        let (caret_pos, _) = self.bump().expect("peeked caret");
        let exp = self.power()?;
        if base == OrdinalTerm::omega() {
            return Ok(OrdinalTerm::omega_pow(exp));
        }
        match exp.as_nat() {
            Some(n) => {
                let n = n.to_u64().filter(|&n| n <= MAX_FINITE_POWER).ok_or_else(|| {
                    ParseError::new(caret_pos, format!("finite exponent above {MAX_FINITE_POWER}"))
                })?;
                Ok(finite_power(&base, n))
            }
            None => Err(ParseError::new(
                base_pos,
                "unsupported power: use w^e, or a finite exponent",
            )),
        }
    }

    fn factor(&mut self) -> Result<OrdinalTerm, ParseError> {
        match self.bump() {
            None => Err(ParseError::new(self.end, "unexpected end of input")),
            Some((_, Tok::Nat(n))) => Ok(OrdinalTerm::from_nat(n)),
            Some((pos, Tok::W(level))) => match level {
                None => Ok(OrdinalTerm::omega()),
                Some(0) => Err(ParseError::new(pos, "w0 is not an atom; write w")),
                Some(k) if k > self.max_level => Err(ParseError::new(
                    pos,
                    format!("atom level {k} above maxLevel {}", self.max_level),
                )),
                Some(k) => Ok(OrdinalTerm::atom(k)),
            },
            Some((_, Tok::LParen)) => {
                let inner = self.expr()?;
                match self.bump() {
                    Some((_, Tok::RParen)) => Ok(inner),
                    Some((pos, _)) => Err(ParseError::new(pos, "expected )")),
                    None => Err(ParseError::new(self.end, "unclosed (")),
                }
            }
            Some((pos, tok)) => {
                Err(ParseError::new(pos, format!("unexpected token {tok:?}")))
            }
        }
    }
}

fn finite_power(base: &OrdinalTerm, n: u64) -> OrdinalTerm {
    let mut acc = OrdinalTerm::one();
    // n is small; plain iteration keeps the left-to-right product order exact.
    for _ in 0..n {
        acc = acc.mul(base);
    }
    acc
}

/// Parses an expression with the default atom-level bound.
pub fn parse(src: &str) -> Result<OrdinalTerm, ParseError> {
    parse_with_max_level(src, DEFAULT_MAX_LEVEL)
}

/// Parses an expression, rejecting atoms above `max_level`.
pub fn parse_with_max_level(src: &str, max_level: u32) -> Result<OrdinalTerm, ParseError> {
    let max_level = max_level.min(HARD_MAX_LEVEL);
    let mut lexer = Lexer::new(src);
    let mut toks = Vec::new();
    while let Some(t) = lexer.next_token()? {
        toks.push(t);
    }
    let mut p = Parser { toks, idx: 0, max_level, end: src.len() };
    let t = p.expr()?;
    if let Some((pos, tok)) = p.peek() {
        return Err(ParseError::new(*pos, format!("trailing input {tok:?}")));
    }
    if t.as_nat().map(|n| n.is_zero()).unwrap_or(false) && !t.is_zero() {
        unreachable!("zero normalizes to the empty sum");
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::Monomial;

    #[test]
    fn grammar_examples() {
        // w^2 + w*3 + 5
        let t = parse("w^2+w*3+5").unwrap();
        assert_eq!(t.to_string(), "w^2 + w*3 + 5");
        assert_eq!(parse("0").unwrap(), OrdinalTerm::zero());
        let t = parse("w1*2+w").unwrap();
        let expected = OrdinalTerm::from_monomials(vec![
            Monomial::new(OrdinalTerm::atom(1), 2u32),
            Monomial::new(OrdinalTerm::one(), 1u32),
        ]);
        assert_eq!(t, expected);
    }

    #[test]
    fn parse_normalizes() {
        // non-canonical input still parses to canonical form
        assert_eq!(parse("1+w").unwrap(), OrdinalTerm::omega());
        assert_eq!(parse("w^w1").unwrap(), OrdinalTerm::atom(1));
        assert_eq!(parse("w1^2").unwrap().to_string(), "w^(w1*2)");
        assert_eq!(parse("(w+1)*2").unwrap().to_string(), "w*2 + 1");
    }

    #[test]
    fn errors_carry_positions() {
        let err = parse("w^2 + $").unwrap_err();
        assert_eq!(err.pos, 6);
        let err = parse("w9").unwrap_err();
        assert!(err.msg.contains("maxLevel"));
        assert!(parse("w0").is_err());
        assert!(parse("(w+1)^w").is_err());
        assert!(parse("w+").is_err());
    }

    #[test]
    fn caret_is_right_associative() {
        // w^w^2 = w^(w^2)
        let t = parse("w^w^2").unwrap();
        assert_eq!(t, OrdinalTerm::omega_pow(parse("w^2").unwrap()));
    }
}
