//! Parser for the textual polynomial and operator formats.
//!
//! Scalars are Gaussian rationals like `3/4 + 1/2i`; powers use `^`;
//! multiplication is `*` or juxtaposition, so `2x`, `x(x-1)` and
//! `(5+7i)u^3 v^6` all parse. `Dj` denotes the j-th derivative, so a full
//! operator reads `(x^3+2x) D3 + x D2 + 1`. Expanded and factored forms are
//! both accepted.

use crate::diffop::{DiffOp, DiffOpError};
use crate::exact::ExactComplex;
use crate::newton::{BiPoly, NewtonError};
use crate::poly::Poly;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{pow::Pow, One, Zero};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub struct ParseError {
    pub pos: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at position {}: {}", self.pos, self.message)
    }
}

fn err<T>(pos: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        pos,
        message: message.into(),
    })
}

/// Commutative multivariate polynomial used as the parse result; the `D`
/// pseudo-variable marks derivative powers.
#[derive(Clone, Debug, PartialEq)]
struct MultiPoly {
    terms: BTreeMap<BTreeMap<char, u32>, ExactComplex>,
}

impl MultiPoly {
    fn constant(c: ExactComplex) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(BTreeMap::new(), c);
        }
        MultiPoly { terms }
    }

    fn var(v: char, exp: u32) -> Self {
        let mut key = BTreeMap::new();
        if exp > 0 {
            key.insert(v, exp);
        }
        let mut terms = BTreeMap::new();
        terms.insert(key, ExactComplex::one());
        MultiPoly { terms }
    }

    fn add(&self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = self.terms.clone();
        for (k, c) in &rhs.terms {
            let entry = out.entry(k.clone()).or_insert_with(ExactComplex::zero);
            *entry = &*entry + c;
            if entry.is_zero() {
                out.remove(k);
            }
        }
        MultiPoly { terms: out }
    }

    fn neg(&self) -> MultiPoly {
        MultiPoly {
            terms: self.terms.iter().map(|(k, c)| (k.clone(), -c)).collect(),
        }
    }

    fn mul(&self, rhs: &MultiPoly) -> MultiPoly {
        let mut out: BTreeMap<BTreeMap<char, u32>, ExactComplex> = BTreeMap::new();
        for (ka, ca) in &self.terms {
            for (kb, cb) in &rhs.terms {
                let mut key = ka.clone();
                for (&v, &e) in kb {
                    *key.entry(v).or_insert(0) += e;
                }
                let c = ca * cb;
                let entry = out.entry(key.clone()).or_insert_with(ExactComplex::zero);
                *entry = &*entry + &c;
                if entry.is_zero() {
                    out.remove(&key);
                }
            }
        }
        MultiPoly { terms: out }
    }

    fn pow(&self, mut e: u32) -> MultiPoly {
        let mut acc = MultiPoly::constant(ExactComplex::one());
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    fn variables(&self) -> Vec<char> {
        let mut vars: Vec<char> = self.terms.keys().flat_map(|k| k.keys().copied()).collect();
        vars.sort_unstable();
        vars.dedup();
        vars
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Number { value: BigRational, imaginary: bool },
    Var(char),
    Deriv(u32),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn lex(input: &str) -> Result<Vec<(usize, Token)>, ParseError> {
    let chars: Vec<char> = input.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let pos = i;
        match c {
            ' ' | '\t' | '\n' | '\r' => {
                i += 1;
            }
            '+' => {
                out.push((pos, Token::Plus));
                i += 1;
            }
            '-' | '\u{2212}' => {
                out.push((pos, Token::Minus));
                i += 1;
            }
            '*' => {
                out.push((pos, Token::Star));
                i += 1;
            }
            '^' => {
                out.push((pos, Token::Caret));
                i += 1;
            }
            '(' => {
                out.push((pos, Token::LParen));
                i += 1;
            }
            ')' => {
                out.push((pos, Token::RParen));
                i += 1;
            }
            '0'..='9' | '.' => {
                let mut value = lex_decimal(&chars, &mut i, pos)?;
                if i < chars.len() && chars[i] == '/' {
                    // rational literal a/b; back off if no digit follows
                    if i + 1 < chars.len() && (chars[i + 1].is_ascii_digit() || chars[i + 1] == '.')
                    {
                        i += 1;
                        let den_pos = i;
                        let den = lex_decimal(&chars, &mut i, den_pos)?;
                        if den.is_zero() {
                            return err(pos, "zero denominator in rational literal");
                        }
                        value /= den;
                    }
                }
                let imaginary = if i < chars.len() && chars[i] == 'i' {
                    i += 1;
                    true
                } else {
                    false
                };
                out.push((pos, Token::Number { value, imaginary }));
            }
            'i' => {
                out.push((
                    pos,
                    Token::Number {
                        value: BigRational::one(),
                        imaginary: true,
                    },
                ));
                i += 1;
            }
            'D' => {
                i += 1;
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let order = if start == i {
                    1
                } else {
                    let text: String = chars[start..i].iter().collect();
                    text.parse::<u32>().map_err(|_| ParseError {
                        pos,
                        message: format!("invalid derivative order `D{text}`"),
                    })?
                };
                out.push((pos, Token::Deriv(order)));
            }
            'a'..='z' => {
                out.push((pos, Token::Var(c)));
                i += 1;
            }
            _ => return err(pos, format!("unexpected character `{c}`")),
        }
    }
    Ok(out)
}

fn lex_decimal(chars: &[char], i: &mut usize, pos: usize) -> Result<BigRational, ParseError> {
    let start = *i;
    while *i < chars.len() && chars[*i].is_ascii_digit() {
        *i += 1;
    }
    let int_part: String = chars[start..*i].iter().collect();
    let mut value = if int_part.is_empty() {
        BigRational::zero()
    } else {
        BigRational::from_integer(int_part.parse::<BigInt>().unwrap())
    };
    if *i < chars.len() && chars[*i] == '.' {
        *i += 1;
        let fstart = *i;
        while *i < chars.len() && chars[*i].is_ascii_digit() {
            *i += 1;
        }
        if fstart == *i && int_part.is_empty() {
            return err(pos, "malformed number");
        }
        let frac: String = chars[fstart..*i].iter().collect();
        if !frac.is_empty() {
            let numer = frac.parse::<BigInt>().unwrap();
            let denom = BigInt::from(10u32).pow(frac.len());
            value += BigRational::new(numer, denom);
        }
    }
    Ok(value)
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    idx: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.idx).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.tokens.get(self.idx).map_or(self.end, |(p, _)| *p)
    }

    fn bump(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.idx).map(|(_, t)| t.clone());
        self.idx += 1;
        t
    }

    fn expr(&mut self) -> Result<MultiPoly, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.bump();
                    acc = acc.add(&self.term()?);
                }
                Some(Token::Minus) => {
                    self.bump();
                    acc = acc.add(&self.term()?.neg());
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<MultiPoly, ParseError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Token::Star) => {
                    self.bump();
                    acc = acc.mul(&self.unary()?);
                }
                Some(Token::Number { .. })
                | Some(Token::Var(_))
                | Some(Token::Deriv(_))
                | Some(Token::LParen) => {
                    acc = acc.mul(&self.unary()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<MultiPoly, ParseError> {
        let mut negate = false;
        loop {
            match self.peek() {
                Some(Token::Minus) => {
                    negate = !negate;
                    self.bump();
                }
                Some(Token::Plus) => {
                    self.bump();
                }
                _ => break,
            }
        }
        let v = self.power()?;
        Ok(if negate { v.neg() } else { v })
    }

    fn power(&mut self) -> Result<MultiPoly, ParseError> {
        let base = self.atom()?;
        if matches!(self.peek(), Some(Token::Caret)) {
            self.bump();
            let pos = self.pos();
            match self.bump() {
                Some(Token::Number { value, imaginary }) => {
                    if imaginary || !value.is_integer() || value < BigRational::zero() {
                        return err(pos, "exponent must be a nonnegative integer");
                    }
                    let e: u32 = value.to_integer().try_into().map_err(|_| ParseError {
                        pos,
                        message: "exponent too large".into(),
                    })?;
                    return Ok(base.pow(e));
                }
                _ => return err(pos, "expected integer exponent after `^`"),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<MultiPoly, ParseError> {
        let pos = self.pos();
        match self.bump() {
            Some(Token::Number { value, imaginary }) => {
                let c = if imaginary {
                    ExactComplex::new(BigRational::zero(), value)
                } else {
                    ExactComplex::from_real(value)
                };
                Ok(MultiPoly::constant(c))
            }
            Some(Token::Var(v)) => Ok(MultiPoly::var(v, 1)),
            Some(Token::Deriv(j)) => Ok(MultiPoly::var('D', j)),
            Some(Token::LParen) => {
                let inner = self.expr()?;
                match self.bump() {
                    Some(Token::RParen) => Ok(inner),
                    _ => err(pos, "unclosed parenthesis"),
                }
            }
            Some(t) => err(pos, format!("unexpected token {t:?}")),
            None => err(pos, "unexpected end of input"),
        }
    }
}

fn parse_multi(text: &str) -> Result<MultiPoly, ParseError> {
    let tokens = lex(text)?;
    if tokens.is_empty() {
        return err(0, "empty input");
    }
    let mut p = Parser {
        tokens,
        idx: 0,
        end: text.len(),
    };
    let v = p.expr()?;
    if p.idx != p.tokens.len() {
        return err(p.pos(), "trailing input");
    }
    Ok(v)
}

/// Parse a univariate polynomial in `x`.
pub fn parse_poly(text: &str) -> Result<Poly, ParseError> {
    let m = parse_multi(text)?;
    let vars = m.variables();
    if vars.iter().any(|&v| v != 'x') {
        return err(
            0,
            format!("expected a polynomial in x, found variables {vars:?}"),
        );
    }
    let mut coeffs: Vec<ExactComplex> = Vec::new();
    for (key, c) in &m.terms {
        let e = key.get(&'x').copied().unwrap_or(0) as usize;
        if coeffs.len() <= e {
            coeffs.resize(e + 1, ExactComplex::zero());
        }
        coeffs[e] = c.clone();
    }
    Ok(Poly::from_coeffs(coeffs))
}

/// Parse a bivariate polynomial in `u` and `v`.
pub fn parse_bipoly(text: &str) -> Result<BiPoly, ParseError> {
    let m = parse_multi(text)?;
    let vars = m.variables();
    if vars.iter().any(|&v| v != 'u' && v != 'v') {
        return err(
            0,
            format!("expected a polynomial in u and v, found variables {vars:?}"),
        );
    }
    let terms = m.terms.iter().map(|(key, c)| {
        let i = key.get(&'u').copied().unwrap_or(0);
        let j = key.get(&'v').copied().unwrap_or(0);
        ((i, j), c.clone())
    });
    BiPoly::from_terms(terms).map_err(|e: NewtonError| ParseError {
        pos: 0,
        message: e.to_string(),
    })
}

/// Parse a differential operator like `(x^3+2x) D3 + x D2 + 1`.
pub fn parse_diffop(text: &str) -> Result<DiffOp, ParseError> {
    let m = parse_multi(text)?;
    let vars = m.variables();
    if vars.iter().any(|&v| v != 'x' && v != 'D') {
        return err(
            0,
            format!("expected an operator in x and D, found variables {vars:?}"),
        );
    }
    let order = m
        .terms
        .keys()
        .map(|key| key.get(&'D').copied().unwrap_or(0))
        .max()
        .unwrap_or(0) as usize;
    let mut coeff_maps: Vec<Vec<ExactComplex>> = vec![Vec::new(); order + 1];
    for (key, c) in &m.terms {
        let j = key.get(&'D').copied().unwrap_or(0) as usize;
        let e = key.get(&'x').copied().unwrap_or(0) as usize;
        if coeff_maps[j].len() <= e {
            coeff_maps[j].resize(e + 1, ExactComplex::zero());
        }
        coeff_maps[j][e] = &coeff_maps[j][e] + c;
    }
    let coeffs: Vec<Poly> = coeff_maps.into_iter().map(Poly::from_coeffs).collect();
    DiffOp::new(coeffs).map_err(|e: DiffOpError| ParseError {
        pos: 0,
        message: e.to_string(),
    })
}

/// Rebuild an operator from its coefficient-string wire format
/// (lowest order first).
pub fn diffop_from_coeff_strings<S: AsRef<str>>(coeffs: &[S]) -> Result<DiffOp, ParseError> {
    let polys: Result<Vec<Poly>, ParseError> = coeffs
        .iter()
        .map(|s| {
            let text = s.as_ref().trim();
            if text.is_empty() || text == "0" {
                Ok(Poly::zero())
            } else {
                parse_poly(text)
            }
        })
        .collect();
    DiffOp::new(polys?).map_err(|e| ParseError {
        pos: 0,
        message: e.to_string(),
    })
}
