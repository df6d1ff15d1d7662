//! Recursive-descent parser for Laurent polynomials, differential forms,
//! rational functions and scalars.
//!
//! ```text
//! expr    := ['+'|'-'] term (('+'|'-') term)*
//! term    := factor ('*' factor)*
//! factor  := number | var ['^' int] | gen ['^' int] | '(' expr ')' ['^' uint]
//! number  := digits ['/' digits]
//! var     := 't' digits | 't'
//! form    := [expr ['*']] 'd' '(' expr ')' ('^' 'd' '(' expr ')')*
//! ratfun  := expr ['/' term]
//! ```
//!
//! `gen` is the generator symbol of the declared extension field. Whitespace
//! is ignored between tokens; errors report the byte offset where parsing
//! stopped.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::laurent::{DifferentialForm, LaurentPoly, MultiIndex};
use crate::residue::RationalFunction;
use crate::scalar::{Field, Rational, Scalar};
use crate::upoly::UPoly;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub offset: usize,
    pub expected: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at byte {}: expected {}", self.offset, self.expected)
    }
}

impl std::error::Error for ParseError {}

/// Ambient data for parsing: the number of variables (inferred when `None`)
/// and the coefficient field.
#[derive(Debug, Clone, Default)]
pub struct Context {
    pub dim: Option<usize>,
    pub field: Field,
}

impl Context {
    pub fn new(dim: Option<usize>, field: Field) -> Self {
        Self { dim, field }
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    dim: usize,
    field: Field,
    var: &'a str,
    indexed: bool,
}

enum Ident {
    Var(usize),
    Gen,
    D,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str, dim: usize, field: Field) -> Self {
        Self { src: src.as_bytes(), pos: 0, dim, field, var: "t", indexed: true }
    }

    fn err<T>(&self, expected: impl Into<String>) -> Result<T> {
        Err(ParseError { offset: self.pos, expected: expected.into() }.into())
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
            self.err(format!("'{}'", c as char))
        }
    }

    fn expect_end(&mut self) -> Result<()> {
        if self.peek().is_some() {
            return self.err("end of input");
        }
        Ok(())
    }

    fn digits(&mut self) -> Option<BigInt> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return None;
        }
        std::str::from_utf8(&self.src[start..self.pos]).ok()?.parse().ok()
    }

    fn integer(&mut self) -> Result<i64> {
        self.skip_ws();
        let neg = if self.eat(b'-') {
            true
        } else {
            self.eat(b'+');
            false
        };
        self.skip_ws();
        let start = self.pos;
        match self.digits() {
            Some(v) => {
                let v: i64 = match i64::try_from(v) {
                    Ok(v) if v <= i64::from(i32::MAX) => v,
                    _ => {
                        self.pos = start;
                        return self.err("exponent of moderate size");
                    }
                };
                Ok(if neg { -v } else { v })
            }
            None => self.err("integer exponent"),
        }
    }

    fn number(&mut self) -> Result<Rational> {
        let num = match self.digits() {
            Some(v) => v,
            None => return self.err("number"),
        };
        if self.src.get(self.pos) == Some(&b'/') && self.src.get(self.pos + 1).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
            let den_at = self.pos;
            let den = self.digits().expect("digit checked");
            if den.is_zero() {
                self.pos = den_at;
                return self.err("nonzero denominator");
            }
            return Ok(Rational::new(num, den));
        }
        Ok(Rational::from_integer(num))
    }

    fn ident(&mut self) -> Result<Ident> {
        let start = self.pos;
        while self.pos < self.src.len() && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_') {
            self.pos += 1;
        }
        let word = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        if let Some(rest) = word.strip_prefix(self.var) {
            if rest.is_empty() {
                return Ok(Ident::Var(0));
            }
            if self.indexed && rest.bytes().all(|b| b.is_ascii_digit()) {
                let idx: usize = rest.parse().unwrap_or(0);
                if idx >= 1 && idx <= self.dim {
                    return Ok(Ident::Var(idx - 1));
                }
                self.pos = start;
                return self.err(format!("variable index between 1 and {}", self.dim));
            }
        }
        if self.field.symbol() == Some(word) {
            return Ok(Ident::Gen);
        }
        if word == "d" {
            return Ok(Ident::D);
        }
        self.pos = start;
        self.err("variable, generator or number")
    }

    fn constant(&self, c: Scalar) -> LaurentPoly {
        LaurentPoly::monomial(self.dim, self.field.clone(), c, MultiIndex::zero(self.dim))
    }

    fn factor(&mut self) -> Result<LaurentPoly> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(b')')?;
                if self.eat(b'^') {
                    let at = self.pos;
                    let k = self.integer()?;
                    if k < 0 {
                        self.pos = at;
                        return self.err("nonnegative exponent on a parenthesized group");
                    }
                    return Ok(inner.pow(k as u32));
                }
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let q = self.number()?;
                Ok(self.constant(Scalar::Rational(q)))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let at = self.pos;
                match self.ident()? {
                    Ident::Var(axis) => {
                        let e = if self.eat(b'^') { self.integer()? } else { 1 };
                        let mut exp = MultiIndex::zero(self.dim);
                        exp.0[axis] = e;
                        Ok(LaurentPoly::monomial(self.dim, self.field.clone(), Scalar::one(), exp))
                    }
                    Ident::Gen => {
                        let Field::Extension(ext) = &self.field else { unreachable!("generator without extension") };
                        let g = ext.generator();
                        let e = if self.eat(b'^') { self.integer()? } else { 1 };
                        let mut v = Scalar::one();
                        for _ in 0..e.unsigned_abs() {
                            v = &v * &g;
                        }
                        if e < 0 {
                            v = v.inv()?;
                        }
                        Ok(self.constant(v))
                    }
                    Ident::D => {
                        self.pos = at;
                        self.err("variable, generator or number")
                    }
                }
            }
            _ => self.err("variable, generator, number or '('"),
        }
    }

    fn at_differential(&mut self) -> bool {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        if rest.first() != Some(&b'd') {
            return false;
        }
        let after = rest.iter().skip(1).find(|b| !b.is_ascii_whitespace());
        matches!(after, Some(b'(')) && !rest.get(1).is_some_and(|b| b.is_ascii_alphanumeric() || *b == b'_')
    }

    fn term(&mut self) -> Result<LaurentPoly> {
        let mut acc = self.factor()?;
        loop {
            let save = self.pos;
            if !self.eat(b'*') {
                break;
            }
            if self.at_differential() {
                self.pos = save;
                break;
            }
            acc = acc.try_mul(&self.factor()?)?;
        }
        Ok(acc)
    }

    fn expr(&mut self) -> Result<LaurentPoly> {
        let mut acc = LaurentPoly::zero(self.dim, self.field.clone());
        let mut neg = if self.eat(b'-') {
            true
        } else {
            self.eat(b'+');
            false
        };
        loop {
            let t = self.term()?;
            acc = if neg { acc.try_sub(&t)? } else { acc.try_add(&t)? };
            neg = match self.peek() {
                Some(b'+') => false,
                Some(b'-') => true,
                _ => break,
            };
            self.pos += 1;
        }
        Ok(acc)
    }

    fn differential(&mut self) -> Result<LaurentPoly> {
        self.skip_ws();
        if !self.at_differential() {
            return self.err("d(...)");
        }
        self.pos += 1;
        self.expect(b'(')?;
        let e = self.expr()?;
        self.expect(b')')?;
        Ok(e)
    }
}

/// Largest `k` with `t<k>` appearing in the text (`t` counts as `t1`).
fn infer_dim(text: &str) -> usize {
    let bytes = text.as_bytes();
    let mut best = 1;
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i].is_ascii_alphabetic() {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            let word = &text[start..i];
            if let Some(rest) = word.strip_prefix('t') {
                if let Ok(k) = rest.parse::<usize>() {
                    best = best.max(k);
                }
            }
        } else {
            i += 1;
        }
    }
    best
}

/// Parses a Laurent polynomial such as `3/2*t1^-2*t2^3 + (1+x)*t2`.
pub fn parse_laurent(text: &str, ctx: &Context) -> Result<LaurentPoly> {
    let dim = ctx.dim.unwrap_or_else(|| infer_dim(text));
    let mut p = Parser::new(text, dim, ctx.field.clone());
    let v = p.expr()?;
    p.expect_end()?;
    Ok(v)
}

/// Parses `f_0 d(f_1) ^ ... ^ d(f_n)`; a missing `f_0` means `1`.
pub fn parse_form(text: &str, ctx: &Context) -> Result<DifferentialForm> {
    let n_diff = {
        let mut probe = Parser::new(text, usize::MAX, ctx.field.clone());
        let mut count = 0;
        while probe.pos < probe.src.len() {
            if probe.at_differential() && (probe.pos == 0 || !probe.src[probe.pos - 1].is_ascii_alphanumeric()) {
                count += 1;
            }
            probe.pos += 1;
        }
        count
    };
    let dim = ctx.dim.unwrap_or_else(|| n_diff.max(infer_dim(text)));
    let mut p = Parser::new(text, dim, ctx.field.clone());
    let f0 = if p.at_differential() {
        p.constant(Scalar::one())
    } else {
        let f = p.expr()?;
        p.eat(b'*');
        f
    };
    let mut args = vec![p.differential()?];
    while p.eat(b'^') {
        args.push(p.differential()?);
    }
    p.expect_end()?;
    if args.len() != dim {
        p.pos = 0;
        return p.err(format!("{dim} differentials, found {}", args.len()));
    }
    DifferentialForm::new(f0, args)
}

fn to_upoly(p: &LaurentPoly, shift: i64) -> Result<UPoly> {
    let mut coeffs: Vec<Rational> = Vec::new();
    for (e, c) in p.terms() {
        let k = (e.0[0] + shift) as usize;
        let q = c
            .as_rational()
            .ok_or_else(|| Error::InvalidArgument("rational functions have rational coefficients".into()))?;
        if coeffs.len() <= k {
            coeffs.resize(k + 1, Rational::zero());
        }
        coeffs[k] = q.clone();
    }
    Ok(UPoly::new(coeffs))
}

/// Parses `num / den` in the single variable `t`, e.g. `1/(t^2+1)` or `(t-1)/t^3`.
pub fn parse_rational_function(text: &str) -> Result<RationalFunction> {
    let mut p = Parser::new(text, 1, Field::Rational);
    let num = p.expr()?;
    let den_at = p.pos;
    let den = if p.eat(b'/') { p.term()? } else { p.constant(Scalar::one()) };
    p.expect_end()?;
    if den.is_zero() {
        p.pos = den_at;
        return p.err("nonzero denominator");
    }
    let low = num.min_exponent(0).unwrap_or(0).min(den.min_exponent(0).unwrap_or(0)).min(0);
    RationalFunction::new(to_upoly(&num, -low)?, to_upoly(&den, -low)?)
}

/// Parses a constant such as `-3/2`, `3+5*x` or `(1+x)^2` in `field`.
pub fn parse_scalar(text: &str, field: &Field) -> Result<Scalar> {
    let mut p = Parser::new(text, 1, field.clone());
    p.var = "\u{0}";
    p.indexed = false;
    let v = p.expr()?;
    p.expect_end()?;
    Ok(v.coeff(&MultiIndex::zero(1)))
}

/// Parses a polynomial in `symbol` with rational coefficients, e.g. `x^2+1`.
pub fn parse_univariate(text: &str, symbol: &str) -> Result<UPoly> {
    let mut p = Parser::new(text, 1, Field::Rational);
    p.var = symbol;
    p.indexed = false;
    let v = p.expr()?;
    p.expect_end()?;
    if v.min_exponent(0).is_some_and(|m| m < 0) {
        return Err(ParseError { offset: 0, expected: format!("a polynomial in {symbol}") }.into());
    }
    to_upoly(&v, 0)
}
