//! Parser for integer polynomial literals such as `"t^2 + 1"` or
//! `"x^5 + 3*t*x - (t - 1)^2"`.
//!
//! Accepted syntax: integer literals, the variables allowed by the caller,
//! `+`, `-` (binary and unary), `*`, `^` with a nonnegative integer
//! exponent, parentheses, and implicit multiplication by juxtaposition
//! (`2t`, `3x^2`, `(t+1)(t-1)`).

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::poly::{BiPoly, IntPoly};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("unexpected character {found:?} at offset {at}")]
    Unexpected { found: char, at: usize },
    #[error("unexpected end of input")]
    Eof,
    #[error("variable {var:?} is not allowed here (allowed: {allowed})")]
    Variable { var: char, allowed: String },
    #[error("exponent too large at offset {at}")]
    Exponent { at: usize },
    #[error("polynomial in x is required to have constant coefficients in x only")]
    NotUnivariate,
}

/// Sparse polynomial in two variables keyed by `(deg_x, deg_t)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
struct Sparse(BTreeMap<(u32, u32), BigInt>);

impl Sparse {
    fn constant(c: BigInt) -> Self {
        let mut m = BTreeMap::new();
        if !c.is_zero() {
            m.insert((0, 0), c);
        }
        Sparse(m)
    }

    fn var(is_x: bool) -> Self {
        let mut m = BTreeMap::new();
        m.insert(if is_x { (1, 0) } else { (0, 1) }, BigInt::one());
        Sparse(m)
    }

    fn add(mut self, rhs: &Sparse, sign: i8) -> Self {
        for (k, v) in &rhs.0 {
            let e = self.0.entry(*k).or_default();
            if sign < 0 {
                *e -= v;
            } else {
                *e += v;
            }
        }
        self.0.retain(|_, v| !v.is_zero());
        self
    }

    fn mul(&self, rhs: &Sparse) -> Self {
        let mut out: BTreeMap<(u32, u32), BigInt> = BTreeMap::new();
        for ((a, b), u) in &self.0 {
            for ((c, d), v) in &rhs.0 {
                *out.entry((a + c, b + d)).or_default() += u * v;
            }
        }
        out.retain(|_, v| !v.is_zero());
        Sparse(out)
    }

    fn neg(self) -> Self {
        Sparse(self.0.into_iter().map(|(k, v)| (k, -v)).collect())
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    allowed: &'a [char],
}

const MAX_EXPONENT: u32 = 64;

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Sparse, ParseError> {
        let mut acc = self.term()?;
        while let Some(c) = self.peek() {
            match c {
                b'+' => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?, 1);
                }
                b'-' => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?, -1);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Sparse, ParseError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = acc.mul(&self.unary()?);
                }
                // juxtaposition
                Some(c) if c == b'(' || c.is_ascii_alphanumeric() => {
                    acc = acc.mul(&self.power()?);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Sparse, ParseError> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(self.unary()?.neg())
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Sparse, ParseError> {
        let base = self.primary()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let at = self.pos;
            let e = self.integer()?;
            let e: u32 = e
                .try_into()
                .ok()
                .filter(|&e| e <= MAX_EXPONENT)
                .ok_or(ParseError::Exponent { at })?;
            let mut acc = Sparse::constant(BigInt::one());
            for _ in 0..e {
                acc = acc.mul(&base);
            }
            return Ok(acc);
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<BigInt, ParseError> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return match self.src.get(self.pos) {
                Some(&c) => Err(ParseError::Unexpected {
                    found: c as char,
                    at: self.pos,
                }),
                None => Err(ParseError::Eof),
            };
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(digits.parse().expect("decimal digits"))
    }

    fn primary(&mut self) -> Result<Sparse, ParseError> {
        match self.peek() {
            None => Err(ParseError::Eof),
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                match self.peek() {
                    Some(b')') => {
                        self.pos += 1;
                        Ok(e)
                    }
                    Some(c) => Err(ParseError::Unexpected {
                        found: c as char,
                        at: self.pos,
                    }),
                    None => Err(ParseError::Eof),
                }
            }
            Some(c) if c.is_ascii_digit() => Ok(Sparse::constant(self.integer()?)),
            Some(c) if c.is_ascii_alphabetic() => {
                let var = c as char;
                if !self.allowed.contains(&var) {
                    return Err(ParseError::Variable {
                        var,
                        allowed: self.allowed.iter().collect(),
                    });
                }
                self.pos += 1;
                Ok(Sparse::var(var == 'x'))
            }
            Some(c) => Err(ParseError::Unexpected {
                found: c as char,
                at: self.pos,
            }),
        }
    }
}

fn parse_sparse(src: &str, allowed: &[char]) -> Result<Sparse, ParseError> {
    let mut parser = Parser {
        src: src.as_bytes(),
        pos: 0,
        allowed,
    };
    let out = parser.expr()?;
    match parser.peek() {
        None => Ok(out),
        Some(c) => Err(ParseError::Unexpected {
            found: c as char,
            at: parser.pos,
        }),
    }
}

/// Parse a polynomial in the single variable `t`.
pub fn parse_t_poly(src: &str) -> Result<IntPoly, ParseError> {
    let sparse = parse_sparse(src, &['t'])?;
    let deg = sparse.0.keys().map(|&(_, j)| j as usize).max().unwrap_or(0);
    let mut coeffs = vec![BigInt::zero(); deg + 1];
    for ((_, j), v) in sparse.0 {
        coeffs[j as usize] = v;
    }
    Ok(IntPoly::from_coeffs(coeffs))
}

/// Parse a polynomial in `x` with coefficients in `Z[t]`.
pub fn parse_xt_poly(src: &str) -> Result<BiPoly, ParseError> {
    let sparse = parse_sparse(src, &['x', 't'])?;
    let dx = sparse.0.keys().map(|&(i, _)| i as usize).max().unwrap_or(0);
    let mut by_x: Vec<Vec<BigInt>> = vec![Vec::new(); dx + 1];
    for ((i, j), v) in sparse.0 {
        let row = &mut by_x[i as usize];
        if row.len() <= j as usize {
            row.resize(j as usize + 1, BigInt::zero());
        }
        row[j as usize] = v;
    }
    Ok(BiPoly::from_x_coeffs(
        by_x.into_iter().map(IntPoly::from_coeffs).collect(),
    ))
}
