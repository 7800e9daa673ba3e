//! Parsing polynomials from text.
//!
//! The accepted grammar (whitespace-insensitive):
//!
//! ```text
//! poly    := ['-'] term { ('+'|'-') term }
//! term    := coeff [ '*' monoms ] | monoms
//! monoms  := factor { '*' factor }
//! factor  := var [ '^' uint ]
//! coeff   := uint [ '/' uint ]        ('/' in characteristic 0 only)
//! ```
//!
//! When every declared variable name is a single letter, the compact
//! SINGULAR-style notation is also accepted: digits directly after a
//! variable are its exponent and adjacent factors multiply, so `x3y`
//! means `x^3*y` and `3x2` means `3*x^2`.

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::monomial::Monomial;
use crate::poly::Polynomial;

struct Parser<'a> {
    text: &'a [u8],
    pos: usize,
    field: FieldSpec,
    vars: &'a [String],
    single_letter: bool,
}

/// Parse `text` into a polynomial over `field` in the declared variables.
pub fn parse_polynomial(text: &str, field: FieldSpec, vars: &[String]) -> Result<Polynomial> {
    if vars.is_empty() {
        return Err(Error::InvalidInput("no variables declared".into()));
    }
    {
        let mut seen = std::collections::HashSet::new();
        for v in vars {
            if v.is_empty() || !v.bytes().next().unwrap().is_ascii_alphabetic() {
                return Err(Error::InvalidInput(format!("bad variable name `{v}`")));
            }
            if !seen.insert(v) {
                return Err(Error::InvalidInput(format!("duplicate variable `{v}`")));
            }
        }
    }
    let mut p = Parser {
        text: text.as_bytes(),
        pos: 0,
        field,
        vars,
        single_letter: vars.iter().all(|v| v.len() == 1),
    };
    let poly = p.parse_poly()?;
    p.skip_ws();
    if p.pos != p.text.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(poly)
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> Error {
        Error::SyntaxError {
            position: self.pos,
            message: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.text.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek()?;
        self.pos += 1;
        Some(c)
    }

    fn parse_poly(&mut self) -> Result<Polynomial> {
        let mut acc = Polynomial::zero(self.field, self.vars.len());
        let mut negate = false;
        if self.peek() == Some(b'-') {
            self.bump();
            negate = true;
        }
        loop {
            let term = self.parse_term()?;
            let term = if negate { term.neg() } else { term };
            acc = acc.add(&term)?;
            match self.peek() {
                Some(b'+') => {
                    self.bump();
                    negate = false;
                }
                Some(b'-') => {
                    self.bump();
                    negate = true;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn parse_term(&mut self) -> Result<Polynomial> {
        let c = self.peek().ok_or_else(|| self.err("expected a term"))?;
        let coeff = if c.is_ascii_digit() {
            let k = self.parse_coeff()?;
            // Explicit '*' or (single-letter mode) a directly following
            // variable both continue the term.
            match self.peek() {
                Some(b'*') => {
                    self.bump();
                    k
                }
                Some(c2) if self.single_letter && c2.is_ascii_alphabetic() => k,
                _ => return Ok(Polynomial::constant(self.field, self.vars.len(), k)),
            }
        } else {
            self.field.one()
        };
        let m = self.parse_monoms()?;
        Ok(Polynomial::term(self.field, m, coeff))
    }

    fn parse_uint(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.text.len() && self.text[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected a number"));
        }
        std::str::from_utf8(&self.text[start..self.pos])
            .unwrap()
            .parse::<u64>()
            .map_err(|_| self.err("number too large"))
    }

    fn parse_coeff(&mut self) -> Result<Scalar> {
        let num = self.parse_uint()?;
        if self.peek() == Some(b'/') {
            if !self.field.is_rational() {
                return Err(self.err("fractional coefficients need characteristic 0"));
            }
            self.bump();
            let den = self.parse_uint()?;
            if den == 0 {
                return Err(Error::DivisionByZeroInCoefficient);
            }
            return self.field.from_fraction(num as i64, den as i64);
        }
        Ok(match self.field.characteristic() {
            0 => self.field.from_integer(num as i64),
            p => self.field.from_integer((num % p) as i64),
        })
    }

    fn parse_monoms(&mut self) -> Result<Monomial> {
        let mut m = self.parse_factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.bump();
                    m = m.mul(&self.parse_factor()?);
                }
                Some(c) if self.single_letter && c.is_ascii_alphabetic() => {
                    m = m.mul(&self.parse_factor()?);
                }
                _ => break,
            }
        }
        Ok(m)
    }

    fn parse_factor(&mut self) -> Result<Monomial> {
        let name = self.parse_var_name()?;
        let idx = self
            .vars
            .iter()
            .position(|v| *v == name)
            .ok_or(Error::UnknownVariable(name))?;
        let mut exp = 1u64;
        match self.peek() {
            Some(b'^') => {
                self.bump();
                exp = self.parse_uint()?;
            }
            // Compact notation: digits directly after a single-letter
            // variable form the exponent ("x23" = x^23).
            Some(c) if self.single_letter && c.is_ascii_digit() => {
                exp = self.parse_uint()?;
            }
            _ => {}
        }
        if exp > u16::MAX as u64 {
            return Err(self.err("exponent too large"));
        }
        Ok(Monomial::var(idx, self.vars.len()).pow(exp as u16))
    }

    fn parse_var_name(&mut self) -> Result<String> {
        self.skip_ws();
        let start = self.pos;
        if start >= self.text.len() || !self.text[start].is_ascii_alphabetic() {
            return Err(self.err("expected a variable"));
        }
        if self.single_letter {
            self.pos += 1;
        } else {
            while self.pos < self.text.len()
                && (self.text[self.pos].is_ascii_alphanumeric() || self.text[self.pos] == b'_')
            {
                self.pos += 1;
            }
        }
        Ok(std::str::from_utf8(&self.text[start..self.pos])
            .unwrap()
            .to_string())
    }
}
