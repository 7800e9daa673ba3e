//! Sparse multivariate polynomials with exact coefficients.
//!
//! A polynomial is a map from monomials to nonzero scalars, ordered by the
//! local degree ordering, so the *last* entry of the map is the leading
//! term (the constant term of a unit, the lowest-degree terms in general).
//! Power series germs are represented by their jets: every operation that
//! could grow degrees takes an explicit truncation bound.

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::monomial::Monomial;
use std::collections::BTreeMap;
use std::fmt;

/// Order of vanishing at the origin: the minimal total degree of a term,
/// or `Infinite` for the zero polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Order {
    Finite(u32),
    Infinite,
}

impl Order {
    pub fn finite(&self) -> Option<u32> {
        match self {
            Order::Finite(d) => Some(*d),
            Order::Infinite => None,
        }
    }
}

/// Default variable names: `x, y, z` for up to three variables and
/// `x1, ..., xn` beyond that.
pub fn default_var_names(nvars: usize) -> Vec<String> {
    if nvars <= 3 {
        ["x", "y", "z"][..nvars]
            .iter()
            .map(|s| s.to_string())
            .collect()
    } else {
        (1..=nvars).map(|i| format!("x{i}")).collect()
    }
}

/// A sparse polynomial over a fixed field in a fixed number of variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    field: FieldSpec,
    nvars: usize,
    terms: BTreeMap<Monomial, Scalar>,
}

impl Polynomial {
    pub fn zero(field: FieldSpec, nvars: usize) -> Self {
        Polynomial {
            field,
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(field: FieldSpec, nvars: usize, c: Scalar) -> Self {
        let mut p = Polynomial::zero(field, nvars);
        p.add_term(Monomial::one(nvars), c);
        p
    }

    pub fn one(field: FieldSpec, nvars: usize) -> Self {
        Polynomial::constant(field, nvars, field.one())
    }

    /// The monomial `x^alpha` with coefficient `c`.
    pub fn term(field: FieldSpec, m: Monomial, c: Scalar) -> Self {
        let mut p = Polynomial::zero(field, m.nvars());
        p.add_term(m, c);
        p
    }

    /// Single variable `x_i`.
    pub fn variable(field: FieldSpec, i: usize, nvars: usize) -> Self {
        Polynomial::term(field, Monomial::var(i, nvars), field.one())
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending map order; the leading term is the last one.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    /// Terms in descending order of the local ordering (leading first).
    pub fn terms_desc(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter().rev()
    }

    pub fn coeff(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(|| self.field.zero())
    }

    /// Leading monomial with respect to the local ordering.
    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.keys().next_back()
    }

    pub fn leading_coeff(&self) -> Option<&Scalar> {
        self.terms.values().next_back()
    }

    /// Minimal total degree of a term.
    pub fn order(&self) -> Order {
        self.terms
            .keys()
            .map(|m| m.degree())
            .min()
            .map_or(Order::Infinite, Order::Finite)
    }

    /// Maximal total degree of a term (`None` for the zero polynomial).
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    /// Add a single term in place, dropping the entry if it cancels.
    pub fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        debug_assert_eq!(m.nvars(), self.nvars);
        debug_assert_eq!(c.field(), self.field);
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get().add(&c);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    fn check_compatible(&self, other: &Polynomial) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(
                self.field.to_string(),
                other.field.to_string(),
            ));
        }
        if self.nvars != other.nvars {
            return Err(Error::ArityMismatch(self.nvars, other.nvars));
        }
        Ok(())
    }

    pub fn add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Polynomial {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = c.neg();
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.field, self.nvars);
        }
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = v.mul(c);
        }
        out
    }

    /// Rescale so the leading coefficient is 1; the zero polynomial is
    /// returned unchanged.
    pub fn monic(&self) -> Polynomial {
        match self.leading_coeff() {
            None => self.clone(),
            Some(c) if c.is_one() => self.clone(),
            Some(c) => self.scale(&c.inverse().expect("leading coefficient is nonzero")),
        }
    }

    /// Multiply by a single term `c * x^alpha`.
    pub fn mul_term(&self, m: &Monomial, c: &Scalar) -> Polynomial {
        let mut out = Polynomial::zero(self.field, self.nvars);
        if c.is_zero() {
            return out;
        }
        for (mm, cc) in &self.terms {
            out.terms.insert(mm.mul(m), cc.mul(c));
        }
        out
    }

    /// Full product (no truncation).
    pub fn mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.mul_truncated(other, u32::MAX)
    }

    /// Product with every term of total degree above `bound` dropped.
    pub fn mul_truncated(&self, other: &Polynomial, bound: u32) -> Result<Polynomial> {
        self.check_compatible(other)?;
        let mut out = Polynomial::zero(self.field, self.nvars);
        for (ma, ca) in &self.terms {
            if ma.degree() > bound {
                continue;
            }
            for (mb, cb) in &other.terms {
                if ma.degree() + mb.degree() > bound {
                    continue;
                }
                out.add_term(ma.mul(mb), ca.mul(cb));
            }
        }
        Ok(out)
    }

    /// Truncate to the `bound`-jet: drop all terms of degree > `bound`.
    pub fn jet(&self, bound: u32) -> Polynomial {
        let mut out = Polynomial::zero(self.field, self.nvars);
        for (m, c) in &self.terms {
            if m.degree() <= bound {
                out.terms.insert(m.clone(), c.clone());
            }
        }
        out
    }

    /// The homogeneous part of total degree `d`.
    pub fn homogeneous_part(&self, d: u32) -> Polynomial {
        let mut out = Polynomial::zero(self.field, self.nvars);
        for (m, c) in &self.terms {
            if m.degree() == d {
                out.terms.insert(m.clone(), c.clone());
            }
        }
        out
    }

    /// Formal partial derivative with respect to `x_i`.
    pub fn partial_derivative(&self, i: usize) -> Result<Polynomial> {
        if i >= self.nvars {
            return Err(Error::IndexOutOfRange {
                index: i,
                nvars: self.nvars,
            });
        }
        let mut out = Polynomial::zero(self.field, self.nvars);
        for (m, c) in &self.terms {
            let e = m.exp(i);
            if e == 0 {
                continue;
            }
            let factor = self.field.from_integer(e as i64);
            let coeff = c.mul(&factor);
            if coeff.is_zero() {
                continue;
            }
            let mut exps = m.exps().to_vec();
            exps[i] -= 1;
            out.add_term(Monomial::from_exps(exps), coeff);
        }
        Ok(out)
    }

    /// Value at the origin.
    pub fn constant_term(&self) -> Scalar {
        self.coeff(&Monomial::one(self.nvars))
    }

    /// True when the polynomial lies in the maximal ideal (vanishes at 0).
    pub fn in_maximal_ideal(&self) -> bool {
        self.constant_term().is_zero()
    }

    /// Indices of the variables that actually occur.
    pub fn used_variables(&self) -> Vec<usize> {
        let mut used = vec![false; self.nvars];
        for m in self.terms.keys() {
            for (i, &e) in m.exps().iter().enumerate() {
                if e > 0 {
                    used[i] = true;
                }
            }
        }
        (0..self.nvars).filter(|&i| used[i]).collect()
    }

    /// Canonical rendering: terms in descending local order, explicit `*`
    /// and `^`, coefficients `1` suppressed.  Parsing the result returns
    /// the identical polynomial.
    pub fn render(&self, vars: &[String]) -> String {
        assert_eq!(vars.len(), self.nvars, "wrong number of variable names");
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (idx, (m, c)) in self.terms_desc().enumerate() {
            let neg = c.is_negative();
            let abs = if neg { c.neg() } else { c.clone() };
            if idx == 0 {
                if neg {
                    out.push('-');
                }
            } else if neg {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            if m.is_one() {
                out.push_str(&abs.render());
            } else if abs.is_one() {
                out.push_str(&m.render(vars));
            } else {
                out.push_str(&abs.render());
                out.push('*');
                out.push_str(&m.render(vars));
            }
        }
        out
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(&default_var_names(self.nvars)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> FieldSpec {
        FieldSpec::RATIONALS
    }

    fn fp(p: u64) -> FieldSpec {
        FieldSpec::prime(p).unwrap()
    }

    fn mono(exps: &[u16]) -> Monomial {
        Monomial::from_exps(exps.to_vec())
    }

    #[test]
    fn coefficients_collapse_in_characteristic_p() {
        let f3 = fp(3);
        let mut p = Polynomial::zero(f3, 1);
        p.add_term(mono(&[2]), f3.from_integer(3));
        assert!(p.is_zero());
        p.add_term(mono(&[2]), f3.from_integer(2));
        p.add_term(mono(&[2]), f3.from_integer(1));
        assert!(p.is_zero());
    }

    #[test]
    fn leading_term_is_lowest_degree() {
        let f = q();
        let mut p = Polynomial::zero(f, 2);
        p.add_term(mono(&[3, 1]), f.one()); // x^3*y
        p.add_term(mono(&[0, 2]), f.one()); // y^2
        assert_eq!(p.leading_monomial().unwrap(), &mono(&[0, 2]));
        assert_eq!(p.order(), Order::Finite(2));
        assert_eq!(p.degree(), Some(4));
    }

    #[test]
    fn derivative_kills_pth_powers() {
        let f5 = fp(5);
        let mut p = Polynomial::zero(f5, 2);
        p.add_term(mono(&[5, 0]), f5.one()); // x^5
        p.add_term(mono(&[0, 4]), f5.one()); // y^4
        assert!(p.partial_derivative(0).unwrap().is_zero());
        let dy = p.partial_derivative(1).unwrap();
        assert_eq!(dy.leading_monomial().unwrap(), &mono(&[0, 3]));
        assert_eq!(dy.leading_coeff().unwrap(), &f5.from_integer(4));
    }

    #[test]
    fn truncated_product_drops_high_degrees() {
        let f = q();
        // (1 + x) * (x^3 + y^2) truncated at 4.
        let mut a = Polynomial::one(f, 2);
        a.add_term(mono(&[1, 0]), f.one());
        let mut b = Polynomial::zero(f, 2);
        b.add_term(mono(&[3, 0]), f.one());
        b.add_term(mono(&[0, 2]), f.one());
        let prod = a.mul_truncated(&b, 4).unwrap();
        assert_eq!(prod.num_terms(), 4); // x^3 + y^2 + x^4 + x*y^2
        let full = a.mul(&b).unwrap();
        assert_eq!(full, prod); // nothing exceeded degree 4 here
        let cut = a.mul_truncated(&b, 3).unwrap();
        assert_eq!(cut.num_terms(), 3);
    }

    #[test]
    fn render_is_descending_and_sign_aware() {
        let f = q();
        let mut p = Polynomial::zero(f, 2);
        p.add_term(mono(&[3, 1]), f.one());
        p.add_term(mono(&[0, 2]), f.one());
        assert_eq!(p.to_string(), "y^2 + x^3*y");
        let mut m = Polynomial::zero(f, 2);
        m.add_term(mono(&[1, 0]), f.from_integer(-1));
        m.add_term(mono(&[2, 0]), f.from_fraction(1, 2).unwrap());
        assert_eq!(m.to_string(), "-x + 1/2*x^2");
    }

    #[test]
    fn mismatched_operands_are_rejected() {
        let a = Polynomial::one(q(), 2);
        let b = Polynomial::one(fp(3), 2);
        assert!(matches!(a.add(&b), Err(Error::FieldMismatch(_, _))));
        let c = Polynomial::one(q(), 3);
        assert!(matches!(a.add(&c), Err(Error::ArityMismatch(2, 3))));
    }
}
