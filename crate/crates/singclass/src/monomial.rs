//! Monomials (exponent vectors) and the local degree ordering.
//!
//! The ordering implemented by `Ord` is the negative degree reverse
//! lexicographical ordering, written `ds` in computer algebra systems:
//! a monomial of *lower* total degree is *larger*, so `1` is the largest
//! monomial of all, and ties inside a degree are broken reverse
//! lexicographically (scanning exponents from the last variable; the
//! monomial with the smaller exponent at the first difference wins).
//! For two variables this sorts `1 > x > y > x^2 > x*y > y^2 > ...`.
//!
//! With this convention the leading monomial of a polynomial is simply
//! its maximal monomial, and the leading term of a unit is its constant.

use std::cmp::Ordering;
use std::fmt;

/// An exponent vector with cached total degree.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: Vec<u16>,
    degree: u32,
}

impl Monomial {
    /// The constant monomial `1` in `nvars` variables.
    pub fn one(nvars: usize) -> Self {
        Monomial {
            exps: vec![0; nvars],
            degree: 0,
        }
    }

    /// The single variable `x_i`.
    pub fn var(i: usize, nvars: usize) -> Self {
        assert!(i < nvars, "variable index out of range");
        let mut exps = vec![0; nvars];
        exps[i] = 1;
        Monomial { exps, degree: 1 }
    }

    /// Build from an explicit exponent vector.
    pub fn from_exps(exps: Vec<u16>) -> Self {
        let degree = exps.iter().map(|&e| e as u32).sum();
        Monomial { exps, degree }
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn exps(&self) -> &[u16] {
        &self.exps
    }

    pub fn exp(&self, i: usize) -> u16 {
        self.exps[i]
    }

    pub fn is_one(&self) -> bool {
        self.degree == 0
    }

    /// Product of two monomials.
    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.nvars(), other.nvars());
        let exps = self
            .exps
            .iter()
            .zip(&other.exps)
            .map(|(a, b)| a + b)
            .collect();
        Monomial {
            exps,
            degree: self.degree + other.degree,
        }
    }

    /// `self * x_i`.
    pub fn mul_var(&self, i: usize) -> Monomial {
        let mut exps = self.exps.clone();
        exps[i] += 1;
        Monomial {
            exps,
            degree: self.degree + 1,
        }
    }

    /// `self^k`.
    pub fn pow(&self, k: u16) -> Monomial {
        let exps = self.exps.iter().map(|&e| e * k).collect();
        Monomial {
            exps,
            degree: self.degree * k as u32,
        }
    }

    /// Does `self` divide `other`?
    pub fn divides(&self, other: &Monomial) -> bool {
        self.degree <= other.degree
            && self.exps.iter().zip(&other.exps).all(|(a, b)| a <= b)
    }

    /// Exact quotient `self / other`, when divisible.
    pub fn try_div(&self, other: &Monomial) -> Option<Monomial> {
        if !other.divides(self) {
            return None;
        }
        let exps = self
            .exps
            .iter()
            .zip(&other.exps)
            .map(|(a, b)| a - b)
            .collect();
        Some(Monomial {
            exps,
            degree: self.degree - other.degree,
        })
    }

    /// Least common multiple.
    pub fn lcm(&self, other: &Monomial) -> Monomial {
        let exps: Vec<u16> = self
            .exps
            .iter()
            .zip(&other.exps)
            .map(|(a, b)| *a.max(b))
            .collect();
        Monomial::from_exps(exps)
    }

    /// Render with the given variable names, e.g. `x^2*y`.
    pub fn render(&self, vars: &[String]) -> String {
        if self.is_one() {
            return "1".to_string();
        }
        let mut parts = Vec::new();
        for (i, &e) in self.exps.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(vars[i].clone()),
                _ => parts.push(format!("{}^{}", vars[i], e)),
            }
        }
        parts.join("*")
    }
}

impl Ord for Monomial {
    /// The local degree ordering described in the module docs.
    fn cmp(&self, other: &Self) -> Ordering {
        debug_assert_eq!(self.nvars(), other.nvars());
        match self.degree.cmp(&other.degree) {
            Ordering::Less => Ordering::Greater,
            Ordering::Greater => Ordering::Less,
            Ordering::Equal => {
                for i in (0..self.exps.len()).rev() {
                    match self.exps[i].cmp(&other.exps[i]) {
                        Ordering::Less => return Ordering::Greater,
                        Ordering::Greater => return Ordering::Less,
                        Ordering::Equal => {}
                    }
                }
                Ordering::Equal
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.nvars()).map(|i| format!("x{}", i + 1)).collect();
        write!(f, "{}", self.render(&names))
    }
}

/// All monomials in `nvars` variables of total degree exactly `d`,
/// listed in descending order (largest first).
pub fn monomials_of_degree(nvars: usize, d: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    let mut current = vec![0u16; nvars];
    fill(&mut out, &mut current, 0, d as u16, nvars);
    out.sort_by(|a, b| b.cmp(a));
    out
}

fn fill(out: &mut Vec<Monomial>, current: &mut Vec<u16>, pos: usize, rest: u16, nvars: usize) {
    if pos + 1 == nvars {
        current[pos] = rest;
        out.push(Monomial::from_exps(current.clone()));
        current[pos] = 0;
        return;
    }
    for e in 0..=rest {
        current[pos] = e;
        fill(out, current, pos + 1, rest - e, nvars);
        current[pos] = 0;
    }
}

/// All monomials of degree at most `d`, in descending order (so `1` first).
pub fn monomials_up_to_degree(nvars: usize, d: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    for k in 0..=d {
        out.extend(monomials_of_degree(nvars, k));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(exps: &[u16]) -> Monomial {
        Monomial::from_exps(exps.to_vec())
    }

    #[test]
    fn lower_degree_is_larger() {
        assert!(Monomial::one(2) > m(&[1, 0]));
        assert!(m(&[1, 0]) > m(&[2, 0]));
        assert!(m(&[0, 1]) > m(&[1, 1]));
    }

    #[test]
    fn equal_degree_breaks_ties_reverse_lexicographically() {
        // Within degree 2 in (x, y): x^2 > x*y > y^2.
        assert!(m(&[2, 0]) > m(&[1, 1]));
        assert!(m(&[1, 1]) > m(&[0, 2]));
        // Within degree 3 in (x, y, z): x^3 > x^2*y > x*y^2 > y^3 > x^2*z ...
        assert!(m(&[3, 0, 0]) > m(&[2, 1, 0]));
        assert!(m(&[2, 1, 0]) > m(&[1, 2, 0]));
        assert!(m(&[1, 2, 0]) > m(&[0, 3, 0]));
        assert!(m(&[0, 3, 0]) > m(&[2, 0, 1]));
    }

    #[test]
    fn descending_listing_starts_with_one() {
        let all = monomials_up_to_degree(2, 2);
        let shown: Vec<String> = all.iter().map(|mm| mm.to_string()).collect();
        assert_eq!(shown, vec!["1", "x1", "x2", "x1^2", "x1*x2", "x2^2"]);
    }

    #[test]
    fn divisibility_and_quotients() {
        let a = m(&[2, 1]);
        let b = m(&[1, 1]);
        assert!(b.divides(&a));
        assert!(!a.divides(&b));
        assert_eq!(a.try_div(&b).unwrap(), m(&[1, 0]));
        assert_eq!(a.lcm(&m(&[0, 3])), m(&[2, 3]));
    }

    #[test]
    fn counts_match_binomials() {
        assert_eq!(monomials_of_degree(2, 5).len(), 6);
        assert_eq!(monomials_of_degree(3, 4).len(), 15);
        assert_eq!(monomials_up_to_degree(3, 3).len(), 20);
    }
}
