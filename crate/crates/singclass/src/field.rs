//! Coefficient fields: the rationals and prime fields F_p.
//!
//! All arithmetic is exact.  Rational scalars are kept reduced with a
//! positive denominator (the representation `num::BigRational` maintains);
//! prime-field scalars are residues in `0..p`.  A scalar knows which field
//! it belongs to, and mixed-field arithmetic is rejected.

use crate::error::{Error, Result};
use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use serde::Serialize;
use std::fmt;

/// The coefficient field of a computation: `Q` for characteristic zero,
/// `F_p` for a prime `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct FieldSpec {
    characteristic: u64,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

impl FieldSpec {
    /// The rational field.
    pub const RATIONALS: FieldSpec = FieldSpec { characteristic: 0 };

    /// Field of the given characteristic; `0` means the rationals and any
    /// other value must be prime.
    pub fn new(characteristic: u64) -> Result<Self> {
        if characteristic == 0 || is_prime(characteristic) {
            Ok(FieldSpec { characteristic })
        } else {
            Err(Error::NonPrimeCharacteristic(characteristic))
        }
    }

    /// Prime field `F_p`.
    pub fn prime(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(FieldSpec { characteristic: p })
        } else {
            Err(Error::NonPrimeCharacteristic(p))
        }
    }

    pub fn characteristic(&self) -> u64 {
        self.characteristic
    }

    pub fn is_rational(&self) -> bool {
        self.characteristic == 0
    }

    /// Zero element of this field.
    pub fn zero(&self) -> Scalar {
        match self.characteristic {
            0 => Scalar::Rat(BigRational::zero()),
            p => Scalar::Mod { p, val: 0 },
        }
    }

    /// Multiplicative identity of this field.
    pub fn one(&self) -> Scalar {
        self.from_integer(1)
    }

    /// Image of an integer in this field.
    pub fn from_integer(&self, n: i64) -> Scalar {
        match self.characteristic {
            0 => Scalar::Rat(BigRational::from_integer(BigInt::from(n))),
            p => Scalar::Mod {
                p,
                val: (n as i128).rem_euclid(p as i128) as u64,
            },
        }
    }

    /// Reduced fraction `num/den`; rejects a zero denominator, and in
    /// characteristic p rejects denominators divisible by p.
    pub fn from_fraction(&self, num: i64, den: i64) -> Result<Scalar> {
        if den == 0 {
            return Err(Error::DivisionByZeroInCoefficient);
        }
        match self.characteristic {
            0 => Ok(Scalar::Rat(BigRational::new(
                BigInt::from(num),
                BigInt::from(den),
            ))),
            _ => {
                let d = self.from_integer(den);
                if d.is_zero() {
                    return Err(Error::DivisionByZeroInCoefficient);
                }
                Ok(self.from_integer(num).mul(&d.inverse()?))
            }
        }
    }

    fn name(&self) -> String {
        match self.characteristic {
            0 => "Q".to_string(),
            p => format!("F_{p}"),
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

/// An exact field element.  `Rat` is a reduced rational; `Mod` is a
/// residue in `0..p` together with its modulus.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rat(BigRational),
    Mod { p: u64, val: u64 },
}

impl Scalar {
    /// Field this scalar belongs to.
    pub fn field(&self) -> FieldSpec {
        match self {
            Scalar::Rat(_) => FieldSpec::RATIONALS,
            Scalar::Mod { p, .. } => FieldSpec { characteristic: *p },
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_zero(),
            Scalar::Mod { val, .. } => *val == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_one(),
            Scalar::Mod { val, .. } => *val == 1,
        }
    }

    fn check(&self, other: &Scalar) -> (FieldSpec, FieldSpec) {
        (self.field(), other.field())
    }

    fn expect_same(&self, other: &Scalar) {
        let (a, b) = self.check(other);
        assert_eq!(
            a, b,
            "scalar arithmetic across different fields ({a} vs {b})"
        );
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        self.expect_same(other);
        match (self, other) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a + b),
            (Scalar::Mod { p, val: a }, Scalar::Mod { val: b, .. }) => Scalar::Mod {
                p: *p,
                val: (a + b) % p,
            },
            _ => unreachable!(),
        }
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Rat(a) => Scalar::Rat(-a),
            Scalar::Mod { p, val } => Scalar::Mod {
                p: *p,
                val: if *val == 0 { 0 } else { p - val },
            },
        }
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        self.expect_same(other);
        match (self, other) {
            (Scalar::Rat(a), Scalar::Rat(b)) => Scalar::Rat(a * b),
            (Scalar::Mod { p, val: a }, Scalar::Mod { val: b, .. }) => Scalar::Mod {
                p: *p,
                val: (((*a as u128) * (*b as u128)) % (*p as u128)) as u64,
            },
            _ => unreachable!(),
        }
    }

    /// Multiplicative inverse; fails on zero.
    pub fn inverse(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::DivisionByZeroInCoefficient);
        }
        Ok(match self {
            Scalar::Rat(a) => Scalar::Rat(a.recip()),
            Scalar::Mod { p, val } => {
                // Extended Euclid on (val, p).
                let (mut r0, mut r1) = (*val as i128, *p as i128);
                let (mut s0, mut s1) = (1i128, 0i128);
                while r1 != 0 {
                    let q = r0 / r1;
                    (r0, r1) = (r1, r0 - q * r1);
                    (s0, s1) = (s1, s0 - q * s1);
                }
                debug_assert_eq!(r0, 1, "modulus must be prime");
                Scalar::Mod {
                    p: *p,
                    val: s0.rem_euclid(*p as i128) as u64,
                }
            }
        })
    }

    pub fn div(&self, other: &Scalar) -> Result<Scalar> {
        Ok(self.mul(&other.inverse()?))
    }

    /// Integer power (exponent may be zero).
    pub fn pow(&self, mut e: u32) -> Scalar {
        let mut base = self.clone();
        let mut acc = self.field().one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base.clone());
            e >>= 1;
        }
        acc
    }

    /// Render the scalar the way the polynomial printer wants it:
    /// integers without denominator, fractions as `a/b`.
    pub fn render(&self) -> String {
        match self {
            Scalar::Rat(r) => {
                if r.denom().is_one() {
                    r.numer().to_string()
                } else {
                    format!("{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Mod { val, .. } => val.to_string(),
        }
    }

    /// True when the rational is negative (residues are never negative).
    pub fn is_negative(&self) -> bool {
        match self {
            Scalar::Rat(r) => r.is_negative(),
            Scalar::Mod { .. } => false,
        }
    }

    /// Total order used only to pick deterministic canonical
    /// representatives (orbit minima and similar); it is not compatible
    /// with the field operations.
    pub fn rep_cmp(&self, other: &Scalar) -> std::cmp::Ordering {
        match (self, other) {
            (Scalar::Mod { val: a, .. }, Scalar::Mod { val: b, .. }) => a.cmp(b),
            (Scalar::Rat(a), Scalar::Rat(b)) => a.cmp(b),
            _ => std::cmp::Ordering::Equal,
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn characteristic_must_be_zero_or_prime() {
        assert!(FieldSpec::new(0).is_ok());
        assert!(FieldSpec::new(2).is_ok());
        assert!(FieldSpec::new(7).is_ok());
        assert_eq!(
            FieldSpec::new(6).unwrap_err(),
            Error::NonPrimeCharacteristic(6)
        );
        assert!(FieldSpec::new(1).is_err());
        assert!(FieldSpec::new(91).is_err()); // 7 * 13
    }

    #[test]
    fn mod_p_arithmetic_round_trip() {
        let f = FieldSpec::prime(7).unwrap();
        let a = f.from_integer(5);
        let b = f.from_integer(4);
        assert_eq!(a.add(&b), f.from_integer(2));
        assert_eq!(a.mul(&b), f.from_integer(6));
        assert_eq!(a.sub(&b), f.from_integer(1));
        let inv = a.inverse().unwrap();
        assert!(a.mul(&inv).is_one());
        assert_eq!(f.from_integer(-1), f.from_integer(6));
    }

    #[test]
    fn rational_arithmetic_is_reduced() {
        let f = FieldSpec::RATIONALS;
        let half = f.from_fraction(1, 2).unwrap();
        let third = f.from_fraction(1, 3).unwrap();
        let sum = half.add(&third);
        assert_eq!(sum.render(), "5/6");
        assert_eq!(f.from_fraction(2, 4).unwrap().render(), "1/2");
        assert_eq!(f.from_fraction(1, -2).unwrap().render(), "-1/2");
    }

    #[test]
    fn zero_denominator_is_rejected() {
        let f = FieldSpec::RATIONALS;
        assert_eq!(
            f.from_fraction(1, 0).unwrap_err(),
            Error::DivisionByZeroInCoefficient
        );
        let g = FieldSpec::prime(3).unwrap();
        assert_eq!(
            g.from_fraction(1, 3).unwrap_err(),
            Error::DivisionByZeroInCoefficient
        );
        // 1/2 is fine over F_3: 2^{-1} = 2.
        assert_eq!(g.from_fraction(1, 2).unwrap(), g.from_integer(2));
    }

    #[test]
    fn inverse_of_zero_fails() {
        assert!(FieldSpec::RATIONALS.zero().inverse().is_err());
        assert!(FieldSpec::prime(5).unwrap().zero().inverse().is_err());
    }

    #[test]
    fn pow_matches_repeated_multiplication() {
        let f = FieldSpec::prime(5).unwrap();
        let a = f.from_integer(3);
        let mut acc = f.one();
        for e in 0..8 {
            assert_eq!(a.pow(e), acc);
            acc = acc.mul(&a);
        }
    }
}
