//! Coordinate changes on jets.
//!
//! A [`JetAutomorphism`] is a local coordinate change `x_i ↦ φ_i`
//! (each `φ_i` without constant term, the matrix of linear parts
//! invertible), optionally together with a unit `u` for contact moves.
//! Applying it to a germ `f` yields the jet of `u·f(φ_1,…,φ_n)`
//! truncated at the automorphism's bound.

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::monomial::{monomials_of_degree, Monomial};
use crate::poly::Polynomial;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// A jet-level coordinate change, optionally with a unit factor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JetAutomorphism {
    images: Vec<Polynomial>,
    unit: Option<Polynomial>,
    bound: u32,
}

impl JetAutomorphism {
    /// Build an automorphism from the images of the variables, checking
    /// that every image vanishes at the origin, that the linear parts
    /// form an invertible matrix, and that the unit (if given) has a
    /// nonzero constant term.
    pub fn new(images: Vec<Polynomial>, unit: Option<Polynomial>, bound: u32) -> Result<Self> {
        if images.is_empty() {
            return Err(Error::InvalidInput("automorphism needs variables".into()));
        }
        let field = images[0].field();
        let nvars = images.len();
        for im in &images {
            if im.field() != field {
                return Err(Error::FieldMismatch(
                    field.to_string(),
                    im.field().to_string(),
                ));
            }
            if im.nvars() != nvars {
                return Err(Error::ArityMismatch(nvars, im.nvars()));
            }
            if !im.in_maximal_ideal() {
                return Err(Error::NotInMaximalIdeal);
            }
        }
        if let Some(u) = &unit {
            if u.field() != field {
                return Err(Error::FieldMismatch(
                    field.to_string(),
                    u.field().to_string(),
                ));
            }
            if u.nvars() != nvars {
                return Err(Error::ArityMismatch(nvars, u.nvars()));
            }
            if u.constant_term().is_zero() {
                return Err(Error::InvalidInput(
                    "unit must have nonzero constant term".into(),
                ));
            }
        }
        let jets: Vec<Polynomial> = images.iter().map(|im| im.jet(bound)).collect();
        if !linear_part_invertible(&jets) {
            return Err(Error::NonInvertibleLinearPart);
        }
        Ok(JetAutomorphism {
            images: jets,
            unit: unit.map(|u| u.jet(bound)),
            bound,
        })
    }

    /// The identity change of coordinates at the given bound.
    pub fn identity(field: FieldSpec, nvars: usize, bound: u32) -> Self {
        let images = (0..nvars)
            .map(|i| Polynomial::variable(field, i, nvars))
            .collect();
        JetAutomorphism {
            images,
            unit: None,
            bound,
        }
    }

    pub fn images(&self) -> &[Polynomial] {
        &self.images
    }

    pub fn unit(&self) -> Option<&Polynomial> {
        self.unit.as_ref()
    }

    pub fn bound(&self) -> u32 {
        self.bound
    }

    pub fn nvars(&self) -> usize {
        self.images.len()
    }

    pub fn field(&self) -> FieldSpec {
        self.images[0].field()
    }

    /// Replace the unit (validating it), keeping the images.
    pub fn with_unit(&self, unit: Polynomial) -> Result<Self> {
        JetAutomorphism::new(self.images.clone(), Some(unit), self.bound)
    }

    /// The automorphism equivalent to applying `self` to a germ and then
    /// `next` to the result:
    /// `substitute_jet(substitute_jet(f, self), next) = substitute_jet(f, self.then(next))`.
    ///
    /// Concretely the new images are `φ_i(ψ)` (for `self = (φ, u)`,
    /// `next = (ψ, v)`) and the new unit is `v · (u∘ψ)`.
    pub fn then(&self, next: &JetAutomorphism) -> Result<JetAutomorphism> {
        let bound = self.bound.min(next.bound);
        let inner = JetAutomorphism {
            images: next.images.clone(),
            unit: None,
            bound,
        };
        let images: Vec<Polynomial> = self
            .images
            .iter()
            .map(|im| substitute_jet(im, &inner))
            .collect::<Result<_>>()?;
        let unit = match (&self.unit, &next.unit) {
            (None, None) => None,
            (Some(u), None) => Some(substitute_jet(u, &inner)?),
            (None, Some(v)) => Some(v.jet(bound)),
            (Some(u), Some(v)) => Some(v.mul_truncated(&substitute_jet(u, &inner)?, bound)?),
        };
        JetAutomorphism::new(images, unit, bound)
    }
}

/// Apply the coordinate change: returns `jet_N(u · f(φ_1,…,φ_n))`
/// where `N` is the automorphism's bound.
pub fn substitute_jet(f: &Polynomial, phi: &JetAutomorphism) -> Result<Polynomial> {
    if f.field() != phi.field() {
        return Err(Error::FieldMismatch(
            f.field().to_string(),
            phi.field().to_string(),
        ));
    }
    if f.nvars() != phi.nvars() {
        return Err(Error::ArityMismatch(phi.nvars(), f.nvars()));
    }
    let n = f.nvars();
    let bound = phi.bound();
    // Variables mapped to themselves contribute a plain monomial factor;
    // only genuinely moved variables need cached truncated powers.
    let ident: Vec<bool> = (0..n)
        .map(|i| phi.images()[i] == Polynomial::variable(f.field(), i, n))
        .collect();
    // Cache powers of each moved image: powers[i][e] = φ_i^e truncated.
    let mut max_exp = vec![0u16; n];
    for (m, _) in f.terms() {
        for i in 0..n {
            if !ident[i] {
                max_exp[i] = max_exp[i].max(m.exp(i));
            }
        }
    }
    let mut powers: Vec<Vec<Polynomial>> = Vec::with_capacity(n);
    for i in 0..n {
        let mut ps = Vec::with_capacity(max_exp[i] as usize + 1);
        ps.push(Polynomial::one(f.field(), n));
        for e in 1..=max_exp[i] as usize {
            let next = ps[e - 1].mul_truncated(&phi.images()[i], bound)?;
            ps.push(next);
        }
        powers.push(ps);
    }
    let one = f.field().from_integer(1);
    let mut acc = Polynomial::zero(f.field(), n);
    for (m, c) in f.terms() {
        // Each image has order ≥ 1, so a degree-d term contributes
        // order ≥ d; skip anything past the bound.
        if m.degree() > bound {
            continue;
        }
        let mut term = Polynomial::constant(f.field(), n, c.clone());
        let mut fixed = vec![0u16; n];
        for i in 0..n {
            let e = m.exp(i);
            if e == 0 {
                continue;
            }
            if ident[i] {
                fixed[i] = e;
            } else {
                term = term.mul_truncated(&powers[i][e as usize], bound)?;
            }
        }
        let fixed_m = Monomial::from_exps(fixed);
        if !fixed_m.is_one() {
            term = term.mul_term(&fixed_m, &one).jet(bound);
        }
        acc = acc.add(&term)?;
    }
    if let Some(u) = phi.unit() {
        acc = acc.mul_truncated(u, bound)?;
    }
    Ok(acc.jet(bound))
}

/// Whether the matrix of linear parts of the images is invertible,
/// by Gaussian elimination over the coefficient field.
fn linear_part_invertible(images: &[Polynomial]) -> bool {
    let n = images.len();
    let _field = images[0].field();
    // mat[i][j] = coefficient of x_j in images[i]
    let mut mat: Vec<Vec<Scalar>> = images
        .iter()
        .map(|im| {
            (0..n)
                .map(|j| im.coeff(&Monomial::var(j, n)))
                .collect::<Vec<_>>()
        })
        .collect();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !mat[r][col].is_zero()) else {
            return false;
        };
        mat.swap(col, pivot);
        let inv = mat[col][col].inverse().expect("nonzero pivot");
        for r in col + 1..n {
            if mat[r][col].is_zero() {
                continue;
            }
            let factor = mat[r][col].mul(&inv);
            for c in col..n {
                let delta = factor.mul(&mat[col][c]);
                mat[r][c] = mat[r][c].sub(&delta);
            }
        }
    }
    true
}

fn random_scalar(rng: &mut ChaCha8Rng, field: FieldSpec) -> Scalar {
    match field.characteristic() {
        0 => field.from_integer(rng.gen_range(-3i64..=3)),
        p => field.from_integer(rng.gen_range(0..p) as i64),
    }
}

fn random_nonzero_scalar(rng: &mut ChaCha8Rng, field: FieldSpec) -> Scalar {
    loop {
        let s = random_scalar(rng, field);
        if !s.is_zero() {
            return s;
        }
    }
}

/// A deterministic pseudo-random coordinate change: invertible linear
/// part (by rejection sampling) plus sparse higher-order terms up to the
/// bound; with `contact` set, also a random unit with nonzero constant
/// term.
pub fn random_automorphism(
    nvars: usize,
    field: FieldSpec,
    bound: u32,
    seed: u64,
    contact: bool,
) -> JetAutomorphism {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let mut images = Vec::with_capacity(nvars);
        for _ in 0..nvars {
            let mut im = Polynomial::zero(field, nvars);
            for j in 0..nvars {
                im.add_term(Monomial::var(j, nvars), random_scalar(&mut rng, field));
            }
            // Sparse higher terms: roughly one in three candidate
            // monomials per degree receives a random coefficient.
            for d in 2..=bound.min(6) {
                for m in monomials_of_degree(nvars, d) {
                    if rng.gen_range(0..3u8) == 0 {
                        im.add_term(m, random_scalar(&mut rng, field));
                    }
                }
            }
            images.push(im);
        }
        let unit = if contact {
            let mut u = Polynomial::constant(field, nvars, random_nonzero_scalar(&mut rng, field));
            for d in 1..=bound.min(4) {
                for m in monomials_of_degree(nvars, d) {
                    if rng.gen_range(0..3u8) == 0 {
                        u.add_term(m, random_scalar(&mut rng, field));
                    }
                }
            }
            Some(u)
        } else {
            None
        };
        match JetAutomorphism::new(images, unit, bound) {
            Ok(phi) => return phi,
            Err(Error::NonInvertibleLinearPart) => continue,
            Err(e) => unreachable!("random automorphism construction: {e}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_polynomial;
    use crate::poly::default_var_names;

    fn parse2(text: &str, field: FieldSpec) -> Polynomial {
        parse_polynomial(text, field, &default_var_names(2)).unwrap()
    }

    fn shear(field: FieldSpec, bound: u32) -> JetAutomorphism {
        // (x, y) ↦ (x + y, y)
        let x_plus_y = parse2("x + y", field);
        let y = parse2("y", field);
        JetAutomorphism::new(vec![x_plus_y, y], None, bound).unwrap()
    }

    #[test]
    fn binomial_expansion_char_zero() {
        let f = parse2("x^2", FieldSpec::RATIONALS);
        let g = substitute_jet(&f, &shear(FieldSpec::RATIONALS, 4)).unwrap();
        assert_eq!(g, parse2("x^2 + 2*x*y + y^2", FieldSpec::RATIONALS));
    }

    #[test]
    fn binomial_expansion_char_two() {
        let f2 = FieldSpec::prime(2).unwrap();
        let f = parse2("x^2", f2);
        let g = substitute_jet(&f, &shear(f2, 4)).unwrap();
        assert_eq!(g, parse2("x^2 + y^2", f2));
    }

    #[test]
    fn unit_multiplies_the_germ() {
        let f2 = FieldSpec::prime(2).unwrap();
        let f = parse2("x^3*y + y^2", f2);
        let phi = JetAutomorphism::identity(f2, 2, 6)
            .with_unit(parse2("1 + x", f2))
            .unwrap();
        let g = substitute_jet(&f, &phi).unwrap();
        assert_eq!(g, parse2("y^2 + x^3*y + x*y^2 + x^4*y", f2));
    }

    #[test]
    fn identity_truncates_only() {
        let f = parse2("1 + x + y^5 + x^3*y^4", FieldSpec::RATIONALS);
        let id = JetAutomorphism::identity(FieldSpec::RATIONALS, 2, 5);
        assert_eq!(substitute_jet(&f, &id).unwrap(), f.jet(5));
    }

    #[test]
    fn invalid_automorphisms_are_rejected() {
        let q = FieldSpec::RATIONALS;
        // Constant term in an image.
        let err = JetAutomorphism::new(vec![parse2("x + 1", q), parse2("y", q)], None, 4);
        assert_eq!(err.unwrap_err(), Error::NotInMaximalIdeal);
        // Degenerate linear part.
        let err = JetAutomorphism::new(vec![parse2("x + y", q), parse2("x + y", q)], None, 4);
        assert_eq!(err.unwrap_err(), Error::NonInvertibleLinearPart);
        // x ↦ x², y ↦ y has zero x-column in degree one.
        let err = JetAutomorphism::new(vec![parse2("x^2", q), parse2("y", q)], None, 4);
        assert_eq!(err.unwrap_err(), Error::NonInvertibleLinearPart);
        // Unit vanishing at the origin.
        let err = JetAutomorphism::identity(q, 2, 4).with_unit(parse2("x", q));
        assert!(matches!(err.unwrap_err(), Error::InvalidInput(_)));
    }

    #[test]
    fn composition_matches_sequential_substitution() {
        for (ch, seeds) in [(0u64, 0..6u64), (2, 6..12), (5, 12..18)] {
            let field = if ch == 0 {
                FieldSpec::RATIONALS
            } else {
                FieldSpec::prime(ch).unwrap()
            };
            for seed in seeds {
                let f = {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xf00d);
                    let mut p = Polynomial::zero(field, 2);
                    for m in crate::monomial::monomials_up_to_degree(2, 5) {
                        if rng.gen_range(0..4u8) == 0 {
                            p.add_term(m, random_scalar(&mut rng, field));
                        }
                    }
                    p
                };
                let phi = random_automorphism(2, field, 6, seed, true);
                let psi = random_automorphism(2, field, 6, seed + 1000, true);
                let sequential =
                    substitute_jet(&substitute_jet(&f, &phi).unwrap(), &psi).unwrap();
                let combined = substitute_jet(&f, &phi.then(&psi).unwrap()).unwrap();
                assert_eq!(sequential, combined, "seed {seed} char {ch}");
            }
        }
    }

    #[test]
    fn random_automorphism_is_deterministic() {
        let f3 = FieldSpec::prime(3).unwrap();
        let a = random_automorphism(2, f3, 5, 42, true);
        let b = random_automorphism(2, f3, 5, 42, true);
        assert_eq!(a, b);
        let c = random_automorphism(2, f3, 5, 43, true);
        assert_ne!(a, c);
    }

    #[test]
    fn linear_only_bound_one() {
        let f2 = FieldSpec::prime(2).unwrap();
        for seed in 0..10 {
            let phi = random_automorphism(2, f2, 1, seed, false);
            for im in phi.images() {
                assert!(im.degree().unwrap_or(0) <= 1);
            }
        }
    }
}
