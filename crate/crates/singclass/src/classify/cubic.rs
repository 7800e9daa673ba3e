//! Binary cubic forms: multiplicity type over the algebraic closure and
//! rational extraction of repeated linear factors.
//!
//! A nonzero binary cubic factors over the closure into three lines,
//! counted with multiplicity.  The multiplicity pattern — three distinct
//! lines, a double line plus a transverse line, or a triple line — is
//! detected with exact coefficient tests that are valid in every
//! characteristic.  Whenever a line is unique in its role (the double
//! line, the transverse line, the triple line) it is fixed by the Galois
//! action and therefore has a representative over the ground field
//! itself, so it can be extracted without passing to an extension.

use crate::error::Result;
use crate::field::{FieldSpec, Scalar};
use crate::jet::JetAutomorphism;
use crate::monomial::Monomial;
use crate::poly::Polynomial;

/// A linear form `u·x + v·y`, stored as the coefficient pair `(u, v)`.
pub type LinearForm = (Scalar, Scalar);

/// Multiplicity type of a nonzero binary cubic over the closure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CubicType {
    /// Squarefree: three distinct lines (possibly conjugate over the
    /// ground field, so no line is extracted).
    ThreeLines,
    /// One double line and one transverse simple line, both rational.
    DoubleLine { double: LinearForm, simple: LinearForm },
    /// A triple line, rational.
    TripleLine { line: LinearForm },
    /// The zero form.
    Zero,
}

/// The four coefficients `(a, b, c, d)` of `a·x³ + b·x²y + c·xy² + d·y³`.
fn cubic_coeffs(cubic: &Polynomial) -> [Scalar; 4] {
    let exps = [[3u16, 0u16], [2, 1], [1, 2], [0, 3]];
    exps.map(|e| cubic.coeff(&Monomial::from_exps(e.to_vec())))
}

/// Discriminant of a binary cubic, via the universal integer polynomial
/// `18abcd − 4b³d + b²c² − 4ac³ − 27a²d²`; it vanishes exactly when the
/// form has a repeated factor over the closure, in every characteristic.
fn cubic_discriminant(field: &FieldSpec, co: &[Scalar; 4]) -> Scalar {
    let [a, b, c, d] = co;
    let n = |k: i64| field.from_integer(k);
    let t1 = n(18).mul(a).mul(b).mul(c).mul(d);
    let t2 = n(-4).mul(b).mul(b).mul(b).mul(d);
    let t3 = b.mul(b).mul(c).mul(c);
    let t4 = n(-4).mul(a).mul(c).mul(c).mul(c);
    let t5 = n(-27).mul(a).mul(a).mul(d).mul(d);
    t1.add(&t2).add(&t3).add(&t4).add(&t5)
}

/// Is the form a perfect cube of a linear form (over the closure)?
fn is_perfect_cube(field: &FieldSpec, co: &[Scalar; 4]) -> bool {
    let [a, b, c, d] = co;
    match field.characteristic() {
        // (ax+by)³ = a³x³ + a²b·x²y + ab²·xy² + b³y³, so with α = a³ ≠ 0
        // the conditions are αγ = β² and α²δ = β³; if α = 0 the cube is
        // a multiple of y³.
        2 => {
            if a.is_zero() {
                b.is_zero() && c.is_zero()
            } else {
                a.mul(c) == b.mul(b) && a.mul(a).mul(d) == b.mul(b).mul(b)
            }
        }
        // Cubes are additive: (ax+by)³ = a³x³ + b³y³.
        3 => b.is_zero() && c.is_zero(),
        // The Hessian covariant vanishes exactly on cubes when 6 ≠ 0.
        _ => {
            let n = |k: i64| field.from_integer(k);
            let h1 = n(3).mul(a).mul(c).sub(&b.mul(b));
            let h2 = n(9).mul(a).mul(d).sub(&b.mul(c));
            let h3 = n(3).mul(b).mul(d).sub(&c.mul(c));
            h1.is_zero() && h2.is_zero() && h3.is_zero()
        }
    }
}

/// The triple line of a perfect cube (input must be a nonzero cube).
fn triple_line(field: &FieldSpec, co: &[Scalar; 4]) -> LinearForm {
    let [a, b, ..] = co;
    let p = field.characteristic();
    if a.is_zero() {
        return (field.zero(), field.one());
    }
    match p {
        // a³ = α, a²b = β over F₂ with α ≠ 0 forces a = 1, b = β.
        2 => (field.one(), b.clone()),
        // Cubing is the identity on F₃, so α = a³ = a and δ = d³ = d.
        3 => (co[0].clone(), co[3].clone()),
        // The triple root of α·t³ + β·t² + … is t₀ = −β/(3α), so the
        // form is proportional to (x − t₀·y)³ = (x + (β/3α)·y)³.
        _ => {
            let v = b
                .div(&field.from_integer(3).mul(a))
                .expect("3α invertible");
            (field.one(), v)
        }
    }
}

/// Divide a binary form (coefficient vector, `x`-degree descending) by
/// the linear form `u·x + v·y`; `None` if it does not divide exactly.
fn divide_by_linear(
    field: &FieldSpec,
    co: &[Scalar],
    l: &LinearForm,
) -> Option<Vec<Scalar>> {
    let (u, v) = l;
    if u.is_zero() {
        // Dividing by v·y: possible iff the x^deg coefficient vanishes.
        if !co[0].is_zero() {
            return None;
        }
        let vinv = v.inverse().ok()?;
        return Some(co[1..].iter().map(|c| c.mul(&vinv)).collect());
    }
    // Synthetic division by u·x + v·y.
    let uinv = u.inverse().ok()?;
    let mut quot = Vec::with_capacity(co.len() - 1);
    let mut carry = field.zero();
    for c in &co[..co.len() - 1] {
        let q = c.sub(&carry).mul(&uinv);
        carry = q.mul(v);
        quot.push(q);
    }
    if co[co.len() - 1] == carry {
        Some(quot)
    } else {
        None
    }
}

/// Multiplicity of the line `l` in the binary form `co`.
fn line_multiplicity(field: &FieldSpec, co: &[Scalar], l: &LinearForm) -> u32 {
    let mut cur = co.to_vec();
    let mut mult = 0;
    while cur.len() > 1 {
        match divide_by_linear(field, &cur, l) {
            Some(q) => {
                mult += 1;
                cur = q;
            }
            None => break,
        }
    }
    mult
}

/// Double-line extraction over a small prime field: enumerate the p+1
/// rational lines and pick the one of multiplicity two.
fn double_line_small_field(
    field: &FieldSpec,
    co: &[Scalar; 4],
) -> Option<(LinearForm, LinearForm)> {
    let p = field.characteristic();
    let mut candidates: Vec<LinearForm> = (0..p as i64)
        .map(|t| (field.one(), field.from_integer(t)))
        .collect();
    candidates.push((field.zero(), field.one()));
    for l in candidates {
        if line_multiplicity(field, co, &l) == 2 {
            let q = divide_by_linear(field, co, &l)?;
            let q = divide_by_linear(field, &q, &l)?;
            // q is the remaining linear factor [s, t] = s·x + t·y.
            return Some((l, (q[0].clone(), q[1].clone())));
        }
    }
    None
}

/// Univariate gcd (coefficients ascending in degree), monic output.
fn gcd_univariate(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    fn trim(v: &mut Vec<Scalar>) {
        while v.len() > 1 && v.last().map(|c| c.is_zero()).unwrap_or(false) {
            v.pop();
        }
    }
    let mut r0 = a.to_vec();
    let mut r1 = b.to_vec();
    trim(&mut r0);
    trim(&mut r1);
    while !(r1.len() == 1 && r1[0].is_zero()) {
        // r0 mod r1
        let lead = r1.last().unwrap().clone();
        let linv = lead.inverse().expect("nonzero leading coefficient");
        while r0.len() >= r1.len() && !(r0.len() == 1 && r0[0].is_zero()) {
            let shift = r0.len() - r1.len();
            let factor = r0.last().unwrap().mul(&linv);
            for (i, c) in r1.iter().enumerate() {
                r0[shift + i] = r0[shift + i].sub(&factor.mul(c));
            }
            trim(&mut r0);
            if r0.len() == 1 && r0[0].is_zero() {
                break;
            }
            if r0.len() > shift + r1.len() - 1 {
                // Leading term did not cancel exactly; numerical
                // impossibility over a field.
                unreachable!("leading term must cancel in exact division");
            }
        }
        std::mem::swap(&mut r0, &mut r1);
    }
    let lead = r0.last().unwrap().clone();
    if !lead.is_zero() {
        let linv = lead.inverse().expect("nonzero");
        for c in r0.iter_mut() {
            *c = c.mul(&linv);
        }
    }
    r0
}

/// Double-line extraction via the gcd with the derivative; valid in
/// characteristic 0 and characteristic > 3 (degree three is below the
/// characteristic, so the derivative does not degenerate).
fn double_line_gcd(field: &FieldSpec, co: &[Scalar; 4]) -> Option<(LinearForm, LinearForm)> {
    let [a, b, c, d] = co;
    if a.is_zero() {
        // The form is divisible by y.  Either y itself is the double
        // line, or y is simple and the quadratic cofactor is a square.
        if b.is_zero() {
            // c·xy² + d·y³ = y²(cx + dy); the transverse line is cx+dy.
            if c.is_zero() {
                return None; // pure cube d·y³, handled elsewhere
            }
            return Some(((field.zero(), field.one()), (c.clone(), d.clone())));
        }
        // cofactor q(t) = b·t² + c·t + d has a double root s = −c/(2b).
        let two_b = field.from_integer(2).mul(b);
        let s = c.div(&two_b).ok()?.neg();
        // verify q(s) = 0
        let q_s = b.mul(&s).mul(&s).add(&c.mul(&s)).add(d);
        if !q_s.is_zero() {
            return None;
        }
        return Some(((field.one(), s.neg()), (field.zero(), field.one())));
    }
    // Leading coefficient nonzero: all roots are finite.  The gcd of
    // g(t) = a t³ + b t² + c t + d with g′ is linear, rooted at the
    // double root t₀.
    let g = vec![d.clone(), c.clone(), b.clone(), a.clone()];
    let gp = vec![
        c.clone(),
        field.from_integer(2).mul(b),
        field.from_integer(3).mul(a),
    ];
    let h = gcd_univariate(&g, &gp);
    if h.len() != 2 {
        return None;
    }
    let t0 = h[0].neg(); // monic t + h[0]
    // Remaining simple root t₁ from the root sum: t₀+t₀+t₁ = −b/a.
    let t1 = b.div(a).ok()?.neg().sub(&t0).sub(&t0);
    Some(((field.one(), t0.neg()), (field.one(), t1.neg())))
}

/// Classify a binary cubic (the degree-3 part of a two-variable germ).
pub fn binary_cubic_type(cubic: &Polynomial) -> CubicType {
    assert_eq!(cubic.nvars(), 2, "binary cubic analysis needs two variables");
    let field = cubic.field();
    let co = cubic_coeffs(cubic);
    if co.iter().all(|c| c.is_zero()) {
        return CubicType::Zero;
    }
    if !cubic_discriminant(&field, &co).is_zero() {
        return CubicType::ThreeLines;
    }
    if is_perfect_cube(&field, &co) {
        return CubicType::TripleLine {
            line: triple_line(&field, &co),
        };
    }
    let p = field.characteristic();
    let pair = if p > 0 && p <= 7 {
        double_line_small_field(&field, &co)
    } else {
        double_line_gcd(&field, &co)
    };
    match pair {
        Some((double, simple)) => {
            debug_assert_eq!(line_multiplicity(&field, &co, &double), 2);
            debug_assert_eq!(line_multiplicity(&field, &co, &simple), 1);
            CubicType::DoubleLine { double, simple }
        }
        // A repeated factor exists but was not extracted; should not
        // happen for the discriminant-zero non-cube case.
        None => CubicType::ThreeLines,
    }
}

/// The linear coordinate change `φ` with `l1∘φ = x` and `l2∘φ = y`,
/// defined whenever the two forms are independent.
pub fn linear_form_change(
    field: &FieldSpec,
    l1: &LinearForm,
    l2: &LinearForm,
    bound: u32,
) -> Result<JetAutomorphism> {
    let (u, v) = l1;
    let (s, t) = l2;
    let det = u.mul(t).sub(&v.mul(s));
    let dinv = det.inverse()?;
    let x = Polynomial::variable(*field, 0, 2);
    let y = Polynomial::variable(*field, 1, 2);
    // φ(x) = (t·x − v·y)/det,  φ(y) = (−s·x + u·y)/det.
    let img_x = x.scale(&t.mul(&dinv)).add(&y.scale(&v.mul(&dinv).neg()))?;
    let img_y = x.scale(&s.mul(&dinv).neg()).add(&y.scale(&u.mul(&dinv)))?;
    JetAutomorphism::new(vec![img_x, img_y], None, bound)
}

/// Complete a single form to a basis: a second form independent of `l`.
pub fn complete_to_basis(field: &FieldSpec, l: &LinearForm) -> LinearForm {
    if l.0.is_zero() {
        (field.one(), field.zero())
    } else {
        (field.zero(), field.one())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_polynomial;
    use crate::poly::default_var_names;

    fn cubic(src: &str, p: u64) -> Polynomial {
        let field = if p == 0 {
            FieldSpec::RATIONALS
        } else {
            FieldSpec::prime(p).unwrap()
        };
        parse_polynomial(src, field, &default_var_names(2))
            .unwrap()
            .homogeneous_part(3)
    }

    fn form_divides(c: &Polynomial, l: &LinearForm, mult: u32) {
        let field = c.field();
        let co = cubic_coeffs(c);
        assert_eq!(line_multiplicity(&field, &co, l), mult);
    }

    #[test]
    fn three_distinct_lines_detected() {
        assert_eq!(binary_cubic_type(&cubic("x^2*y+y^3", 0)), CubicType::ThreeLines);
        assert_eq!(binary_cubic_type(&cubic("x^2*y+x*y^2", 2)), CubicType::ThreeLines);
        // irreducible cubic over F_2: still three distinct lines over the closure
        assert_eq!(
            binary_cubic_type(&cubic("x^3+x*y^2+y^3", 2)),
            CubicType::ThreeLines
        );
        assert_eq!(binary_cubic_type(&cubic("x^2*y+y^3", 3)), CubicType::ThreeLines);
    }

    #[test]
    fn double_lines_are_extracted_rationally() {
        for p in [0u64, 3, 5, 7, 2, 11] {
            let c = cubic("x^2*y", p);
            match binary_cubic_type(&c) {
                CubicType::DoubleLine { double, simple } => {
                    form_divides(&c, &double, 2);
                    form_divides(&c, &simple, 1);
                }
                other => panic!("char {p}: expected a double line, got {other:?}"),
            }
        }
        // a skew example: (x+y)²(x−y) expanded
        for p in [0u64, 5, 7, 13] {
            let c = cubic("x^3+x^2*y-x*y^2-y^3", p);
            match binary_cubic_type(&c) {
                CubicType::DoubleLine { double, simple } => {
                    form_divides(&c, &double, 2);
                    form_divides(&c, &simple, 1);
                }
                other => panic!("char {p}: expected a double line, got {other:?}"),
            }
        }
        // char 2: (x+y)² · x = x³ + xy²
        let c = cubic("x^3+x*y^2", 2);
        match binary_cubic_type(&c) {
            CubicType::DoubleLine { double, simple } => {
                form_divides(&c, &double, 2);
                form_divides(&c, &simple, 1);
            }
            other => panic!("expected a double line, got {other:?}"),
        }
    }

    #[test]
    fn triple_lines_are_extracted() {
        for p in [0u64, 3, 5, 7, 2] {
            let c = cubic("x^3", p);
            match binary_cubic_type(&c) {
                CubicType::TripleLine { line } => form_divides(&c, &line, 3),
                other => panic!("char {p}: expected a triple line, got {other:?}"),
            }
            let c = cubic("x^3+3*x^2*y+3*x*y^2+y^3", p);
            match binary_cubic_type(&c) {
                CubicType::TripleLine { line } => form_divides(&c, &line, 3),
                other => panic!("char {p}: expected a triple line, got {other:?}"),
            }
        }
        // char-3 specialty: x³ + y³ = (x+y)³
        let c = cubic("x^3+y^3", 3);
        match binary_cubic_type(&c) {
            CubicType::TripleLine { line } => form_divides(&c, &line, 3),
            other => panic!("expected a triple line, got {other:?}"),
        }
        // but x³+y³ is squarefree away from characteristic 3
        assert_eq!(binary_cubic_type(&cubic("x^3+y^3", 0)), CubicType::ThreeLines);
        assert_eq!(binary_cubic_type(&cubic("x^3+y^3", 7)), CubicType::ThreeLines);
    }

    #[test]
    fn zero_cubic_reported() {
        let field = FieldSpec::RATIONALS;
        let z = Polynomial::zero(field, 2);
        assert_eq!(binary_cubic_type(&z), CubicType::Zero);
    }

    #[test]
    fn form_change_sends_forms_to_axes() {
        use crate::jet::substitute_jet;
        let field = FieldSpec::prime(5).unwrap();
        let l1 = (field.from_integer(2), field.from_integer(3));
        let l2 = (field.from_integer(1), field.from_integer(1));
        let phi = linear_form_change(&field, &l1, &l2, 8).unwrap();
        let x = Polynomial::variable(field, 0, 2);
        let y = Polynomial::variable(field, 1, 2);
        let f1 = x.scale(&l1.0).add(&y.scale(&l1.1)).unwrap();
        let f2 = x.scale(&l2.0).add(&y.scale(&l2.1)).unwrap();
        assert_eq!(substitute_jet(&f1, &phi).unwrap(), x);
        assert_eq!(substitute_jet(&f2, &phi).unwrap(), y);
    }
}
