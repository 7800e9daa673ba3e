//! Constructive splitting lemma.
//!
//! A germ of order ≥ 2 decomposes as a nondegenerate quadratic form in
//! some of the variables plus a residual part in the remaining ones.
//! The quadratic part is first brought to normal form by a linear
//! change: away from characteristic 2 it is diagonalized `Σ a_i x_i²`
//! by symmetric completion of the square (the `a_i` are kept as field
//! elements — no square roots are extracted over `F_p`); in
//! characteristic 2 it is decomposed into hyperbolic-type pairs
//! `a_i x_i² + x_i x_{i+1} + a_{i+1} x_{i+1}²` plus a diagonal of pure
//! squares `Σ d_i x_i²`, which belong to the residual block.
//!
//! Afterwards the mixed terms are removed degree by degree: a term of
//! degree `d` divisible by a rank-block variable is absorbed into the
//! quadratic form by a coordinate shift that only perturbs degrees
//! `≥ d+1`, so the loop terminates at the truncation bound.  The
//! accumulated coordinate change is returned and the decomposition
//! `f∘φ = quad + residual` is asserted exactly before returning.

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::jet::{substitute_jet, JetAutomorphism};
use crate::monomial::Monomial;
use crate::poly::Polynomial;

/// Outcome of the splitting procedure.
#[derive(Debug, Clone)]
pub struct SplitResult {
    /// Number of variables carried by the nondegenerate quadratic form
    /// (even in characteristic 2).
    pub quad_rank: usize,
    /// The normalized quadratic form in the first `quad_rank` variables.
    pub quad_form: Polynomial,
    /// The residual part, supported on the last `nvars − quad_rank`
    /// variables: order ≥ 3 away from characteristic 2; pure squares
    /// `Σ d_i x_i²` plus order ≥ 3 in characteristic 2.
    pub residual: Polynomial,
    /// Hyperbolic-type pairs `(i, i+1, a_i, a_{i+1})` (characteristic 2).
    pub pairs: Vec<(usize, usize, Scalar, Scalar)>,
    /// Diagonal square coefficients `(i, a_i)`: the rank block away from
    /// characteristic 2, the residual squares in characteristic 2.
    pub diagonal: Vec<(usize, Scalar)>,
    /// The coordinate change with `f∘transform = quad_form + residual`.
    pub transform: JetAutomorphism,
    pub bound: u32,
}

impl SplitResult {
    /// The residual re-expressed in its own `corank` variables.
    pub fn residual_in_corank_vars(&self) -> Polynomial {
        compress_variables(&self.residual, self.quad_rank)
    }

    pub fn corank(&self) -> usize {
        self.residual.nvars() - self.quad_rank
    }
}

/// Drop the first `skip` variables (which must not occur) and re-index
/// the rest.
fn compress_variables(f: &Polynomial, skip: usize) -> Polynomial {
    let n = f.nvars();
    let mut out = Polynomial::zero(f.field(), n - skip);
    for (m, c) in f.terms() {
        debug_assert!((0..skip).all(|i| m.exp(i) == 0));
        let exps: Vec<u16> = (skip..n).map(|i| m.exp(i)).collect();
        out.add_term(Monomial::from_exps(exps), c.clone());
    }
    out
}

/// `x_i ↦ x_i + delta`, all other variables fixed.
fn elementary_shift(
    field: FieldSpec,
    nvars: usize,
    bound: u32,
    i: usize,
    delta: &Polynomial,
) -> JetAutomorphism {
    let images: Vec<Polynomial> = (0..nvars)
        .map(|j| {
            let xj = Polynomial::variable(field, j, nvars);
            if j == i {
                xj.add(delta).expect("same ring")
            } else {
                xj
            }
        })
        .collect();
    JetAutomorphism::new(images, None, bound).expect("shift is invertible")
}

/// `x_i ↦ c·x_i`, all other variables fixed (`c ≠ 0`).
fn elementary_scale(
    field: FieldSpec,
    nvars: usize,
    bound: u32,
    i: usize,
    c: &Scalar,
) -> JetAutomorphism {
    let images: Vec<Polynomial> = (0..nvars)
        .map(|j| {
            let xj = Polynomial::variable(field, j, nvars);
            if j == i {
                xj.scale(c)
            } else {
                xj
            }
        })
        .collect();
    JetAutomorphism::new(images, None, bound).expect("scale is invertible")
}

/// The permutation sending old variable `v` to position `pos[v]`.
fn permutation_automorphism(
    field: FieldSpec,
    bound: u32,
    pos: &[usize],
) -> JetAutomorphism {
    let n = pos.len();
    let images: Vec<Polynomial> = (0..n)
        .map(|v| Polynomial::variable(field, pos[v], n))
        .collect();
    JetAutomorphism::new(images, None, bound).expect("permutation is invertible")
}

struct Normalization {
    f: Polynomial,
    steps: Vec<JetAutomorphism>,
    rank: usize,
    pairs: Vec<(usize, usize, Scalar, Scalar)>,
    diagonal: Vec<(usize, Scalar)>,
}

fn cross_coeff(f: &Polynomial, i: usize, j: usize) -> Scalar {
    f.coeff(&Monomial::var(i, f.nvars()).mul(&Monomial::var(j, f.nvars())))
}

fn square_coeff(f: &Polynomial, i: usize) -> Scalar {
    f.coeff(&Monomial::var(i, f.nvars()).pow(2))
}

/// Bring the quadratic part to normal form by linear changes and move
/// the rank block to the front.
fn normalize_quadratic(f: &Polynomial, bound: u32) -> Normalization {
    let field = f.field();
    let n = f.nvars();
    let mut work = f.jet(bound);
    let mut steps: Vec<JetAutomorphism> = Vec::new();
    let apply = |work: &mut Polynomial, steps: &mut Vec<JetAutomorphism>, phi: JetAutomorphism| {
        *work = substitute_jet(work, &phi).expect("compatible");
        steps.push(phi);
    };

    let mut processed = vec![false; n];
    // Rank-block variables in the order they were produced: single
    // pivots away from char 2, pair members in char 2.
    let mut rank_vars: Vec<usize> = Vec::new();
    let mut pair_spans: Vec<(usize, usize)> = Vec::new();

    if field.characteristic() != 2 {
        let two = field.from_integer(2);
        loop {
            // A pivot with nonzero square coefficient, manufacturing one
            // from a cross term when necessary.
            let pivot = (0..n)
                .filter(|&i| !processed[i])
                .find(|&i| !square_coeff(&work, i).is_zero());
            let pivot = match pivot {
                Some(i) => i,
                None => {
                    let Some((i, j)) = first_cross(&work, &processed) else {
                        break;
                    };
                    // x_i ↦ x_i + x_j turns c·x_i·x_j into c·x_i·x_j + c·x_j².
                    let xj = Polynomial::variable(field, j, n);
                    apply(&mut work, &mut steps, elementary_shift(field, n, bound, i, &xj));
                    j
                }
            };
            // Kill the pivot's cross terms with every other live variable.
            let a = square_coeff(&work, pivot);
            let scale = a.mul(&two).inverse().expect("pivot nonzero");
            for j in 0..n {
                if j == pivot || processed[j] {
                    continue;
                }
                let b = cross_coeff(&work, pivot, j);
                if b.is_zero() {
                    continue;
                }
                let delta = Polynomial::variable(field, j, n).scale(&b.mul(&scale).neg());
                apply(&mut work, &mut steps, elementary_shift(field, n, bound, pivot, &delta));
            }
            processed[pivot] = true;
            rank_vars.push(pivot);
        }
    } else {
        // Characteristic 2: extract hyperbolic-type pairs.
        while let Some((i, j)) = first_cross(&work, &processed) {
            let c = cross_coeff(&work, i, j);
            if !c.is_one() {
                let inv = c.inverse().expect("nonzero cross");
                apply(&mut work, &mut steps, elementary_scale(field, n, bound, i, &inv));
            }
            // x_j-shifts kill crosses of x_i, then x_i-shifts kill
            // crosses of x_j; neither touches the other pair member's
            // remaining crosses.
            for (host, partner) in [(i, j), (j, i)] {
                for k in 0..n {
                    if k == i || k == j || processed[k] {
                        continue;
                    }
                    let s = cross_coeff(&work, host, k);
                    if s.is_zero() {
                        continue;
                    }
                    let delta = Polynomial::variable(field, k, n).scale(&s);
                    apply(
                        &mut work,
                        &mut steps,
                        elementary_shift(field, n, bound, partner, &delta),
                    );
                }
            }
            processed[i] = true;
            processed[j] = true;
            rank_vars.push(i);
            rank_vars.push(j);
            pair_spans.push((rank_vars.len() - 2, rank_vars.len() - 1));
        }
    }

    // Move the rank block to the front, preserving relative order of the
    // residual variables.
    let rank = rank_vars.len();
    let mut pos = vec![usize::MAX; n];
    for (new, &old) in rank_vars.iter().enumerate() {
        pos[old] = new;
    }
    let mut next = rank;
    for v in 0..n {
        if pos[v] == usize::MAX {
            pos[v] = next;
            next += 1;
        }
    }
    if pos.iter().enumerate().any(|(v, &p)| v != p) {
        apply(&mut work, &mut steps, permutation_automorphism(field, bound, &pos));
    }

    let pairs: Vec<(usize, usize, Scalar, Scalar)> = pair_spans
        .iter()
        .map(|&(i, j)| (i, j, square_coeff(&work, i), square_coeff(&work, j)))
        .collect();
    let diagonal: Vec<(usize, Scalar)> = if field.characteristic() != 2 {
        (0..rank).map(|i| (i, square_coeff(&work, i))).collect()
    } else {
        (rank..n)
            .map(|i| (i, square_coeff(&work, i)))
            .filter(|(_, d)| !d.is_zero())
            .collect()
    };

    Normalization {
        f: work,
        steps,
        rank,
        pairs,
        diagonal,
    }
}

/// Lowest-index cross term among unprocessed variables.
fn first_cross(f: &Polynomial, processed: &[bool]) -> Option<(usize, usize)> {
    let n = f.nvars();
    for i in 0..n {
        if processed[i] {
            continue;
        }
        for j in i + 1..n {
            if processed[j] {
                continue;
            }
            if !cross_coeff(f, i, j).is_zero() {
                return Some((i, j));
            }
        }
    }
    None
}

/// Linear change normalizing the quadratic part; returns the
/// automorphism and the normalized 2-jet.
pub fn quadratic_normal_form(f: &Polynomial) -> Result<(JetAutomorphism, Polynomial)> {
    if let Some(d) = f.order().finite() {
        if d < 2 {
            return Err(Error::OrderTooSmall(d, 2));
        }
    }
    let norm = normalize_quadratic(&f.homogeneous_part(2), 2);
    let transform = fold_steps(f.field(), f.nvars(), 2, norm.steps);
    Ok((transform, norm.f.homogeneous_part(2)))
}

fn fold_steps(
    field: FieldSpec,
    nvars: usize,
    bound: u32,
    steps: Vec<JetAutomorphism>,
) -> JetAutomorphism {
    let mut acc = JetAutomorphism::identity(field, nvars, bound);
    for s in steps {
        acc = acc.then(&s).expect("compatible composition");
    }
    acc
}

/// Split `f` into a nondegenerate quadratic form plus a residual part
/// in the corank variables, at truncation bound `bound`.
pub fn split(f: &Polynomial, bound: u32) -> Result<SplitResult> {
    if let Some(d) = f.order().finite() {
        if d < 2 {
            return Err(Error::OrderTooSmall(d, 2));
        }
    }
    let field = f.field();
    let n = f.nvars();
    let original = f.jet(bound);
    let mut norm = normalize_quadratic(&original, bound);
    let rank = norm.rank;
    let mut work = norm.f.clone();
    let mut steps = std::mem::take(&mut norm.steps);
    let char2 = field.characteristic() == 2;

    // Eliminate mixed terms one degree at a time.  All degree-d terms
    // touching the rank block are absorbed by a single simultaneous
    // shift: each term c·x_i·m (i the first rank variable dividing it)
    // contributes −c/(2a_i)·m to the shift of x_i (diagonal pivot), or
    // c·m to the shift of the pair partner of x_i in characteristic 2,
    // where the cross term x_i·x_partner produces the cancelling copy.
    // Interactions between the shifts only perturb degrees ≥ d+1.
    for d in 3..=bound {
        let mut deltas: Vec<Polynomial> = vec![Polynomial::zero(field, n); n];
        let mut any = false;
        for (m, c) in work.terms() {
            if m.degree() != d {
                continue;
            }
            let Some(i) = (0..rank).find(|&i| m.exp(i) > 0) else {
                continue;
            };
            any = true;
            let rest = m.try_div(&Monomial::var(i, n)).expect("divides");
            if char2 {
                let partner = if i % 2 == 0 { i + 1 } else { i - 1 };
                deltas[partner].add_term(rest, c.clone());
            } else {
                let a = square_coeff(&work, i);
                let two_a_inv = a.mul(&field.from_integer(2)).inverse().expect("pivot");
                deltas[i].add_term(rest, c.mul(&two_a_inv).neg());
            }
        }
        if !any {
            continue;
        }
        let images: Vec<Polynomial> = (0..n)
            .map(|j| {
                Polynomial::variable(field, j, n)
                    .add(&deltas[j])
                    .expect("same ring")
            })
            .collect();
        let phi = JetAutomorphism::new(images, None, bound).expect("shift is invertible");
        work = substitute_jet(&work, &phi).expect("compatible");
        steps.push(phi);
        debug_assert!(work
            .terms()
            .all(|(m, _)| m.degree() != d || (0..rank).all(|i| m.exp(i) == 0)));
    }

    let transform = fold_steps(field, n, bound, steps);
    let recon = substitute_jet(&original, &transform).expect("compatible");
    assert_eq!(
        recon, work,
        "internal error: splitting transform fails to reconstruct the germ"
    );

    let quad_form = {
        let quad = work.homogeneous_part(2);
        let mut q = Polynomial::zero(field, n);
        for (m, c) in quad.terms() {
            if (0..rank).any(|i| m.exp(i) > 0) {
                q.add_term(m.clone(), c.clone());
            }
        }
        q
    };
    let residual = work.sub(&quad_form).expect("same ring");
    debug_assert!(residual
        .terms()
        .all(|(m, _)| (0..rank).all(|i| m.exp(i) == 0)));

    Ok(SplitResult {
        quad_rank: rank,
        quad_form,
        residual,
        pairs: norm.pairs,
        diagonal: norm.diagonal,
        transform,
        bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariants::{milnor_number, tjurina_number, DEFAULT_CAP};
    use crate::jet::random_automorphism;
    use crate::parse::parse_polynomial;
    use crate::poly::default_var_names;

    fn poly(text: &str, char_p: u64, nvars: usize) -> Polynomial {
        let field = if char_p == 0 {
            FieldSpec::RATIONALS
        } else {
            FieldSpec::prime(char_p).unwrap()
        };
        parse_polynomial(text, field, &default_var_names(nvars)).unwrap()
    }

    #[test]
    fn hyperbolic_plane_char_zero() {
        let (_, q) = quadratic_normal_form(&poly("x*y", 0, 2)).unwrap();
        // Diagonal with both coefficients nonzero.
        assert_eq!(q.num_terms(), 2);
        for i in 0..2 {
            assert!(!q.coeff(&Monomial::var(i, 2).pow(2)).is_zero());
        }
    }

    #[test]
    fn hyperbolic_plane_char_two() {
        let s = split(&poly("x*y", 2, 2), 4).unwrap();
        assert_eq!(s.quad_rank, 2);
        assert_eq!(s.pairs.len(), 1);
        assert_eq!(s.quad_form, poly("x*y", 2, 2));
        assert!(s.residual.is_zero());
    }

    #[test]
    fn char_two_square_goes_to_residual() {
        let s = split(&poly("x^2 + y^3", 2, 2), 6).unwrap();
        assert_eq!(s.quad_rank, 0);
        assert_eq!(s.diagonal.len(), 1);
        assert_eq!(s.residual, poly("x^2 + y^3", 2, 2));
        assert!(s.quad_form.is_zero());
    }

    #[test]
    fn completing_the_square_absorbs_mixed_terms() {
        let s = split(&poly("x^2 + 2*x*y^2 + y^3 + y^4", 0, 2), 6).unwrap();
        assert_eq!(s.quad_rank, 1);
        assert_eq!(s.quad_form, poly("x^2", 0, 2));
        assert_eq!(s.residual, poly("y^3", 0, 2));
        let r = s.residual_in_corank_vars();
        assert_eq!(r.nvars(), 1);
        assert_eq!(r.to_string(), "x^3");
    }

    #[test]
    fn already_split_inputs_get_identity_transform() {
        let s = split(&poly("x^2 + y^3", 0, 2), 6).unwrap();
        assert_eq!(s.quad_form, poly("x^2", 0, 2));
        assert_eq!(s.residual, poly("y^3", 0, 2));
        assert_eq!(
            s.transform,
            JetAutomorphism::identity(FieldSpec::RATIONALS, 2, 6)
        );

        let s = split(&poly("x*y + z^3", 2, 3), 4).unwrap();
        assert_eq!(s.quad_rank, 2);
        assert_eq!(s.residual, poly("z^3", 2, 3));
    }

    #[test]
    fn three_variable_char_two_mix() {
        // x² is a pure square; the cross pair is (y, z).
        let f = poly("x^2 + y*z + x*y^2 + z^3", 2, 3);
        let s = split(&f, 8).unwrap();
        assert_eq!(s.quad_rank, 2);
        assert_eq!(s.pairs.len(), 1);
        assert_eq!(s.corank(), 1);
        // Residual lives in the last variable only.
        for (m, _) in s.residual.terms() {
            assert_eq!(m.exp(0), 0);
            assert_eq!(m.exp(1), 0);
        }
        // The residual contains the pure square with coefficient 1.
        assert_eq!(s.diagonal.len(), 1);
    }

    #[test]
    fn split_preserves_milnor_and_tjurina() {
        for (text, p, n) in [
            ("x^2 + 2*x*y^2 + y^3 + y^4", 0u64, 2usize),
            ("x^2 + x*y^3 + y^4", 0, 2),
            ("x^2 + y^2 + x*z^2 + z^3 + y^5", 0, 3),
            ("x^2 + x*y^2 + y^3", 3, 2),
            ("x*y + x^3 + y^4 + x*z^2 + z^3", 5, 3),
            ("x*y + x*z^2 + z^3", 2, 3),
        ] {
            let f = poly(text, p, n);
            let s = split(&f, 16).unwrap();
            let mu_f = milnor_number(&f, DEFAULT_CAP).unwrap().finite();
            let tau_f = tjurina_number(&f, DEFAULT_CAP).unwrap().finite();
            let r = s.residual_in_corank_vars();
            if r.nvars() == 0 || r.is_zero() {
                // Nondegenerate quadric: μ = τ = 1.
                assert_eq!(mu_f, Some(1), "{text}");
                continue;
            }
            let mu_r = milnor_number(&r, DEFAULT_CAP).unwrap().finite();
            let tau_r = tjurina_number(&r, DEFAULT_CAP).unwrap().finite();
            assert_eq!(mu_f, mu_r, "mu transfer for {text}");
            assert_eq!(tau_f, tau_r, "tau transfer for {text}");
        }
    }

    #[test]
    fn residual_invariants_survive_random_precomposition() {
        for p in [0u64, 3, 2] {
            let field = if p == 0 {
                FieldSpec::RATIONALS
            } else {
                FieldSpec::prime(p).unwrap()
            };
            let f = if p == 2 {
                poly("x*y + x^3 + y^4 + z^3", 2, 3)
            } else {
                poly("x^2 + y^3 + z^4", p, 3)
            };
            let base = split(&f, 12).unwrap();
            let base_res = base.residual_in_corank_vars();
            let base_tau = tjurina_number(&base_res, DEFAULT_CAP).unwrap().finite();
            for seed in 0..3 {
                let psi = random_automorphism(3, field, 12, seed, false);
                let g = substitute_jet(&f, &psi).unwrap();
                let s = split(&g, 12).unwrap();
                assert_eq!(s.quad_rank, base.quad_rank, "rank, p={p} seed={seed}");
                let r = s.residual_in_corank_vars();
                assert_eq!(
                    tjurina_number(&r, DEFAULT_CAP).unwrap().finite(),
                    base_tau,
                    "tau of residual, p={p} seed={seed}"
                );
            }
        }
    }

    #[test]
    fn order_too_small_is_rejected() {
        assert_eq!(
            split(&poly("x + y^2", 0, 2), 6).unwrap_err(),
            Error::OrderTooSmall(1, 2)
        );
    }
}
