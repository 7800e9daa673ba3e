//! Semiuniversal unfoldings and desk-scale deformation scans.
//!
//! For an isolated singularity `f` the unfolding
//! `F(x, t) = f(x) + Σ t_j·g_j(x)` over representatives `g_1, …, g_τ`
//! of a basis of the Tjurina algebra `K{x}/⟨f, ∂f⟩` is semiuniversal;
//! we always take the standard monomials of a certified standard basis
//! of the Tjurina ideal as the representatives.
//!
//! The scans sample parameter vectors and look at the fibre germ at the
//! origin only: semicontinuity says `τ(F_t) ≤ τ(f)` (and `μ(F_t) ≤ μ(f)`
//! when `μ(f)` is finite) for `t` near 0, and over an exact coefficient
//! field every evaluation is a genuine specialization, so a violation at
//! any sampled point would be a real counterexample, not noise.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::classify::{classify_contact, ClassLabel};
use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::invariants::{
    adaptive_quotient_dim, milnor_number, tjurina_ideal_gens, tjurina_number,
};
use crate::poly::Polynomial;
use crate::stdbasis::QuotientDim;

/// A semiuniversal unfolding `F(x,t) = f + Σ t_j·g_j` of an isolated
/// singularity, with the `g_j` monomial representatives of a basis of
/// the Tjurina algebra.
#[derive(Debug, Clone)]
pub struct Unfolding {
    base: Polynomial,
    basis: Vec<Polynomial>,
}

impl Unfolding {
    pub fn base(&self) -> &Polynomial {
        &self.base
    }

    /// The monomial basis representatives `g_1, …, g_τ`.
    pub fn basis(&self) -> &[Polynomial] {
        &self.basis
    }

    /// Number of unfolding parameters, equal to the certified τ.
    pub fn nparams(&self) -> usize {
        self.basis.len()
    }
}

/// Build the semiuniversal unfolding of `f` from the standard monomials
/// of its Tjurina ideal, in the local order (so `g_1 = 1` comes first).
pub fn tjurina_basis_unfolding(f: &Polynomial, cap: u32) -> Result<Unfolding> {
    if !f.in_maximal_ideal() {
        return Err(Error::NotInMaximalIdeal);
    }
    let (dim, sb) = adaptive_quotient_dim(&tjurina_ideal_gens(f), cap);
    let QuotientDim::FiniteDim(tau) = dim else {
        return Err(Error::NotIsolated(cap));
    };
    let field = f.field();
    let basis: Vec<Polynomial> = sb
        .standard_monomials()
        .into_iter()
        .map(|m| Polynomial::term(field, m, field.one()))
        .collect();
    debug_assert_eq!(basis.len() as u64, tau);
    Ok(Unfolding {
        base: f.clone(),
        basis,
    })
}

/// The fibre `F_t = f + Σ t_j·g_j` at a parameter vector.
pub fn evaluate_unfolding(u: &Unfolding, t: &[Scalar]) -> Result<Polynomial> {
    if t.len() != u.nparams() {
        return Err(Error::ArityMismatch(t.len(), u.nparams()));
    }
    let mut out = u.base.clone();
    for (tj, gj) in t.iter().zip(&u.basis) {
        out = out.add(&gj.scale(tj))?;
    }
    Ok(out)
}

/// Result of a sampling scan over an unfolding.
#[derive(Debug, Clone, Serialize)]
pub struct ScanReport {
    pub samples: u64,
    pub tau_base: u64,
    pub mu_base: Option<u64>,
    pub max_tau_observed: u64,
    pub max_mu_observed: Option<u64>,
    pub violations: Vec<String>,
    pub labels_observed: Vec<String>,
}

fn sample_scalar(rng: &mut ChaCha8Rng, field: FieldSpec) -> Scalar {
    match field.characteristic() {
        // Small-height rationals keep exact arithmetic fast.
        0 => {
            let num = rng.gen_range(-9i64..=9);
            let den = rng.gen_range(1i64..=9);
            field
                .from_fraction(num, den)
                .expect("nonzero denominator")
        }
        p => field.from_integer(rng.gen_range(0..p) as i64),
    }
}

fn sample_vector(rng: &mut ChaCha8Rng, field: FieldSpec, len: usize) -> Vec<Scalar> {
    (0..len).map(|_| sample_scalar(rng, field)).collect()
}

/// Invariants of the fibre germ at the origin.  A fibre with nonzero
/// constant term misses the origin entirely: both numbers are 0 there.
fn fibre_tau_mu(ft: &Polynomial, cap: u32, track_mu: bool) -> (Option<u64>, Option<Option<u64>>) {
    if !ft.in_maximal_ideal() {
        return (Some(0), if track_mu { Some(Some(0)) } else { None });
    }
    let tau = tjurina_number(ft, cap)
        .expect("fibre is in the maximal ideal")
        .finite();
    let mu = track_mu.then(|| {
        milnor_number(ft, cap)
            .expect("fibre is in the maximal ideal")
            .finite()
    });
    (tau, mu)
}

/// Sample `samples` parameter vectors and check the semicontinuity
/// inequalities `τ(F_t) ≤ τ(f)` and, when `μ(f)` is certified finite,
/// `μ(F_t) ≤ μ(f)`, always at the origin of the fibre.  Any violation
/// (or failure to certify a fibre value that must be finite) is
/// reported verbatim.
pub fn semicontinuity_scan(u: &Unfolding, samples: u64, seed: u64, cap: u32) -> Result<ScanReport> {
    let tau_base = tjurina_number(&u.base, cap)?
        .finite()
        .ok_or(Error::NotIsolated(cap))?;
    let mu_base = milnor_number(&u.base, cap)?.finite();
    // dim K{x}/I = d forces m^d ⊆ I, so this bound certifies every
    // fibre value allowed by semicontinuity.
    let fibre_cap = cap.max(tau_base as u32 + 2);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let field = u.base.field();
    let mut max_tau = 0u64;
    let mut max_mu = mu_base.map(|_| 0u64);
    let mut violations = Vec::new();
    for i in 0..samples {
        let t = sample_vector(&mut rng, field, u.nparams());
        let ft = evaluate_unfolding(u, &t)?;
        let (tau, mu) = fibre_tau_mu(&ft, fibre_cap, mu_base.is_some());
        match tau {
            Some(v) => {
                max_tau = max_tau.max(v);
                if v > tau_base {
                    violations.push(format!(
                        "sample {i}: tau {v} exceeds base tau {tau_base}"
                    ));
                }
            }
            None => violations.push(format!(
                "sample {i}: tau not certified finite up to {fibre_cap}"
            )),
        }
        if let (Some(bound), Some(obs)) = (mu_base, mu) {
            match obs {
                Some(v) => {
                    max_mu = max_mu.map(|m| m.max(v));
                    if v > bound {
                        violations.push(format!(
                            "sample {i}: mu {v} exceeds base mu {bound}"
                        ));
                    }
                }
                None => violations.push(format!(
                    "sample {i}: mu not certified finite up to {fibre_cap}"
                )),
            }
        }
    }
    Ok(ScanReport {
        samples,
        tau_base,
        mu_base,
        max_tau_observed: max_tau,
        max_mu_observed: max_mu,
        violations,
        labels_observed: Vec::new(),
    })
}

/// Sample the unfolding and collect the contact classes observed at the
/// origin of the fibres (sorted, deduplicated).  Fibres that miss the
/// origin (nonzero constant term) are skipped — there is no germ there
/// to classify.
pub fn adjacency_scan(u: &Unfolding, samples: u64, seed: u64, cap: u32) -> Result<Vec<ClassLabel>> {
    let tau_base = tjurina_number(&u.base, cap)?
        .finite()
        .ok_or(Error::NotIsolated(cap))?;
    let fibre_cap = cap.max(tau_base as u32 + 2);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let field = u.base.field();
    let mut labels: Vec<ClassLabel> = Vec::new();
    for _ in 0..samples {
        let t = sample_vector(&mut rng, field, u.nparams());
        let ft = evaluate_unfolding(u, &t)?;
        if !ft.in_maximal_ideal() {
            continue;
        }
        let label = classify_contact(&ft, fibre_cap);
        if !labels.contains(&label) {
            labels.push(label);
        }
    }
    labels.sort_by_key(|l| (l.family, l.index, l.variant));
    Ok(labels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::Family;
    use crate::monomial::Monomial;
    use crate::parse::parse_polynomial;
    use crate::poly::default_var_names;

    fn poly(src: &str, p: u64, nvars: usize) -> Polynomial {
        let field = if p == 0 {
            FieldSpec::RATIONALS
        } else {
            FieldSpec::prime(p).unwrap()
        };
        parse_polynomial(src, field, &default_var_names(nvars)).unwrap()
    }

    fn basis_monomials(u: &Unfolding) -> Vec<Monomial> {
        u.basis()
            .iter()
            .map(|g| g.terms().next().unwrap().0.clone())
            .collect()
    }

    #[test]
    fn cusp_unfolding_has_the_classical_basis() {
        let u = tjurina_basis_unfolding(&poly("x^2+y^3", 0, 2), 16).unwrap();
        assert_eq!(u.nparams(), 2);
        assert_eq!(
            basis_monomials(&u),
            vec![Monomial::one(2), Monomial::var(1, 2)],
            "tj = <x, y^2>, standard monomials 1 and y"
        );
    }

    #[test]
    fn one_variable_minimum_gets_a_constant() {
        let u = tjurina_basis_unfolding(&poly("x^2", 0, 1), 8).unwrap();
        assert_eq!(u.nparams(), 1);
        assert_eq!(basis_monomials(&u), vec![Monomial::one(1)]);
    }

    #[test]
    fn characteristic_two_example_basis() {
        // tj(y² + x³y) has leading ideal ⟨y², x²y, x³⟩; five standard
        // monomials remain.
        let u = tjurina_basis_unfolding(&poly("y^2+x^3*y", 2, 2), 16).unwrap();
        assert_eq!(u.nparams(), 5);
        let monos = basis_monomials(&u);
        let expect: Vec<Monomial> = [[0u16, 0], [1, 0], [0, 1], [2, 0], [1, 1]]
            .iter()
            .map(|e| Monomial::from_exps(e.to_vec()))
            .collect();
        assert_eq!(monos, expect);
    }

    #[test]
    fn nonisolated_bases_are_refused() {
        let err = tjurina_basis_unfolding(&poly("x^2*y^2", 0, 2), 12).unwrap_err();
        assert!(matches!(err, Error::NotIsolated(_)));
    }

    #[test]
    fn evaluation_at_zero_returns_the_base() {
        let f = poly("x^2+y^3", 0, 2);
        let u = tjurina_basis_unfolding(&f, 16).unwrap();
        let zero = vec![FieldSpec::RATIONALS.zero(); u.nparams()];
        assert_eq!(evaluate_unfolding(&u, &zero).unwrap(), f);
        // Wrong arity is rejected.
        assert!(matches!(
            evaluate_unfolding(&u, &[]).unwrap_err(),
            Error::ArityMismatch(0, 2)
        ));
    }

    #[test]
    fn evaluation_shifts_single_parameters() {
        let f = poly("x^2+y^3", 0, 2);
        let u = tjurina_basis_unfolding(&f, 16).unwrap();
        let q = FieldSpec::RATIONALS;
        // Basis order is (1, y): t = (0, 1) adds y.
        let t = vec![q.zero(), q.one()];
        assert_eq!(evaluate_unfolding(&u, &t).unwrap(), poly("x^2+y^3+y", 0, 2));
        let t = vec![q.one(), q.zero()];
        assert_eq!(evaluate_unfolding(&u, &t).unwrap(), poly("x^2+y^3+1", 0, 2));
    }

    #[test]
    fn semicontinuity_holds_for_the_cusp() {
        let u = tjurina_basis_unfolding(&poly("x^2+y^3", 0, 2), 16).unwrap();
        let report = semicontinuity_scan(&u, 100, 7, 16).unwrap();
        assert_eq!(report.samples, 100);
        assert_eq!(report.tau_base, 2);
        assert_eq!(report.mu_base, Some(2));
        assert!(report.violations.is_empty(), "{:?}", report.violations);
        assert!(report.max_tau_observed <= 2);
    }

    #[test]
    fn semicontinuity_holds_in_positive_characteristic() {
        // μ is infinite here (char 2 kills the x-derivative), so only τ
        // is tracked.
        let u = tjurina_basis_unfolding(&poly("y^2+x^3*y", 2, 2), 16).unwrap();
        let report = semicontinuity_scan(&u, 200, 11, 16).unwrap();
        assert_eq!(report.tau_base, 5);
        assert_eq!(report.mu_base, None);
        assert!(report.violations.is_empty(), "{:?}", report.violations);
    }

    #[test]
    fn adjacency_of_the_cusp_only_reaches_simpler_classes() {
        let u = tjurina_basis_unfolding(&poly("x^2+y^3", 0, 2), 16).unwrap();
        let labels = adjacency_scan(&u, 150, 3, 16).unwrap();
        assert!(!labels.is_empty());
        for l in &labels {
            assert!(
                matches!(l.family, Family::A | Family::Smooth),
                "unexpected label {l}"
            );
            if l.family == Family::A {
                assert!(l.index.unwrap() <= 2);
            }
        }
    }

    #[test]
    fn adjacency_of_d4_respects_the_tau_bound() {
        let u = tjurina_basis_unfolding(&poly("x^2*y+y^3", 0, 2), 16).unwrap();
        assert_eq!(u.nparams(), 4);
        let labels = adjacency_scan(&u, 120, 5, 16).unwrap();
        for l in &labels {
            match l.family {
                Family::A => assert!(l.index.unwrap() <= 3, "tau bound broken by {l}"),
                Family::D => assert_eq!(l.index, Some(4)),
                Family::Smooth => {}
                other => panic!("unexpected family {other:?} in {l}"),
            }
        }
    }
}
