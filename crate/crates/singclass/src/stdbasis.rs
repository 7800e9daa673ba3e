//! Standard bases in the truncated local ring.
//!
//! All computations happen in `K[x]/m^{N+1}` with respect to the local
//! degree ordering `ds`: a monomial of lower total degree is larger, and
//! ties are broken reverse-lexicographically.  Because the ambient ring
//! is finite dimensional, the Buchberger loop terminates unconditionally
//! and a pair whose lcm exceeds the bound can be skipped outright (its
//! s-polynomial is supported entirely beyond the bound).
//!
//! A computed basis certifies completeness when every monomial of some
//! degree `k ≤ N` lies in the leading ideal.  In that case `m^k` lies in
//! the ideal itself, not merely in its truncation: `m^k ⊆ I + m^{N+1}`
//! together with `k ≤ N` gives `m^k ⊆ I + m·m^k`, and Nakayama's lemma
//! finishes the argument.  Quotient dimensions reported as finite are
//! therefore exact, not jet-level approximations.

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::monomial::{monomials_of_degree, monomials_up_to_degree, Monomial};
use crate::poly::Polynomial;
use std::collections::BTreeSet;

/// A list of ideal generators together with the truncation bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdealGens {
    field: FieldSpec,
    nvars: usize,
    generators: Vec<Polynomial>,
    bound: u32,
}

impl IdealGens {
    pub fn new(generators: Vec<Polynomial>, bound: u32) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::InvalidInput("ideal needs at least one generator".into()));
        }
        if bound == 0 {
            return Err(Error::InvalidInput("jet bound must be positive".into()));
        }
        let field = generators[0].field();
        let nvars = generators[0].nvars();
        for g in &generators[1..] {
            if g.field() != field {
                return Err(Error::FieldMismatch(field.to_string(), g.field().to_string()));
            }
            if g.nvars() != nvars {
                return Err(Error::ArityMismatch(nvars, g.nvars()));
            }
        }
        Ok(IdealGens {
            field,
            nvars,
            generators: generators.iter().map(|g| g.jet(bound)).collect(),
            bound,
        })
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn bound(&self) -> u32 {
        self.bound
    }

    /// The same generators re-truncated at a different bound.
    pub fn with_bound(&self, bound: u32) -> Result<IdealGens> {
        IdealGens::new(self.generators.clone(), bound)
    }
}

/// Exact or bound-limited quotient dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuotientDim {
    /// The dimension of `K{x}/I`, certified exact by a complete staircase.
    FiniteDim(u64),
    /// No power of the maximal ideal was captured up to the bound; the
    /// payload is the bound and the number of standard monomials seen,
    /// which is a lower bound for the true dimension.
    NotFiniteUpTo { bound: u32, lower_bound: u64 },
}

impl QuotientDim {
    pub fn finite(&self) -> Option<u64> {
        match self {
            QuotientDim::FiniteDim(d) => Some(*d),
            QuotientDim::NotFiniteUpTo { .. } => None,
        }
    }
}

/// A reduced standard basis of an ideal in the truncated local ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StandardBasis {
    field: FieldSpec,
    nvars: usize,
    bound: u32,
    /// Monic, fully interreduced, sorted with the `ds`-largest leading
    /// monomial first.
    elements: Vec<Polynomial>,
    /// Leading monomials of `elements`: the minimal generating set of
    /// the leading ideal.
    staircase: Vec<Monomial>,
    /// Least `k ≤ bound` with `m^k` inside the leading ideal, if any.
    complete_from: Option<u32>,
}

/// Compute the reduced standard basis of `(I + m^{N+1})/m^{N+1}`.
pub fn standard_basis(ideal: &IdealGens) -> StandardBasis {
    StandardBasis::compute(ideal)
}

/// `dim_K K{x}/I` when certifiable at the ideal's bound.
pub fn quotient_dim(ideal: &IdealGens) -> QuotientDim {
    StandardBasis::compute(ideal).quotient_dim()
}

/// Whether `m^k ⊆ I` (certified via normal forms of all degree-`k`
/// monomials, then lifted from the truncation by Nakayama).
pub fn contains_m_power(ideal: &IdealGens, k: u32) -> Result<bool> {
    StandardBasis::compute(ideal).contains_m_power(k)
}

impl StandardBasis {
    pub fn compute(ideal: &IdealGens) -> StandardBasis {
        let bound = ideal.bound();
        let mut basis: Vec<Polynomial> = Vec::new();
        for g in ideal.generators() {
            let g = g.jet(bound);
            if !g.is_zero() {
                basis.push(g.monic());
            }
        }
        // Pair queue ordered by (deg lcm, lcm, i, j): low-degree lcms
        // first.  Pairs whose lcm exceeds the bound are never queued.
        let mut queue: BTreeSet<(u32, Monomial, usize, usize)> = BTreeSet::new();
        let enqueue = |queue: &mut BTreeSet<(u32, Monomial, usize, usize)>,
                           basis: &[Polynomial],
                           i: usize,
                           j: usize| {
            let (a, b) = (
                basis[i].leading_monomial().unwrap(),
                basis[j].leading_monomial().unwrap(),
            );
            let l = a.lcm(b);
            if l.degree() <= bound {
                queue.insert((l.degree(), l, i, j));
            }
        };
        for i in 0..basis.len() {
            for j in i + 1..basis.len() {
                enqueue(&mut queue, &basis, i, j);
            }
        }
        while let Some((_, lcm, i, j)) = queue.pop_first() {
            let s = spoly(&basis[i], &basis[j], &lcm, bound);
            let r = reduce_full(&s, &basis, bound);
            if !r.is_zero() {
                let r = r.monic();
                let new = basis.len();
                basis.push(r);
                for i in 0..new {
                    enqueue(&mut queue, &basis, i, new);
                }
            }
        }
        // Minimalize: keep only elements whose leading monomial is not a
        // multiple of another kept leading monomial.
        basis.sort_by(|a, b| {
            b.leading_monomial()
                .unwrap()
                .cmp(a.leading_monomial().unwrap())
        });
        let mut kept: Vec<Polynomial> = Vec::new();
        for g in basis {
            let lm = g.leading_monomial().unwrap();
            if !kept
                .iter()
                .any(|h| h.leading_monomial().unwrap().divides(lm))
            {
                kept.push(g);
            }
        }
        // Tail-reduce for the canonical reduced basis.
        let reduced: Vec<Polynomial> = (0..kept.len())
            .map(|i| {
                let others: Vec<Polynomial> = kept
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| *j != i)
                    .map(|(_, g)| g.clone())
                    .collect();
                let lead = Polynomial::term(
                    ideal.field(),
                    kept[i].leading_monomial().unwrap().clone(),
                    ideal.field().one(),
                );
                let tail = kept[i].sub(&lead).expect("same ring");
                lead.add(&reduce_full(&tail, &others, bound)).expect("same ring")
            })
            .collect();
        let staircase: Vec<Monomial> = reduced
            .iter()
            .map(|g| g.leading_monomial().unwrap().clone())
            .collect();
        let complete_from = (0..=bound).find(|&k| {
            monomials_of_degree(ideal.nvars(), k)
                .iter()
                .all(|m| staircase.iter().any(|s| s.divides(m)))
        });
        StandardBasis {
            field: ideal.field(),
            nvars: ideal.nvars(),
            bound,
            elements: reduced,
            staircase,
            complete_from,
        }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn bound(&self) -> u32 {
        self.bound
    }

    pub fn elements(&self) -> &[Polynomial] {
        &self.elements
    }

    /// Minimal generators of the leading ideal, `ds`-descending.
    pub fn staircase(&self) -> &[Monomial] {
        &self.staircase
    }

    /// Whether some power `m^k`, `k ≤ bound`, lies inside the leading
    /// ideal — the certificate that finite answers are exact.
    pub fn complete_flag(&self) -> bool {
        self.complete_from.is_some()
    }

    /// The least `k` with `m^k` inside the leading ideal, if any.
    pub fn complete_from(&self) -> Option<u32> {
        self.complete_from
    }

    pub fn in_leading_ideal(&self, m: &Monomial) -> bool {
        self.staircase.iter().any(|s| s.divides(m))
    }

    /// Fully reduce `f`: the remainder has no term divisible by a
    /// staircase monomial and differs from `f` by an ideal element (at
    /// the bound).
    pub fn normal_form(&self, f: &Polynomial) -> Result<Polynomial> {
        if f.field() != self.field {
            return Err(Error::FieldMismatch(self.field.to_string(), f.field().to_string()));
        }
        if f.nvars() != self.nvars {
            return Err(Error::ArityMismatch(self.nvars, f.nvars()));
        }
        Ok(reduce_full(f, &self.elements, self.bound))
    }

    /// Monomials outside the leading ideal, `ds`-descending (so starting
    /// with 1), up to the bound.  When the basis is complete this is the
    /// full, exact monomial basis of `K{x}/I`.
    pub fn standard_monomials(&self) -> Vec<Monomial> {
        let top = match self.complete_from {
            Some(k) => k.saturating_sub(1),
            None => self.bound,
        };
        monomials_up_to_degree(self.nvars, top)
            .into_iter()
            .filter(|m| !self.in_leading_ideal(m))
            .collect()
    }

    pub fn quotient_dim(&self) -> QuotientDim {
        let count = self.standard_monomials().len() as u64;
        if self.complete_flag() {
            QuotientDim::FiniteDim(count)
        } else {
            QuotientDim::NotFiniteUpTo {
                bound: self.bound,
                lower_bound: count,
            }
        }
    }

    /// The standard monomial of maximal total degree (`ds`-smallest,
    /// with the ordering's tie-break); `None` unless the basis is
    /// complete.
    pub fn highcorner(&self) -> Option<Monomial> {
        if !self.complete_flag() {
            return None;
        }
        self.standard_monomials().into_iter().min()
    }

    /// Whether every monomial of degree `k` reduces to zero — i.e.
    /// `m^k ⊆ I`, exactly (Nakayama lifts the truncated certificate).
    pub fn contains_m_power(&self, k: u32) -> Result<bool> {
        if k > self.bound {
            return Err(Error::BoundTooSmall {
                bound: self.bound,
                needed: k,
            });
        }
        Ok(monomials_of_degree(self.nvars, k).into_iter().all(|m| {
            reduce_full(
                &Polynomial::term(self.field, m, self.field.one()),
                &self.elements,
                self.bound,
            )
            .is_zero()
        }))
    }
}

/// The s-polynomial of two monic elements, truncated.
fn spoly(f: &Polynomial, g: &Polynomial, lcm: &Monomial, bound: u32) -> Polynomial {
    let one = f.field().one();
    let mf = lcm.try_div(f.leading_monomial().unwrap()).unwrap();
    let mg = lcm.try_div(g.leading_monomial().unwrap()).unwrap();
    f.mul_term(&mf, &one)
        .sub(&g.mul_term(&mg, &one))
        .expect("same ring")
        .jet(bound)
}

/// Full reduction of `f` (already truncated) by `basis` (all monic) in
/// the jet ring: no term of the result is divisible by any basis leading
/// monomial.  Every reduction step is re-truncated, which keeps the work
/// polynomial inside the finite jet ring and guarantees termination:
/// each step strictly lowers the leading monomial in the `ds` order.
fn reduce_full(f: &Polynomial, basis: &[Polynomial], bound: u32) -> Polynomial {
    let field = f.field();
    let mut remainder = Polynomial::zero(field, f.nvars());
    let mut work = f.jet(bound);
    'outer: while let Some(lm) = work.leading_monomial().cloned() {
        let lc = work.leading_coeff().unwrap().clone();
        for g in basis {
            let glm = g.leading_monomial().unwrap();
            if glm.divides(&lm) {
                let q = lm.try_div(glm).unwrap();
                work = work
                    .sub(&g.mul_term(&q, &lc).jet(bound))
                    .expect("same ring");
                continue 'outer;
            }
        }
        remainder.add_term(lm.clone(), lc.clone());
        let lead = Polynomial::term(field, lm, lc);
        work = work.sub(&lead).expect("same ring");
    }
    remainder
}

/// Dimension of `K[x]/(I + m^{N+1})` by dense row reduction over the
/// full monomial basis of the jet space — an independent check on the
/// standard-basis machinery.
pub fn jet_quotient_dim_oracle(ideal: &IdealGens) -> u64 {
    let n = ideal.nvars();
    let bound = ideal.bound();
    let cols: Vec<Monomial> = monomials_up_to_degree(n, bound);
    let col_index: std::collections::BTreeMap<&Monomial, usize> =
        cols.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    for g in ideal.generators() {
        if g.is_zero() {
            continue;
        }
        let max_mult = bound - g.order().finite().expect("nonzero");
        for m in monomials_up_to_degree(n, max_mult) {
            let prod = g.mul_term(&m, &ideal.field().one()).jet(bound);
            let mut row = vec![ideal.field().zero(); cols.len()];
            for (mm, c) in prod.terms() {
                row[col_index[mm]] = c.clone();
            }
            rows.push(row);
        }
    }
    let rank = row_reduce_rank(&mut rows, cols.len());
    cols.len() as u64 - rank as u64
}

/// In-place Gaussian elimination; returns the rank.
fn row_reduce_rank(rows: &mut [Vec<Scalar>], ncols: usize) -> usize {
    let mut rank = 0;
    for col in 0..ncols {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = rows[rank][col].inverse().expect("nonzero pivot");
        for c in col..ncols {
            rows[rank][c] = rows[rank][c].mul(&inv);
        }
        for r in 0..rows.len() {
            if r != rank && !rows[r][col].is_zero() {
                let factor = rows[r][col].clone();
                for c in col..ncols {
                    let delta = factor.mul(&rows[rank][c]);
                    rows[r][c] = rows[r][c].sub(&delta);
                }
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_polynomial;
    use crate::poly::default_var_names;

    fn ideal(texts: &[&str], char_p: u64, bound: u32) -> IdealGens {
        let field = if char_p == 0 {
            FieldSpec::RATIONALS
        } else {
            FieldSpec::prime(char_p).unwrap()
        };
        let vars = default_var_names(2);
        let gens = texts
            .iter()
            .map(|t| parse_polynomial(t, field, &vars).unwrap())
            .collect();
        IdealGens::new(gens, bound).unwrap()
    }

    /// tj(y² + x³y) over F₂: the three generators f, f_x, f_y.
    fn tjurina_example(bound: u32) -> IdealGens {
        ideal(&["y^2 + x^3*y", "x^2*y", "x^3"], 2, bound)
    }

    #[test]
    fn maximal_ideal_staircase() {
        let sb = standard_basis(&ideal(&["x", "y"], 0, 5));
        let names: Vec<String> = sb.staircase().iter().map(|m| m.to_string()).collect();
        assert_eq!(names, ["x1", "x2"]);
        assert_eq!(sb.complete_from(), Some(1));
        assert_eq!(sb.quotient_dim(), QuotientDim::FiniteDim(1));
    }

    #[test]
    fn tjurina_ideal_of_the_running_example() {
        let sb = standard_basis(&tjurina_example(6));
        let vars = default_var_names(2);
        let staircase: Vec<String> =
            sb.staircase().iter().map(|m| m.render(&vars)).collect();
        assert_eq!(staircase, ["y^2", "x^3", "x^2*y"]);
        assert_eq!(sb.quotient_dim(), QuotientDim::FiniteDim(5));
        let standard: Vec<String> = sb
            .standard_monomials()
            .iter()
            .map(|m| m.render(&vars))
            .collect();
        assert_eq!(standard, ["1", "x", "y", "x^2", "x*y"]);
    }

    #[test]
    fn normal_forms_reduce_and_leave_units() {
        let sb = standard_basis(&tjurina_example(6));
        let f2 = FieldSpec::prime(2).unwrap();
        let vars = default_var_names(2);
        let x5 = parse_polynomial("x^5", f2, &vars).unwrap();
        assert!(sb.normal_form(&x5).unwrap().is_zero());
        let one = parse_polynomial("1", f2, &vars).unwrap();
        assert_eq!(sb.normal_form(&one).unwrap(), one);
        // Idempotence.
        let f = parse_polynomial("1 + x^4 + x*y + y^3", f2, &vars).unwrap();
        let nf = sb.normal_form(&f).unwrap();
        assert_eq!(sb.normal_form(&nf).unwrap(), nf);
    }

    #[test]
    fn monomial_jacobian_ideal() {
        // j(x³+y³) over Q is ⟨x², y²⟩ (up to the factor 3).
        let sb = standard_basis(&ideal(&["3*x^2", "3*y^2"], 0, 4));
        assert_eq!(sb.quotient_dim(), QuotientDim::FiniteDim(4));
        assert_eq!(jet_quotient_dim_oracle(&ideal(&["3*x^2", "3*y^2"], 0, 4)), 4);
    }

    #[test]
    fn example_one_four_ideal() {
        // m·f + m²·j(f) for f = y²+x³y over F₂ equals ⟨xy², y³, x⁵, x⁴y⟩.
        let gens = [
            "x*y^2 + x^4*y",
            "y^3 + x^3*y^2",
            "x^4*y",
            "x^3*y^2",
            "x^2*y^3",
            "x^5",
        ];
        let i6 = ideal(&gens, 2, 6);
        let sb = standard_basis(&i6);
        let vars = default_var_names(2);
        let staircase: Vec<String> =
            sb.staircase().iter().map(|m| m.render(&vars)).collect();
        assert_eq!(staircase, ["x*y^2", "y^3", "x^5", "x^4*y"]);
        assert!(sb.contains_m_power(5).unwrap());
        assert!(!sb.contains_m_power(4).unwrap());
        assert_eq!(
            sb.highcorner().map(|m| m.render(&vars)),
            Some("x^3*y".into())
        );
        assert_eq!(sb.quotient_dim(), QuotientDim::FiniteDim(10));
    }

    #[test]
    fn incomplete_ideal_reports_not_finite() {
        // ⟨x⟩ in two variables: y^k is always standard.
        let i = ideal(&["x"], 0, 8);
        let sb = standard_basis(&i);
        assert!(!sb.complete_flag());
        assert_eq!(
            sb.quotient_dim(),
            QuotientDim::NotFiniteUpTo {
                bound: 8,
                lower_bound: 9
            }
        );
        assert_eq!(sb.highcorner(), None);
        // The jet oracle keeps growing with the bound.
        let d8 = jet_quotient_dim_oracle(&i);
        let d12 = jet_quotient_dim_oracle(&i.with_bound(12).unwrap());
        assert!(d8 < d12);
    }

    #[test]
    fn unit_generator_gives_whole_ring() {
        let sb = standard_basis(&ideal(&["1 + x"], 0, 4));
        assert_eq!(sb.quotient_dim(), QuotientDim::FiniteDim(0));
        assert_eq!(sb.complete_from(), Some(0));
    }

    #[test]
    fn bound_too_small_for_m_power() {
        let sb = standard_basis(&ideal(&["x", "y"], 0, 3));
        assert_eq!(
            sb.contains_m_power(4).unwrap_err(),
            Error::BoundTooSmall { bound: 3, needed: 4 }
        );
    }

    #[test]
    fn oracle_matches_quotient_dim_on_small_ideals() {
        for (gens, p, bound) in [
            (vec!["x^2", "y^3"], 0u64, 8u32),
            (vec!["y^2 + x^3*y", "x^2*y", "x^3"], 2, 8),
            (vec!["x^2 + y^2", "x*y"], 3, 8),
            (vec!["x^3 + y^4", "x*y^2"], 5, 10),
        ] {
            let i = ideal(&gens, p, bound);
            let sb = standard_basis(&i);
            let QuotientDim::FiniteDim(d) = sb.quotient_dim() else {
                panic!("expected finite dimension for {gens:?}");
            };
            assert_eq!(jet_quotient_dim_oracle(&i), d, "ideal {gens:?} char {p}");
        }
    }

    #[test]
    fn highcorner_consistency() {
        let i = tjurina_example(8);
        let sb = standard_basis(&i);
        let hc = sb.highcorner().unwrap();
        let k = hc.degree();
        assert!(sb.contains_m_power(k + 1).unwrap());
        assert!(!sb.contains_m_power(k).unwrap());
    }
}
