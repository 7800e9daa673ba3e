//! Milnor and Tjurina numbers and their higher-algebra refinements.
//!
//! `μ(f) = dim K{x}/j(f)` and `τ(f) = dim K{x}/(⟨f⟩+j(f))` are computed
//! through standard bases with an adaptive truncation bound: starting at
//! 10 and doubling up to a caller-supplied cap, stopping as soon as the
//! staircase certifies completeness — finite answers are exact, and a
//! failure to certify is reported as `NotFiniteUpTo(cap)`, never as a
//! claim of infinity.

use crate::error::{Error, Result};
use crate::field::Scalar;
use crate::monomial::{monomials_of_degree, Monomial};
use crate::poly::Polynomial;
use crate::stdbasis::{standard_basis, IdealGens, QuotientDim, StandardBasis};

/// Default adaptive-bound cap shared across the crate.
pub const DEFAULT_CAP: u32 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InvariantKind {
    Milnor,
    Tjurina,
    HigherMilnor(u32),
    HigherTjurina(u32),
}

/// An ideal-quotient dimension with its provenance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InvariantValue {
    pub kind: InvariantKind,
    pub value: QuotientDim,
}

impl InvariantValue {
    pub fn finite(&self) -> Option<u64> {
        self.value.finite()
    }
}

/// Generators of the Jacobian ideal `j(f)`.
pub fn jacobian_ideal_gens(f: &Polynomial) -> Vec<Polynomial> {
    (0..f.nvars())
        .map(|i| f.partial_derivative(i).expect("index in range"))
        .collect()
}

/// Generators of the Tjurina ideal `tj(f) = ⟨f⟩ + j(f)`.
pub fn tjurina_ideal_gens(f: &Polynomial) -> Vec<Polynomial> {
    let mut gens = vec![f.clone()];
    gens.extend(jacobian_ideal_gens(f));
    gens
}

/// All products `m·g` with `m` a degree-`k` monomial and `g` a generator
/// (for `k = 0` the generators themselves).
pub fn m_power_times(gens: &[Polynomial], k: u32) -> Vec<Polynomial> {
    if k == 0 || gens.is_empty() {
        return gens.to_vec();
    }
    let nvars = gens[0].nvars();
    let one = gens[0].field().one();
    let mut out = Vec::new();
    for m in monomials_of_degree(nvars, k) {
        for g in gens {
            out.push(g.mul_term(&m, &one));
        }
    }
    out
}

/// Compute a quotient dimension with the adaptive bound schedule
/// (10, 20, 40, …, cap), returning as soon as completeness certifies
/// exactness.  Also hands back the standard basis that settled it.
pub fn adaptive_quotient_dim(gens: &[Polynomial], cap: u32) -> (QuotientDim, StandardBasis) {
    let cap = cap.max(1);
    let mut bound = 10.min(cap);
    loop {
        let ideal = IdealGens::new(gens.to_vec(), bound).expect("nonempty compatible generators");
        let sb = standard_basis(&ideal);
        let dim = sb.quotient_dim();
        if matches!(dim, QuotientDim::FiniteDim(_)) || bound >= cap {
            return (dim, sb);
        }
        bound = (bound * 2).min(cap);
    }
}

fn require_in_m(f: &Polynomial) -> Result<()> {
    if f.in_maximal_ideal() {
        Ok(())
    } else {
        Err(Error::NotInMaximalIdeal)
    }
}

/// `μ(f) = dim_K K{x}/j(f)`, exact when certified finite.
pub fn milnor_number(f: &Polynomial, cap: u32) -> Result<InvariantValue> {
    require_in_m(f)?;
    let (value, _) = adaptive_quotient_dim(&jacobian_ideal_gens(f), cap);
    Ok(InvariantValue {
        kind: InvariantKind::Milnor,
        value,
    })
}

/// `τ(f) = dim_K K{x}/(⟨f⟩+j(f))`, exact when certified finite.
pub fn tjurina_number(f: &Polynomial, cap: u32) -> Result<InvariantValue> {
    require_in_m(f)?;
    let (value, _) = adaptive_quotient_dim(&tjurina_ideal_gens(f), cap);
    Ok(InvariantValue {
        kind: InvariantKind::Tjurina,
        value,
    })
}

/// Dimensions of the k-th Milnor and Tjurina algebras
/// `M_k(f) = K{x}/m^k·j(f)` and `T_k(f) = K{x}/⟨f⟩+m^k·j(f)`.
pub fn higher_algebra_dims(
    f: &Polynomial,
    k: u32,
    cap: u32,
) -> Result<(InvariantValue, InvariantValue)> {
    require_in_m(f)?;
    let mk_j = m_power_times(&jacobian_ideal_gens(f), k);
    let (m_val, _) = adaptive_quotient_dim(&mk_j, cap);
    let mut with_f = vec![f.clone()];
    with_f.extend(mk_j);
    let (t_val, _) = adaptive_quotient_dim(&with_f, cap);
    Ok((
        InvariantValue {
            kind: InvariantKind::HigherMilnor(k),
            value: m_val,
        },
        InvariantValue {
            kind: InvariantKind::HigherTjurina(k),
            value: t_val,
        },
    ))
}

/// Rank data of the quadratic part of `f`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HessianInfo {
    /// Rank of the matrix of second partials of the degree-2 part over
    /// the ground field (always even in characteristic 2, where the
    /// matrix is alternating).
    pub rank: usize,
    pub corank: usize,
    /// Which coefficients of `x_i²` in the quadratic part are nonzero —
    /// in characteristic 2 these square terms are invisible to the
    /// Hessian matrix but matter for splitting.
    pub square_diagonal: Vec<bool>,
}

/// Rank and corank of the Hessian of the quadratic part of `f`,
/// together with the square-term diagonal of the quadratic form.
pub fn hessian_rank_corank(f: &Polynomial) -> Result<HessianInfo> {
    let n = f.nvars();
    let field = f.field();
    match f.order() {
        crate::poly::Order::Finite(d) if d < 2 => return Err(Error::OrderTooSmall(d, 2)),
        _ => {}
    }
    let quad = f.homogeneous_part(2);
    let two = field.from_integer(2);
    let mut h: Vec<Vec<Scalar>> = vec![vec![field.zero(); n]; n];
    let mut square_diagonal = vec![false; n];
    for i in 0..n {
        let sq = quad.coeff(&Monomial::var(i, n).pow(2));
        square_diagonal[i] = !sq.is_zero();
        h[i][i] = two.mul(&sq);
        for j in i + 1..n {
            let c = quad.coeff(&Monomial::var(i, n).mul(&Monomial::var(j, n)));
            h[i][j] = c.clone();
            h[j][i] = c;
        }
    }
    let rank = matrix_rank(&mut h);
    Ok(HessianInfo {
        rank,
        corank: n - rank,
        square_diagonal,
    })
}

fn matrix_rank(rows: &mut [Vec<Scalar>]) -> usize {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let inv = rows[rank][col].inverse().expect("nonzero pivot");
        for r in rank + 1..rows.len() {
            if !rows[r][col].is_zero() {
                let factor = rows[r][col].mul(&inv);
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
