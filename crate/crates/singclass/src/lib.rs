//! Exact local computations with hypersurface singularities.
//!
//! `singclass` works with power-series germs `f` in `K[[x_1..x_n]]`,
//! represented exactly by polynomial jets over the rationals or over a
//! prime field `F_p`.  It computes the Milnor and Tjurina numbers, the
//! corank and finite-determinacy bounds of an isolated singularity,
//! splits off the nondegenerate quadratic part, builds semiuniversal
//! unfoldings, and classifies simple (ADE) germs in any characteristic,
//! including the modular cases `p = 2, 3, 5, 7` where the familiar
//! normal-form tables acquire extra variants.
//!
//! All arithmetic is exact: rational coefficients are arbitrary-precision
//! reduced fractions and prime-field coefficients are least non-negative
//! residues.  Power series are handled through jets: every computation
//! states the truncation order it used, and certified answers (for
//! example ideal dimensions) include the argument why the truncation was
//! high enough.

pub mod classify;
pub mod deform;
pub mod determinacy;
pub mod error;
pub mod field;
pub mod invariants;
pub mod jet;
pub mod monomial;
pub mod oracle;
pub mod poly;
pub mod parse;
pub mod splitting;
pub mod stdbasis;

pub use classify::{
    classify_contact, classify_right, classify_univariate, detect_nonisolated_type, ClassLabel,
    Family, UnivariateReport,
};
pub use deform::{
    adjacency_scan, evaluate_unfolding, semicontinuity_scan, tjurina_basis_unfolding, ScanReport,
    Unfolding,
};
pub use determinacy::{
    contact_determinacy_bound, right_determinacy_bound, DeterminacyBound, Equivalence,
};
pub use error::{Error, Result};
pub use field::{FieldSpec, Scalar};
pub use invariants::{
    hessian_rank_corank, higher_algebra_dims, milnor_number, tjurina_number, HessianInfo,
    InvariantKind, InvariantValue, DEFAULT_CAP,
};
pub use jet::{random_automorphism, substitute_jet, JetAutomorphism};
pub use monomial::Monomial;
pub use oracle::{
    bruteforce_determinacy_check, enumerate_group, enumerate_jets, orbit_decomposition, JetGroup,
    JetSpace, OrbitInfo, OrbitTable,
};
pub use parse::parse_polynomial;
pub use poly::{default_var_names, Order, Polynomial};
pub use splitting::{quadratic_normal_form, split, SplitResult};
pub use stdbasis::{
    contains_m_power, jet_quotient_dim_oracle, quotient_dim, standard_basis, IdealGens,
    QuotientDim, StandardBasis,
};
