//! Brute-force ground truth over tiny prime fields.
//!
//! Complete enumeration of jet spaces (coefficient vectors on the
//! monomials of degree 2..=k), of truncated right/contact equivalence
//! groups, exact orbit decompositions of the group action, and
//! exhaustive determinacy checks.  Everything here is desk-scale by
//! construction — hard feasibility guards refuse anything that could
//! not finish in minutes — and is used as the independent instrument
//! that validates the algebraic machinery elsewhere in the crate.
//!
//! Conventions: jets live in degrees 2..=k (germs in m²); units of the
//! contact group are enumerated modulo m^{k−1} (degree ≤ k−2), because
//! `u·f mod m^{k+1}` only depends on that truncation when `f ∈ m²`.
//! The enumerated tuples form a group under composition-then-truncation
//! (the axioms are checked exhaustively in the tests).

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::invariants::{milnor_number, tjurina_number};
use crate::jet::{substitute_jet, JetAutomorphism};
use crate::monomial::{monomials_of_degree, Monomial};
use crate::poly::Polynomial;

/// Hard cap on the number of jets in an enumerated space.
const JET_CAP: u128 = 1 << 20;
/// Hard cap on |J|·|G| for an orbit decomposition.
const ACTION_BUDGET: u128 = 1_000_000_000;
/// Hard cap on a full listing of group elements (axiom checks only).
const ELEMENT_CAP: u128 = 1 << 22;
/// Jet bound used when computing invariants of orbit representatives.
const INVARIANT_CAP: u32 = 24;

fn monomial_range(nvars: usize, lo: u32, hi: u32) -> Vec<Monomial> {
    (lo..=hi)
        .flat_map(|d| monomials_of_degree(nvars, d))
        .collect()
}

/// All assignments of `slots` coefficients over F_p, in base-p counter
/// order (slot 0 is the least significant digit).
struct Assignments {
    field: FieldSpec,
    digits: Vec<u64>,
    done: bool,
}

fn assignments(field: FieldSpec, slots: usize) -> Assignments {
    Assignments {
        field,
        digits: vec![0; slots],
        done: false,
    }
}

impl Iterator for Assignments {
    type Item = Vec<Scalar>;

    fn next(&mut self) -> Option<Vec<Scalar>> {
        if self.done {
            return None;
        }
        let out = self
            .digits
            .iter()
            .map(|&d| self.field.from_integer(d as i64))
            .collect();
        let p = self.field.characteristic();
        let mut i = 0;
        loop {
            if i == self.digits.len() {
                self.done = true;
                break;
            }
            self.digits[i] += 1;
            if self.digits[i] < p {
                break;
            }
            self.digits[i] = 0;
            i += 1;
        }
        Some(out)
    }
}

/// The space of all jets `Σ c_m·m` over the monomials of degree
/// 2..=degmax in `nvars` variables over F_p, indexed 0..p^#monomials.
#[derive(Debug, Clone)]
pub struct JetSpace {
    field: FieldSpec,
    nvars: usize,
    degmax: u32,
    monomials: Vec<Monomial>,
}

impl JetSpace {
    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degmax(&self) -> u32 {
        self.degmax
    }

    /// The coefficient slots, ordered by degree then by the local order.
    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    /// Number of jets, p^#monomials.
    pub fn len(&self) -> u64 {
        let p = self.field.characteristic() as u128;
        p.pow(self.monomials.len() as u32) as u64
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Decode an index into its jet polynomial.
    pub fn jet(&self, index: u64) -> Polynomial {
        let p = self.field.characteristic();
        let mut rest = index;
        let mut f = Polynomial::zero(self.field, self.nvars);
        for m in &self.monomials {
            let digit = rest % p;
            rest /= p;
            if digit != 0 {
                f.add_term(m.clone(), self.field.from_integer(digit as i64));
            }
        }
        debug_assert_eq!(rest, 0, "index out of range");
        f
    }

    /// Encode a polynomial supported on the slot monomials; `None` when
    /// it has terms outside the space.
    pub fn index_of(&self, f: &Polynomial) -> Option<u64> {
        let p = self.field.characteristic();
        let mut index = 0u64;
        let mut weight = 1u64;
        let mut seen = 0usize;
        for m in &self.monomials {
            let c = f.coeff(m);
            if let Scalar::Mod { val, .. } = c {
                index += val * weight;
                if val != 0 {
                    seen += 1;
                }
            } else if !c.is_zero() {
                return None;
            }
            weight *= p;
        }
        (seen == f.num_terms()).then_some(index)
    }
}

/// Enumerate the space of k-jets of germs in m² over F_p.
pub fn enumerate_jets(p: u64, nvars: usize, k: u32) -> Result<JetSpace> {
    let field = FieldSpec::prime(p)?;
    if nvars == 0 {
        return Err(Error::InvalidInput("need at least one variable".into()));
    }
    if k < 2 {
        return Err(Error::InvalidInput(
            "jet spaces start at degree 2; need k ≥ 2".into(),
        ));
    }
    let monomials = monomial_range(nvars, 2, k);
    let size = (p as u128).checked_pow(monomials.len() as u32);
    match size {
        Some(s) if s <= JET_CAP => Ok(JetSpace {
            field,
            nvars,
            degmax: k,
            monomials,
        }),
        _ => Err(Error::TooLarge(format!(
            "jet space {p}^{} exceeds the cap of {JET_CAP}",
            monomials.len()
        ))),
    }
}

/// A truncated equivalence group at jet level `k`: all coordinate
/// changes with polynomial images of degree ≤ k (invertible linear
/// part), together with all truncated units when `contact` is set.
#[derive(Debug, Clone)]
pub struct JetGroup {
    field: FieldSpec,
    nvars: usize,
    k: u32,
    contact: bool,
    order: u128,
    generators: Vec<JetAutomorphism>,
}

impl JetGroup {
    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn jet_level(&self) -> u32 {
        self.k
    }

    pub fn is_contact(&self) -> bool {
        self.contact
    }

    /// Exact group order (number of enumerated tuples).
    pub fn order(&self) -> u128 {
        self.order
    }

    /// A generating set (transvections, scalings, elementary shifts,
    /// and elementary units for contact groups).  Orbits under the
    /// generated subgroup equal orbits under the full group.
    pub fn generators(&self) -> &[JetAutomorphism] {
        &self.generators
    }

    /// The full element listing, for exhaustive axiom checks at tiny
    /// sizes.  Deterministic order.
    pub fn elements(&self) -> Result<Vec<JetAutomorphism>> {
        if self.order > ELEMENT_CAP {
            return Err(Error::TooLarge(format!(
                "group of order {} exceeds the listing cap of {ELEMENT_CAP}",
                self.order
            )));
        }
        let field = self.field;
        let n = self.nvars;
        let image_slots = monomial_range(n, 1, self.k);
        let unit_slots = if self.k >= 3 {
            monomial_range(n, 1, self.k - 2)
        } else {
            Vec::new()
        };
        let mut out = Vec::new();
        for coeffs in assignments(field, n * image_slots.len()) {
            let mut images = Vec::with_capacity(n);
            for v in 0..n {
                let mut im = Polynomial::zero(field, n);
                for (s, m) in image_slots.iter().enumerate() {
                    let c = &coeffs[v * image_slots.len() + s];
                    if !c.is_zero() {
                        im.add_term(m.clone(), c.clone());
                    }
                }
                images.push(im);
            }
            let Ok(base) = JetAutomorphism::new(images.clone(), None, self.k) else {
                continue; // singular linear part
            };
            if !self.contact {
                out.push(base);
                continue;
            }
            for c0 in 1..field.characteristic() {
                for ucoeffs in assignments(field, unit_slots.len()) {
                    let mut u = Polynomial::constant(field, n, field.from_integer(c0 as i64));
                    for (s, m) in unit_slots.iter().enumerate() {
                        if !ucoeffs[s].is_zero() {
                            u.add_term(m.clone(), ucoeffs[s].clone());
                        }
                    }
                    out.push(base.with_unit(u)?);
                }
            }
        }
        Ok(out)
    }
}

fn gl_order(p: u128, n: u32) -> u128 {
    let pn = p.pow(n);
    (0..n).map(|i| pn - p.pow(i)).product()
}

/// Enumerate the truncated right (`contact = false`) or contact group
/// at jet level `k` over F_p.
pub fn enumerate_group(p: u64, nvars: usize, k: u32, contact: bool) -> Result<JetGroup> {
    let field = FieldSpec::prime(p)?;
    if nvars == 0 {
        return Err(Error::InvalidInput("need at least one variable".into()));
    }
    if k < 2 {
        return Err(Error::InvalidInput("need jet level k ≥ 2".into()));
    }
    let n = nvars;
    let pw = p as u128;
    let higher = monomial_range(n, 2, k).len() as u32;
    let mut order = gl_order(pw, n as u32)
        .checked_mul(pw.checked_pow(n as u32 * higher).ok_or_else(too_large_order)?)
        .ok_or_else(too_large_order)?;
    if contact {
        let unit_higher = if k >= 3 {
            monomial_range(n, 1, k - 2).len() as u32
        } else {
            0
        };
        order = order
            .checked_mul((pw - 1) * pw.checked_pow(unit_higher).ok_or_else(too_large_order)?)
            .ok_or_else(too_large_order)?;
    }

    let mut generators = Vec::new();
    let var = |i: usize| Polynomial::variable(field, i, n);
    let idvars = |except: usize, image: Polynomial| -> Vec<Polynomial> {
        (0..n)
            .map(|j| if j == except { image.clone() } else { var(j) })
            .collect()
    };
    // GL part: transvections x_i ↦ x_i + c·x_j and scalings x_i ↦ c·x_i.
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            for c in 1..p {
                let image = var(i).add(&var(j).scale(&field.from_integer(c as i64)))?;
                generators.push(JetAutomorphism::new(idvars(i, image), None, k)?);
            }
        }
        for c in 2..p {
            let image = var(i).scale(&field.from_integer(c as i64));
            generators.push(JetAutomorphism::new(idvars(i, image), None, k)?);
        }
    }
    // Unipotent part: x_i ↦ x_i + c·m for every monomial 2 ≤ deg m ≤ k.
    for i in 0..n {
        for m in monomial_range(n, 2, k) {
            for c in 1..p {
                let image = var(i).add(&Polynomial::term(
                    field,
                    m.clone(),
                    field.from_integer(c as i64),
                ))?;
                generators.push(JetAutomorphism::new(idvars(i, image), None, k)?);
            }
        }
    }
    if contact {
        let identity = JetAutomorphism::identity(field, n, k);
        // Scalar units and elementary units 1 + c·m, deg m ≤ k−2.
        for c in 2..p {
            let u = Polynomial::constant(field, n, field.from_integer(c as i64));
            generators.push(identity.with_unit(u)?);
        }
        if k >= 3 {
            for m in monomial_range(n, 1, k - 2) {
                for c in 1..p {
                    let mut u = Polynomial::one(field, n);
                    u.add_term(m.clone(), field.from_integer(c as i64));
                    generators.push(identity.with_unit(u)?);
                }
            }
        }
    }
    Ok(JetGroup {
        field,
        nvars,
        k,
        contact,
        order,
        generators,
    })
}

fn too_large_order() -> Error {
    Error::TooLarge("group order overflows the budget arithmetic".into())
}

/// One orbit of the group action on a jet space.
#[derive(Debug, Clone)]
pub struct OrbitInfo {
    /// Index of the canonical (least-index) representative.
    pub representative: u64,
    pub size: u64,
    /// τ of the representative, `None` when not certified finite.
    pub tau: Option<u64>,
    /// μ of the representative, `None` when not certified finite.
    pub mu: Option<u64>,
}

/// Exact orbit decomposition of a jet space under a truncated group.
#[derive(Debug, Clone)]
pub struct OrbitTable {
    /// Orbit id of every jet, indexed by jet index.
    pub orbit_of: Vec<u32>,
    pub orbits: Vec<OrbitInfo>,
}

/// The orbit of a single starting jet under the group's generators
/// (equal to its orbit under the full group).
fn orbit_of_index(
    space: &JetSpace,
    gens: &[JetAutomorphism],
    start: u64,
) -> Result<BTreeSet<u64>> {
    let mut seen = BTreeSet::new();
    seen.insert(start);
    let mut frontier = vec![start];
    while let Some(i) = frontier.pop() {
        let f = space.jet(i);
        for g in gens {
            let h = substitute_jet(&f, g)?;
            let j = space
                .index_of(&h)
                .expect("the action preserves the jet space");
            if seen.insert(j) {
                frontier.push(j);
            }
        }
    }
    Ok(seen)
}

/// Decompose the whole jet space into orbits.  The action is the one
/// the group was enumerated for (right or contact).  Representatives
/// are the least indices; orbits are numbered by their representative.
pub fn orbit_decomposition(space: &JetSpace, group: &JetGroup) -> Result<OrbitTable> {
    if space.field != group.field || space.nvars != group.nvars {
        return Err(Error::InvalidInput(
            "jet space and group live over different rings".into(),
        ));
    }
    if space.degmax != group.k {
        return Err(Error::InvalidInput(
            "jet space and group have different jet levels".into(),
        ));
    }
    let budget = (space.len() as u128)
        .checked_mul(group.order)
        .ok_or_else(too_large_order)?;
    if budget > ACTION_BUDGET {
        return Err(Error::TooLarge(format!(
            "|J|·|G| = {budget} exceeds the action budget of {ACTION_BUDGET}"
        )));
    }
    let total = space.len();
    let mut orbit_of = vec![u32::MAX; total as usize];
    let mut orbits = Vec::new();
    for start in 0..total {
        if orbit_of[start as usize] != u32::MAX {
            continue;
        }
        let id = orbits.len() as u32;
        let members = orbit_of_index(space, &group.generators, start)?;
        debug_assert_eq!(*members.iter().next().unwrap(), start);
        for &m in &members {
            debug_assert_eq!(orbit_of[m as usize], u32::MAX);
            orbit_of[m as usize] = id;
        }
        let rep = space.jet(start);
        let (tau, mu) = if rep.is_zero() {
            (None, None)
        } else {
            (
                tjurina_number(&rep, INVARIANT_CAP)?.finite(),
                milnor_number(&rep, INVARIANT_CAP)?.finite(),
            )
        };
        orbits.push(OrbitInfo {
            representative: start,
            size: members.len() as u64,
            tau,
            mu,
        });
    }
    Ok(OrbitTable { orbit_of, orbits })
}

/// Exhaustive right k-determinacy check at a fixed jet level: true iff
/// every jet at `jet_level` sharing the k-jet of `f` lies in the right
/// orbit of `f` there.
pub fn bruteforce_determinacy_check(f: &Polynomial, k: u32, jet_level: u32) -> Result<bool> {
    let field = f.field();
    let p = field.characteristic();
    if p == 0 {
        return Err(Error::InvalidInput(
            "the brute-force oracle needs a finite field".into(),
        ));
    }
    if jet_level < k + 1 {
        return Err(Error::InvalidInput(
            "jet_level must exceed k to leave room for tails".into(),
        ));
    }
    let space = enumerate_jets(p, f.nvars(), jet_level)?;
    let fj = f.jet(jet_level);
    let start = space.index_of(&fj).ok_or_else(|| {
        Error::InvalidInput("germ must have order ≥ 2 and degree ≤ jet_level".into())
    })?;
    let group = enumerate_group(p, f.nvars(), jet_level, false)?;
    let budget = (space.len() as u128)
        .checked_mul(group.order)
        .ok_or_else(too_large_order)?;
    if budget > ACTION_BUDGET {
        return Err(Error::TooLarge(format!(
            "|J|·|G| = {budget} exceeds the action budget of {ACTION_BUDGET}"
        )));
    }
    let orbit = orbit_of_index(&space, &group.generators, start)?;
    let tail_monos = monomial_range(f.nvars(), k + 1, jet_level);
    let base = f.jet(k);
    for coeffs in assignments(field, tail_monos.len()) {
        let mut g = base.clone();
        for (s, m) in tail_monos.iter().enumerate() {
            if !coeffs[s].is_zero() {
                g.add_term(m.clone(), coeffs[s].clone());
            }
        }
        let idx = space
            .index_of(&g)
            .expect("tail candidates stay inside the space");
        if !orbit.contains(&idx) {
            return Ok(false);
        }
    }
    Ok(true)
}
