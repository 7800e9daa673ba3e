//! Catalog of contact normal forms for simple hypersurface germs.
//!
//! Every entry is a polynomial with unit coefficients; over an
//! algebraically closed field each family of nonzero coefficient values
//! on the same support is a single contact class (the coefficient torus
//! acts through a monomial map whose exponent matrix is invertible over
//! the rationals — see the tests at the bottom), so recognizing a germ
//! only requires reducing it onto the support, not onto exact
//! coefficient values.
//!
//! The lists depend on the characteristic.  Away from characteristic 2
//! they are the classical A-D-E curve equations plus the extra
//! characteristic-3 and characteristic-5 variants of E₆, E₇, E₈.  In
//! characteristic 2 the curve list splits into variants indexed by an
//! extra parameter, and the three-variable (double point) list is
//! genuinely different from a suspension of the curve list.
//!
//! A variant is recorded only where the tables attach a superscript to
//! the name: `Some(0)` and `Some(r)` for superscripted rows, `None` for
//! the classical unsuperscripted ones.

use super::Family;
use crate::field::FieldSpec;
use crate::monomial::Monomial;
use crate::poly::Polynomial;

/// A candidate normal form: family name, index, variant, and equation.
#[derive(Debug, Clone)]
pub struct NormalForm {
    pub family: Family,
    pub index: u32,
    pub variant: Option<u32>,
    pub poly: Polynomial,
}

fn form(field: &FieldSpec, nvars: usize, monos: &[Vec<u16>]) -> Polynomial {
    let mut f = Polynomial::zero(*field, nvars);
    for exps in monos {
        f.add_term(Monomial::from_exps(exps.clone()), field.one());
    }
    f
}

fn row(
    field: &FieldSpec,
    family: Family,
    index: u32,
    variant: Option<u32>,
    monos: &[Vec<u16>],
) -> NormalForm {
    NormalForm {
        family,
        index,
        variant,
        poly: form(field, monos[0].len(), monos),
    }
}

/// D_k = x²y + y^{k−1} for k ≥ 5, valid in every characteristic except 2.
///
/// The list starts at k = 5 because these rows are scanned only for
/// germs whose cubic is a double line times a simple line; D₄ has a
/// squarefree cubic and is recognized directly from that.
pub fn curve_d_rows(field: &FieldSpec, tau: u64) -> Vec<NormalForm> {
    let k_max = (tau as u32).saturating_add(2).max(5);
    (5..=k_max)
        .map(|k| {
            row(
                field,
                Family::D,
                k,
                None,
                &[vec![2, 1], vec![0, (k - 1) as u16]],
            )
        })
        .collect()
}

/// E₆, E₇, E₈ away from characteristic 2, including the extra variants
/// that exist in characteristics 3 and 5.
pub fn curve_e_rows(field: &FieldSpec) -> Vec<NormalForm> {
    let p = field.characteristic();
    // The tables in positive characteristic name the base rows with a
    // superscript 0; the characteristic-zero list has no superscripts.
    let base = if p == 0 { None } else { Some(0) };
    let mut rows = vec![
        row(field, Family::E, 6, base, &[vec![3, 0], vec![0, 4]]),
        row(field, Family::E, 7, base, &[vec![3, 0], vec![1, 3]]),
        row(field, Family::E, 8, base, &[vec![3, 0], vec![0, 5]]),
    ];
    if p == 3 {
        rows.push(row(field, Family::E, 6, Some(1), &[vec![3, 0], vec![0, 4], vec![2, 2]]));
        rows.push(row(field, Family::E, 7, Some(1), &[vec![3, 0], vec![1, 3], vec![2, 2]]));
        rows.push(row(field, Family::E, 8, Some(1), &[vec![3, 0], vec![0, 5], vec![2, 3]]));
        rows.push(row(field, Family::E, 8, Some(2), &[vec![3, 0], vec![0, 5], vec![2, 2]]));
    }
    if p == 5 {
        rows.push(row(field, Family::E, 8, Some(1), &[vec![3, 0], vec![0, 5], vec![2, 2]]));
    }
    rows
}

/// Characteristic-2 A-rows in two variables:
///   A_{2m−1} = x² + xy^m,  A_{2m}^0 = x² + y^{2m+1},
///   A_{2m}^r = x² + y^{2m+1} + xy^{2m−r}  (1 ≤ r ≤ m−1).
pub fn char2_curve_a_rows(field: &FieldSpec, tau: u64) -> Vec<NormalForm> {
    let mut rows = Vec::new();
    let m_odd_max = (tau / 2 + 2) as u32;
    for m in 1..=m_odd_max {
        rows.push(row(
            field,
            Family::A,
            2 * m - 1,
            None,
            &[vec![2, 0], vec![1, m as u16]],
        ));
    }
    let m_even_max = (tau / 4 + 2) as u32;
    for m in 1..=m_even_max {
        rows.push(row(
            field,
            Family::A,
            2 * m,
            Some(0),
            &[vec![2, 0], vec![0, (2 * m + 1) as u16]],
        ));
        for r in 1..m {
            rows.push(row(
                field,
                Family::A,
                2 * m,
                Some(r),
                &[vec![2, 0], vec![0, (2 * m + 1) as u16], vec![1, (2 * m - r) as u16]],
            ));
        }
    }
    rows
}

/// Characteristic-2 D-rows in two variables:
///   D_{2m} = x²y + xy^m  (m ≥ 3; for m = 2 this is the three-line D₄),
///   D_{2m+1}^0 = x²y + y^{2m},  D_{2m+1}^r = x²y + y^{2m} + xy^{2m−r}.
pub fn char2_curve_d_rows(field: &FieldSpec, tau: u64) -> Vec<NormalForm> {
    let mut rows = Vec::new();
    let m_even_max = (tau / 2 + 2) as u32;
    for m in 3..=m_even_max.max(3) {
        rows.push(row(
            field,
            Family::D,
            2 * m,
            None,
            &[vec![2, 1], vec![1, m as u16]],
        ));
    }
    let m_odd_max = (tau / 4 + 2) as u32;
    for m in 2..=m_odd_max.max(2) {
        rows.push(row(
            field,
            Family::D,
            2 * m + 1,
            Some(0),
            &[vec![2, 1], vec![0, (2 * m) as u16]],
        ));
        for r in 1..m {
            rows.push(row(
                field,
                Family::D,
                2 * m + 1,
                Some(r),
                &[vec![2, 1], vec![0, (2 * m) as u16], vec![1, (2 * m - r) as u16]],
            ));
        }
    }
    rows
}

/// Characteristic-2 E-rows in two variables.
pub fn char2_curve_e_rows(field: &FieldSpec) -> Vec<NormalForm> {
    vec![
        row(field, Family::E, 6, Some(0), &[vec![3, 0], vec![0, 4]]),
        row(field, Family::E, 6, Some(1), &[vec![3, 0], vec![0, 4], vec![1, 3]]),
        row(field, Family::E, 7, None, &[vec![3, 0], vec![1, 3]]),
        row(field, Family::E, 8, None, &[vec![3, 0], vec![0, 5]]),
    ]
}

/// Characteristic-2 D- and E-rows in three variables (the rational
/// double points that are not suspensions of curve equations):
///   D_{2m}^0   = z² + x²y + xy^m,        D_{2m}^r   = … + xy^{m−r}z,
///   D_{2m+1}^0 = z² + x²y + y^m z,       D_{2m+1}^r = … + xy^{m−r}z,
///   E₆^0 = z² + x³ + y²z   (E₆^1: + xyz),
///   E₇^0 = z² + x³ + xy³   (E₇^1: + x²yz, E₇^2: + x³z, E₇^3: + xyz),
///   E₈^0 = z² + x³ + y⁵    (E₈^1: + xy³z, E₈^2: + xy²z, E₈^3: + y³z,
///                           E₈^4: + xyz).
pub fn char2_surface_rows(field: &FieldSpec, tau: u64) -> Vec<NormalForm> {
    let z2 = vec![0u16, 0, 2];
    let x2y = vec![2u16, 1, 0];
    let mut rows = Vec::new();
    let m_max = (tau / 2 + 2) as u32;
    for m in 2..=m_max.max(2) {
        rows.push(row(
            field,
            Family::D,
            2 * m,
            Some(0),
            &[z2.clone(), x2y.clone(), vec![1, m as u16, 0]],
        ));
        for r in 1..m {
            rows.push(row(
                field,
                Family::D,
                2 * m,
                Some(r),
                &[z2.clone(), x2y.clone(), vec![1, m as u16, 0], vec![1, (m - r) as u16, 1]],
            ));
        }
        rows.push(row(
            field,
            Family::D,
            2 * m + 1,
            Some(0),
            &[z2.clone(), x2y.clone(), vec![0, m as u16, 1]],
        ));
        for r in 1..m {
            rows.push(row(
                field,
                Family::D,
                2 * m + 1,
                Some(r),
                &[z2.clone(), x2y.clone(), vec![0, m as u16, 1], vec![1, (m - r) as u16, 1]],
            ));
        }
    }
    let x3 = vec![3u16, 0, 0];
    rows.push(row(field, Family::E, 6, Some(0), &[z2.clone(), x3.clone(), vec![0, 2, 1]]));
    rows.push(row(field, Family::E, 6, Some(1), &[z2.clone(), x3.clone(), vec![0, 2, 1], vec![1, 1, 1]]));
    let xy3 = vec![1u16, 3, 0];
    rows.push(row(field, Family::E, 7, Some(0), &[z2.clone(), x3.clone(), xy3.clone()]));
    rows.push(row(field, Family::E, 7, Some(1), &[z2.clone(), x3.clone(), xy3.clone(), vec![2, 1, 1]]));
    rows.push(row(field, Family::E, 7, Some(2), &[z2.clone(), x3.clone(), xy3.clone(), vec![3, 0, 1]]));
    rows.push(row(field, Family::E, 7, Some(3), &[z2.clone(), x3.clone(), xy3.clone(), vec![1, 1, 1]]));
    let y5 = vec![0u16, 5, 0];
    rows.push(row(field, Family::E, 8, Some(0), &[z2.clone(), x3.clone(), y5.clone()]));
    rows.push(row(field, Family::E, 8, Some(1), &[z2.clone(), x3.clone(), y5.clone(), vec![1, 3, 1]]));
    rows.push(row(field, Family::E, 8, Some(2), &[z2.clone(), x3.clone(), y5.clone(), vec![1, 2, 1]]));
    rows.push(row(field, Family::E, 8, Some(3), &[z2.clone(), x3.clone(), y5.clone(), vec![0, 3, 1]]));
    rows.push(row(field, Family::E, 8, Some(4), &[z2, x3, y5, vec![1, 1, 1]]));
    rows
}

/// The contact-simple curve germs that are also right-simple in odd
/// characteristic p: A_k for 1 ≤ k ≤ p−2, D_k for 4 ≤ k < p, E₆ and E₇
/// for p > 3, E₈ for p > 5.  Used by the finiteness tests; the
/// classifier itself applies the same bounds through `classify_right`.
pub fn right_simple_curve_rows(field: &FieldSpec) -> Vec<NormalForm> {
    let p = field.characteristic();
    assert!(p > 2, "right-simple lists are only tabulated for odd characteristic");
    let mut rows = Vec::new();
    for k in 1..=p.saturating_sub(2) as u32 {
        rows.push(row(field, Family::A, k, None, &[vec![2, 0], vec![0, (k + 1) as u16]]));
    }
    for k in 4..p as u32 {
        rows.push(row(field, Family::D, k, None, &[vec![2, 1], vec![0, (k - 1) as u16]]));
    }
    if p > 3 {
        rows.push(row(field, Family::E, 6, None, &[vec![3, 0], vec![0, 4]]));
        rows.push(row(field, Family::E, 7, None, &[vec![3, 0], vec![1, 3]]));
    }
    if p > 5 {
        rows.push(row(field, Family::E, 8, None, &[vec![3, 0], vec![0, 5]]));
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariants::tjurina_number;

    fn tau_of(nf: &NormalForm) -> u64 {
        tjurina_number(&nf.poly, 64)
            .unwrap()
            .finite()
            .unwrap_or_else(|| {
                panic!(
                    "row {:?}_{}^{:?} has infinite tau",
                    nf.family, nf.index, nf.variant
                )
            })
    }

    #[test]
    fn right_simple_row_counts_match_the_odd_characteristic_lists() {
        for (p, count) in [(3u64, 1usize), (5, 6), (7, 11)] {
            let field = FieldSpec::prime(p).unwrap();
            let rows = right_simple_curve_rows(&field);
            assert_eq!(rows.len(), count, "p = {p}");
            // The ADE index of every listed row is its Milnor number.
            for nf in &rows {
                let mu = crate::invariants::milnor_number(&nf.poly, 64)
                    .unwrap()
                    .finite()
                    .unwrap_or_else(|| {
                        panic!("row {:?}_{} has infinite mu", nf.family, nf.index)
                    });
                assert_eq!(mu as u32, nf.index, "{:?}_{}", nf.family, nf.index);
            }
        }
    }

    #[test]
    fn classical_rows_have_the_classical_tjurina_numbers() {
        let q = FieldSpec::RATIONALS;
        for nf in curve_d_rows(&q, 8) {
            assert_eq!(tau_of(&nf) as u32, nf.index, "D_{}", nf.index);
        }
        let taus: Vec<u64> = curve_e_rows(&q).iter().map(tau_of).collect();
        assert_eq!(taus, vec![6, 7, 8]);
    }

    #[test]
    fn characteristic_two_rows_are_isolated() {
        let f2 = FieldSpec::prime(2).unwrap();
        for nf in char2_curve_a_rows(&f2, 16)
            .into_iter()
            .chain(char2_curve_d_rows(&f2, 16))
            .chain(char2_curve_e_rows(&f2))
            .chain(char2_surface_rows(&f2, 16))
        {
            tau_of(&nf); // panics if not isolated
        }
    }

    #[test]
    fn characteristic_two_tjurina_numbers_follow_the_row_pattern() {
        let f2 = FieldSpec::prime(2).unwrap();
        // A_{2m−1}: 2m for even m, 2m−1 for odd m.
        // A_{2m}^0: 4m.  A_{2m}^r: 4m−2r−1 for odd r, 4m−2r for even r.
        for nf in char2_curve_a_rows(&f2, 20) {
            let t = tau_of(&nf);
            if nf.index % 2 == 1 {
                let m = (nf.index + 1) as u64 / 2;
                let expected = if m % 2 == 0 { 2 * m } else { 2 * m - 1 };
                assert_eq!(t, expected, "A_{}", nf.index);
            } else {
                let m = nf.index as u64 / 2;
                let r = nf.variant.unwrap() as u64;
                let expected = if r == 0 {
                    4 * m
                } else if r % 2 == 1 {
                    4 * m - 2 * r - 1
                } else {
                    4 * m - 2 * r
                };
                assert_eq!(t, expected, "A_{}^{}", nf.index, r);
            }
        }
        // D_{2m}: 2m.  D_{2m+1}^r: 4m − 2r.
        for nf in char2_curve_d_rows(&f2, 20) {
            let t = tau_of(&nf);
            if nf.index % 2 == 0 {
                assert_eq!(t, nf.index as u64, "D_{}", nf.index);
            } else {
                let m = (nf.index as u64 - 1) / 2;
                let r = nf.variant.unwrap() as u64;
                assert_eq!(t, 4 * m - 2 * r, "D_{}^{}", nf.index, r);
            }
        }
        let e_taus: Vec<u64> = char2_curve_e_rows(&f2).iter().map(tau_of).collect();
        assert_eq!(e_taus, vec![8, 6, 7, 8]);
    }

    #[test]
    fn small_odd_characteristic_e_rows_have_the_expected_tjurina_numbers() {
        // In characteristic 3 the base rows E₆⁰, E₇⁰, E₈⁰ pick up larger
        // Tjurina numbers (their variants interpolate back down), and in
        // characteristic 5 only E₈ is affected.
        let f3 = FieldSpec::prime(3).unwrap();
        let taus: Vec<(u32, Option<u32>, u64)> = curve_e_rows(&f3)
            .iter()
            .map(|nf| (nf.index, nf.variant, tau_of(nf)))
            .collect();
        assert_eq!(
            taus,
            vec![
                (6, Some(0), 9),
                (7, Some(0), 9),
                (8, Some(0), 12),
                (6, Some(1), 7),
                (7, Some(1), 7),
                (8, Some(1), 10),
                (8, Some(2), 8),
            ]
        );
        let f5 = FieldSpec::prime(5).unwrap();
        let taus: Vec<u64> = curve_e_rows(&f5).iter().map(tau_of).collect();
        assert_eq!(taus, vec![6, 7, 10, 8]);
    }

    #[test]
    fn coefficient_choices_inside_a_row_are_torus_equivalent() {
        // Scaling the variables and the equation acts on the coefficient
        // tuple of a row through the monomial map with exponent matrix
        // (support exponents | 1); over the algebraic closure that map is
        // onto the torus exactly when the matrix has full row rank, and
        // then all nonzero coefficient choices give one contact class.
        // Check full rank for every catalogued row.
        let fields = [
            FieldSpec::RATIONALS,
            FieldSpec::prime(2).unwrap(),
            FieldSpec::prime(3).unwrap(),
            FieldSpec::prime(5).unwrap(),
        ];
        for field in &fields {
            let p = field.characteristic();
            let rows: Vec<NormalForm> = if p == 2 {
                char2_curve_a_rows(field, 20)
                    .into_iter()
                    .chain(char2_curve_d_rows(field, 20))
                    .chain(char2_curve_e_rows(field))
                    .chain(char2_surface_rows(field, 20))
                    .collect()
            } else {
                curve_d_rows(field, 10)
                    .into_iter()
                    .chain(curve_e_rows(field))
                    .collect()
            };
            for nf in rows {
                let mat: Vec<Vec<i64>> = nf
                    .poly
                    .terms()
                    .map(|(m, _)| {
                        let mut r: Vec<i64> = m.exps().iter().map(|&e| e as i64).collect();
                        r.push(1);
                        r
                    })
                    .collect();
                assert_eq!(
                    rank_i64(&mat),
                    mat.len(),
                    "torus action degenerate on {:?}_{}^{:?}",
                    nf.family,
                    nf.index,
                    nf.variant,
                );
            }
        }
    }

    fn rank_i64(mat: &[Vec<i64>]) -> usize {
        let mut m: Vec<Vec<f64>> = mat
            .iter()
            .map(|r| r.iter().map(|&x| x as f64).collect())
            .collect();
        let rows = m.len();
        if rows == 0 {
            return 0;
        }
        let cols = m[0].len();
        let mut rank = 0;
        for c in 0..cols {
            let Some(piv) = (rank..rows)
                .max_by(|&a, &b| m[a][c].abs().partial_cmp(&m[b][c].abs()).unwrap())
            else {
                break;
            };
            if m[piv][c].abs() < 1e-9 {
                continue;
            }
            m.swap(rank, piv);
            let d = m[rank][c];
            for j in 0..cols {
                m[rank][j] /= d;
            }
            for r in 0..rows {
                if r != rank {
                    let f = m[r][c];
                    for j in 0..cols {
                        m[r][j] -= f * m[rank][j];
                    }
                }
            }
            rank += 1;
        }
        rank
    }
}
