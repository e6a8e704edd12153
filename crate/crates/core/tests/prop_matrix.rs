mod common;

use proptest::prelude::*;

use common::*;
use jetlie_core::catalog::{algebra_by_id, lines_ode, AlgebraSpec};
use jetlie_core::expr::{Poly, RatExpr, VarId};
use jetlie_core::linear::{det_cofactor, det_poly};
use jetlie_core::oracle::det_agrees_at_points;
use jetlie_core::parse::{parse_poly, Scope};
use jetlie_core::remarkable::{
    certify_hypersurface, certify_invariant_derivative, certify_system, generic_rank, maximal_minors,
    prolongation_matrix, Certificate,
};

const CATALOG: [(&str, usize); 10] = [
    ("I", 1),
    ("IV", 1),
    ("V", 1),
    ("VI", 1),
    ("VII", 1),
    ("VIII", 1),
    ("example3", 1),
    ("isometry", 2),
    ("affine", 2),
    ("conformal", 2),
];

fn catalog(i: usize) -> AlgebraSpec {
    let (id, m) = CATALOG[i];
    algebra_by_id(id, m, None).unwrap()
}

fn square(n: usize) -> impl Strategy<Value = Vec<Vec<Poly>>> {
    prop::collection::vec(prop::collection::vec(small_poly(), n), n)
}

fn sub(a: &[Vec<Poly>], rows: &[usize], cols: &[usize]) -> Vec<Vec<Poly>> {
    rows.iter().map(|&i| cols.iter().map(|&j| a[i][j].clone()).collect()).collect()
}

/// Strictly increasing index set of length `k` drawn from `0..n`.
fn subset(n: usize, k: usize) -> impl Strategy<Value = Vec<usize>> {
    prop::sample::subsequence((0..n).collect::<Vec<_>>(), k)
}

fn primitive(p: &Poly) -> Poly {
    if p.is_zero() {
        p.clone()
    } else {
        p.integer_primitive().1
    }
}

/// Everything about a certificate that must not depend on the chosen basis.
fn shape(c: &Certificate) -> (String, usize, Option<usize>, Option<Poly>) {
    (c.verdict.name().to_string(), c.generic_rank, c.lower_rank, c.minor_gcd.as_ref().map(primitive))
}

fn certificate(case: usize, alg: &AlgebraSpec) -> Certificate {
    let e = |s: &str, r| parse_poly(s, &Scope::new(1, r)).unwrap();
    match case {
        0 => certify_hypersurface(alg, 2, &e("u1_2", 2)).unwrap(),
        1 => certify_hypersurface(alg, 1, &e("u1_1", 1)).unwrap(),
        2 => certify_hypersurface(alg, 3, &e("(1 + u1_1^2)*u1_3 - 3*u1_1*u1_2^2", 3)).unwrap(),
        3 => certify_invariant_derivative(alg, 3, &RatExpr::var(VarId::jet(1, 2))).unwrap(),
        _ => certify_system(alg, &lines_ode(2).unwrap()).unwrap(),
    }
}

const CERT_CASES: [&str; 5] = ["IV", "I", "VII", "example3", "isometry"];

proptest! {
    #![proptest_config(config(0x3a7))]

    #[test]
    fn determinant_routes_agree(a in (1usize..=4).prop_flat_map(square), seed in any::<u64>()) {
        let d = det_poly(&a);
        prop_assert_eq!(&d, &det_cofactor(&a));
        prop_assert!(det_agrees_at_points(&a, &d, 5, seed));
    }

    #[test]
    fn catalog_square_minors_agree(
        (i, r, rows, cols) in (0..CATALOG.len(), 0usize..=3).prop_flat_map(|(i, r)| {
            let alg = catalog(i);
            let (nr, nc) = (alg.dim(), 1 + alg.m * (r + 1));
            (1..=nr.min(nc).min(5)).prop_flat_map(move |k| (Just(i), Just(r), subset(nr, k), subset(nc, k)))
        }),
        seed in any::<u64>(),
    ) {
        let a = prolongation_matrix(&catalog(i), r).unwrap().poly_rows();
        let s = sub(&a, &rows, &cols);
        let d = det_poly(&s);
        prop_assert_eq!(&d, &det_cofactor(&s));
        prop_assert!(det_agrees_at_points(&s, &d, 5, seed));
    }

    #[test]
    fn rank_is_basis_invariant(
        (i, u) in (0..CATALOG.len()).prop_flat_map(|i| (Just(i), unimodular(catalog(i).dim()))),
        r in 0usize..=4,
    ) {
        let alg = catalog(i);
        let other = rebase(&alg, &u);
        let a = generic_rank(&prolongation_matrix(&alg, r).unwrap());
        let b = generic_rank(&prolongation_matrix(&other, r).unwrap());
        prop_assert_eq!(a.generic_rank, b.generic_rank);
    }

    #[test]
    fn certificate_verdicts_are_basis_invariant(
        (case, u) in (0..CERT_CASES.len()).prop_flat_map(|c| {
            let m = if c == 4 { 2 } else { 1 };
            (Just(c), unimodular(algebra_by_id(CERT_CASES[c], m, None).unwrap().dim()))
        }),
    ) {
        let m = if case == 4 { 2 } else { 1 };
        let alg = algebra_by_id(CERT_CASES[case], m, None).unwrap();
        let a = certificate(case, &alg);
        let b = certificate(case, &rebase(&alg, &u));
        prop_assert_eq!(shape(&a), shape(&b));
        prop_assert_eq!(a.offending.len(), b.offending.len());
    }

    #[test]
    fn divisibility_reports_are_sound(extra in nonzero_poly(), case in 0usize..3) {
        let (id, r, e) = [
            ("IV", 2, "u1_2"),
            ("VII", 3, "(1 + u1_1^2)*u1_3 - 3*u1_1*u1_2^2"),
            ("VIII", 5, "9*u1_5*u1_2^2 + 40*u1_3^3 - 45*u1_2*u1_3*u1_4"),
        ][case];
        let e = parse_poly(e, &Scope::new(1, r)).unwrap();
        let c = certify_hypersurface(&algebra_by_id(id, 1, None).unwrap(), r, &e).unwrap();
        prop_assert!(!c.verdict.is_failed());
        for mi in &c.minors {
            let q = mi.value.exact_divide(&e).unwrap();
            prop_assert_eq!(q.mul(&e), mi.value.clone());
            // still sound after multiplying in an unrelated factor
            let scaled = mi.value.mul(&extra);
            prop_assert_eq!(scaled.exact_divide(&e).unwrap(), q.mul(&extra));
        }
    }

    #[test]
    fn base_columns_never_change(i in 0..CATALOG.len(), r in 0usize..=4) {
        let alg = catalog(i);
        let low = prolongation_matrix(&alg, r).unwrap();
        let high = prolongation_matrix(&alg, r + 1).unwrap();
        let base = 1 + alg.m;
        for (a, b) in low.rows.iter().zip(&high.rows) {
            prop_assert_eq!(&a[..base], &b[..base]);
            prop_assert_eq!(&a[..], &b[..a.len()]);
        }
    }

    #[test]
    fn top_minors_are_linear_in_top_derivatives(
        (i, r, rows, cols) in (0..CATALOG.len(), 2usize..=4).prop_flat_map(|(i, r)| {
            let alg = catalog(i);
            let (nr, nc, m) = (alg.dim(), 1 + alg.m * (r + 1), alg.m);
            let k = nr.min(nc);
            (Just(i), Just(r), subset(nr, k), subset(nc - 1, k - 1)).prop_flat_map(move |(i, r, rows, rest)| {
                // force one top-order column into the minor
                (Just(i), Just(r), Just(rows), (nc - m..nc).prop_map(move |top| {
                    let mut cols: Vec<usize> = rest.iter().map(|&c| if c >= top { c + 1 } else { c }).collect();
                    cols.push(top);
                    cols.sort_unstable();
                    cols
                }))
            })
        }),
    ) {
        let alg = catalog(i);
        let a = prolongation_matrix(&alg, r).unwrap().poly_rows();
        let d = det_poly(&sub(&a, &rows, &cols));
        let top: Vec<VarId> = (1..=alg.m).map(|j| VarId::jet(j, r)).collect();
        // every top-order column is affine in (u1_r, ..., um_r) and no other column involves them
        let top_cols = cols.iter().filter(|&&c| c > alg.m * r).count();
        let joint = d.terms().iter().map(|(mono, _)| top.iter().map(|v| mono.exponent(*v)).sum::<u32>()).max().unwrap_or(0);
        prop_assert!(joint as usize <= top_cols, "{} r={r} rows {:?} cols {:?}: {}", alg.name, rows, cols, d);
        if alg.m == 1 {
            prop_assert!(d.degree_in(top[0]) <= 1, "{} r={r}: {}", alg.name, d);
        }
    }
}

#[test]
fn every_square_catalog_matrix_has_consistent_determinants() {
    let mut seen = 0;
    for i in 0..CATALOG.len() {
        let alg = catalog(i);
        for r in 0..=6 {
            let mx = prolongation_matrix(&alg, r).unwrap();
            if !mx.is_square() {
                continue;
            }
            let a = mx.poly_rows();
            let d = det_poly(&a);
            assert_eq!(d, det_cofactor(&a), "{} r={r}", alg.name);
            assert!(det_agrees_at_points(&a, &d, 5, 0x5eed), "{} r={r}", alg.name);
            seen += 1;
        }
    }
    assert!(seen >= 4);
}

#[test]
fn maximal_minor_count_matches_binomial() {
    let vii = catalog(4);
    assert_eq!(maximal_minors(&prolongation_matrix(&vii, 3).unwrap(), 5).len(), 6);
}
