#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};

use jetlie_core::catalog::AlgebraSpec;
use jetlie_core::expr::{Monomial, Poly, RatExpr, VarId};
use jetlie_core::jetspace::VectorField;

/// Every suite runs at least this many cases from a fixed seed.
pub const CASES: u32 = 128;

pub fn config(seed: u64) -> Config {
    Config { cases: CASES, rng_seed: RngSeed::Fixed(seed), failure_persistence: None, ..Config::default() }
}

pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn w() -> VarId {
    VarId::atom("w").unwrap()
}

pub fn k_param() -> VarId {
    VarId::param("K").unwrap()
}

/// Sparse polynomial over `vars` with small integer coefficients and exponents below `max_exp`.
pub fn poly_over(vars: Vec<VarId>, terms: usize, max_exp: u32) -> impl Strategy<Value = Poly> {
    let n = vars.len();
    prop::collection::vec((-6i64..=6, prop::collection::vec(0..max_exp, n)), 0..=terms).prop_map(move |ts| {
        Poly::from_terms(ts.into_iter().map(|(c, es)| {
            (Monomial::from_pairs(vars.iter().copied().zip(es)), q(c, 1))
        }))
    })
}

pub fn jet_vars() -> Vec<VarId> {
    vec![VarId::Independent, VarId::jet(1, 0), VarId::jet(1, 1), VarId::jet(1, 2)]
}

/// Jet variables plus the atom `w` and the parameter `K`.
pub fn rich_vars() -> Vec<VarId> {
    let mut v = jet_vars();
    v.push(w());
    v.push(k_param());
    v
}

pub fn small_poly() -> impl Strategy<Value = Poly> {
    poly_over(jet_vars(), 4, 3)
}

pub fn nonzero_poly() -> impl Strategy<Value = Poly> {
    small_poly().prop_filter("nonzero", |p| !p.is_zero())
}

pub fn rat_expr(vars: Vec<VarId>) -> impl Strategy<Value = RatExpr> {
    (poly_over(vars.clone(), 3, 3), poly_over(vars, 3, 2).prop_filter("nonzero", |p| !p.is_zero()))
        .prop_map(|(n, d)| RatExpr::new(n, d).unwrap())
}

pub fn rational() -> impl Strategy<Value = BigRational> {
    (-7i64..=7, 1i64..=5).prop_map(|(n, d)| q(n, d))
}

/// Point vector field with polynomial components in `x, u1..um`.
pub fn point_field(m: usize) -> impl Strategy<Value = VectorField> {
    let mut base = vec![VarId::Independent];
    base.extend((1..=m).map(|i| VarId::jet(i, 0)));
    prop::collection::vec(poly_over(base, 3, 3), m + 1).prop_map(|mut c| {
        let xi = RatExpr::from_poly(c.remove(0));
        VectorField::new(xi, c.into_iter().map(RatExpr::from_poly).collect()).unwrap()
    })
}

/// Unimodular integer matrix: a product of elementary row operations.
pub fn unimodular(n: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec((0..n, 0..n, -2i64..=2, any::<bool>()), 1..8).prop_map(move |ops| {
        let mut u: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
        for (i, j, k, flip) in ops {
            if flip {
                u.swap(i, j);
            } else if i != j {
                let rj = u[j].clone();
                for (a, b) in u[i].iter_mut().zip(rj) {
                    *a += k * b;
                }
            } else {
                for a in u[i].iter_mut() {
                    *a = -*a;
                }
            }
        }
        u
    })
}

pub fn rebase(alg: &AlgebraSpec, u: &[Vec<i64>]) -> AlgebraSpec {
    let gens = u
        .iter()
        .map(|row| {
            let coeffs: Vec<RatExpr> = row.iter().map(|&c| RatExpr::int(c)).collect();
            VectorField::combination(&alg.generators, &coeffs)
        })
        .collect();
    alg.with_generators(gens)
}
