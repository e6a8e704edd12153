mod common;

use proptest::prelude::*;

use common::*;
use jetlie_core::catalog::{algebra_by_id, AlgebraSpec};
use jetlie_core::expr::{AtomTable, Poly, RatExpr, VarId};
use jetlie_core::jetspace::{lie_bracket, prolong, JetContext, VectorField};

const CATALOG: [(&str, usize); 9] = [
    ("I", 1),
    ("IV", 1),
    ("VI", 1),
    ("VIII", 1),
    ("sl2", 1),
    ("example3", 1),
    ("isometry", 2),
    ("conformal", 2),
    ("projective", 2),
];

fn catalog(i: usize) -> AlgebraSpec {
    let (id, m) = CATALOG[i];
    algebra_by_id(id, m, None).unwrap()
}

/// Random rational combination of the generators of a catalog algebra.
fn catalog_field(alg: &AlgebraSpec, coeffs: &[i64]) -> VectorField {
    let c: Vec<RatExpr> = alg.generators.iter().zip(coeffs.iter().cycle()).map(|(_, k)| RatExpr::int(*k)).collect();
    VectorField::combination(&alg.generators, &c)
}

fn coeffs() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-3i64..=3, 1..9)
}

proptest! {
    #![proptest_config(config(0x7e7))]

    #[test]
    fn prolongation_is_linear(
        r in 0usize..=3,
        (m, x, y) in (1usize..=2).prop_flat_map(|m| (Just(m), point_field(m), point_field(m))),
        a in rational(),
        b in rational(),
    ) {
        let ctx = JetContext::new(m, r).unwrap();
        let combo = x.scale_rational(&a).add(&y.scale_rational(&b));
        let lhs = prolong(&combo, r, &ctx).unwrap().row();
        let px = prolong(&x, r, &ctx).unwrap().row();
        let py = prolong(&y, r, &ctx).unwrap().row();
        for (l, (u, v)) in lhs.iter().zip(px.iter().zip(&py)) {
            prop_assert_eq!(l, &u.scale(&a).add(&v.scale(&b)));
        }
    }

    #[test]
    fn prolongation_commutes_with_brackets(
        i in 0..CATALOG.len(),
        r in 0usize..=3,
        cx in coeffs(),
        cy in coeffs(),
    ) {
        let alg = catalog(i);
        let (x, y) = (catalog_field(&alg, &cx), catalog_field(&alg, &cy));
        let ctx = alg.context(r + 1).unwrap();
        let low = alg.context(r).unwrap();
        let px = prolong(&x, r, &low).unwrap();
        let py = prolong(&y, r, &low).unwrap();
        let pb = prolong(&lie_bracket(&x, &y, &alg.atoms), r, &low).unwrap();
        for v in low.coordinates(r) {
            let e = RatExpr::var(v);
            let xy = px.apply(&py.apply(&e, &ctx).unwrap(), &ctx).unwrap();
            let yx = py.apply(&px.apply(&e, &ctx).unwrap(), &ctx).unwrap();
            let coeff = pb.apply(&e, &ctx).unwrap();
            prop_assert!(alg.atoms.is_zero(&xy.sub(&yx).sub(&coeff)), "{} at {:?}", alg.name, v);
        }
    }

    #[test]
    fn bracket_antisymmetry_and_jacobi(
        i in 0..CATALOG.len(),
        c1 in coeffs(),
        c2 in coeffs(),
        c3 in coeffs(),
    ) {
        let alg = catalog(i);
        let t = &alg.atoms;
        let (x, y, z) = (catalog_field(&alg, &c1), catalog_field(&alg, &c2), catalog_field(&alg, &c3));
        prop_assert_eq!(lie_bracket(&x, &y, t), lie_bracket(&y, &x, t).scale_rational(&q(-1, 1)));
        let j = lie_bracket(&x, &lie_bracket(&y, &z, t), t)
            .add(&lie_bracket(&y, &lie_bracket(&z, &x, t), t))
            .add(&lie_bracket(&z, &lie_bracket(&x, &y, t), t));
        prop_assert!(j.is_zero());
    }

    #[test]
    fn random_fields_satisfy_jacobi(x in point_field(1), y in point_field(1), z in point_field(1)) {
        let t = AtomTable::new();
        let j = lie_bracket(&x, &lie_bracket(&y, &z, &t), &t)
            .add(&lie_bracket(&y, &lie_bracket(&z, &x, &t), &t))
            .add(&lie_bracket(&z, &lie_bracket(&x, &y, &t), &t));
        prop_assert!(j.is_zero());
    }

    #[test]
    fn total_derivative_raises_order_by_one(k in 0usize..4, p in poly_over(vec![VarId::Independent, VarId::jet(1, 0)], 3, 3)) {
        let top = VarId::jet(1, k);
        let e = RatExpr::from_poly(p.mul(&p).add(&Poly::one()).mul(&Poly::var(top)));
        let ctx = JetContext::new(1, 5).unwrap();
        prop_assert_eq!(ctx.effective_order(&e), k);
        let d = ctx.total_derivative(&e).unwrap();
        prop_assert_eq!(ctx.effective_order(&d), k + 1);
    }
}
