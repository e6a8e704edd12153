mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;

use common::*;
use jetlie_core::catalog::w_atom;
use jetlie_core::expr::{gcd, AtomTable, Poly, RatExpr, VarId};
use jetlie_core::oracle::random_points;
use jetlie_core::parse::{parse_expression, Scope};

fn atoms() -> AtomTable {
    AtomTable::from_defs(vec![w_atom()]).unwrap()
}

proptest! {
    #![proptest_config(config(0x0e1))]

    #[test]
    fn ring_laws(a in small_poly(), b in small_poly(), c in small_poly()) {
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.add(&b).mul(&c), a.mul(&c).add(&b.mul(&c)));
        prop_assert!(a.sub(&a).is_zero());
    }

    #[test]
    fn rational_field_laws(a in rat_expr(jet_vars()), b in rat_expr(jet_vars()), c in rat_expr(jet_vars())) {
        prop_assert_eq!(a.add(&b).mul(&c), a.mul(&c).add(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        if !b.is_zero() {
            prop_assert_eq!(a.div(&b).unwrap().mul(&b), a.clone());
        }
    }

    #[test]
    fn normalization_is_idempotent(e in rat_expr(rich_vars())) {
        let again = RatExpr::new(e.num().clone(), e.den().clone()).unwrap();
        prop_assert_eq!(again, e);
    }

    #[test]
    fn exact_divide_is_sound(a in small_poly(), b in nonzero_poly()) {
        let prod = a.mul(&b);
        let q = prod.exact_divide(&b).unwrap();
        prop_assert_eq!(&q, &a);
        if let Ok(q) = a.exact_divide(&b) {
            prop_assert_eq!(q.mul(&b), a);
        }
    }

    #[test]
    fn gcd_divides_both(a in nonzero_poly(), b in nonzero_poly(), c in nonzero_poly()) {
        let (ac, bc) = (a.mul(&c), b.mul(&c));
        let g = gcd(&ac, &bc);
        let qa = ac.exact_divide(&g).unwrap();
        let qb = bc.exact_divide(&g).unwrap();
        prop_assert!(g.exact_divide(&c).is_ok(), "common factor lost: gcd {} vs {}", g, c);
        prop_assert_eq!(qa.mul(&bc), ac.mul(&bc).exact_divide(&g).unwrap());
        prop_assert_eq!(g.mul(&qa).mul(&qb).mul(&g), ac.mul(&bc));
    }

    #[test]
    fn leibniz_with_atoms(
        a in rat_expr(rich_vars()),
        b in rat_expr(rich_vars()),
        v in prop::sample::select(rich_vars()),
    ) {
        let t = atoms();
        let lhs = t.differentiate(&a.mul(&b), v);
        let rhs = t.differentiate(&a, v).mul(&b).add(&a.mul(&t.differentiate(&b, v)));
        prop_assert!(t.is_zero(&lhs.sub(&rhs)));
    }

    #[test]
    fn random_points_agree_with_symbolic_identities(a in small_poly(), b in small_poly(), seed in any::<u64>()) {
        let lhs = a.add(&b).pow(2);
        let rhs = a.mul(&a).add(&a.mul(&b).scale(&q(2, 1))).add(&b.mul(&b));
        prop_assert_eq!(&lhs, &rhs);
        let vars: BTreeSet<VarId> = jet_vars().into_iter().collect();
        for pt in random_points(&vars, 5, seed) {
            let (x, y) = (a.eval(&pt).unwrap(), b.eval(&pt).unwrap());
            prop_assert_eq!(lhs.eval(&pt).unwrap(), (&x + &y) * (&x + &y));
        }
    }

    #[test]
    fn parse_print_round_trip(e in rat_expr(rich_vars())) {
        let scope = Scope::new(1, 2).with_atoms(atoms()).with_params(&["K"]).unwrap();
        let text = e.canonical_string();
        let back = parse_expression(&text, &scope).unwrap();
        prop_assert_eq!(back, e, "{}", text);
    }

    #[test]
    fn polynomial_parse_round_trip(p in poly_over(rich_vars(), 6, 4)) {
        let scope = Scope::new(1, 2).with_atoms(atoms()).with_params(&["K"]).unwrap();
        let e = RatExpr::from_poly(p);
        prop_assert_eq!(parse_expression(&e.canonical_string(), &scope).unwrap(), e);
    }
}

#[test]
fn zero_and_one_are_identities() {
    let p = Poly::var(VarId::jet(1, 1)).add(&Poly::int(3));
    assert_eq!(p.add(&Poly::zero()), p);
    assert_eq!(p.mul(&Poly::one()), p);
}
