//! Exact evaluation at random rational points, used to cross-check symbolic identities.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::expr::{Poly, VarId};

/// `count` points with small nonzero rational coordinates for `vars`, reproducible from `seed`.
pub fn random_points(vars: &BTreeSet<VarId>, count: usize, seed: u64) -> Vec<HashMap<VarId, BigRational>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            vars.iter()
                .map(|v| {
                    let mut n: i64 = rng.gen_range(-9..=9);
                    if n == 0 {
                        n = 10;
                    }
                    let d: i64 = rng.gen_range(1..=7);
                    (*v, BigRational::new(BigInt::from(n), BigInt::from(d)))
                })
                .collect()
        })
        .collect()
}

/// Determinant of a rational matrix by Gaussian elimination.
pub fn det_rational(mut a: Vec<Vec<BigRational>>) -> BigRational {
    let n = a.len();
    let mut det = BigRational::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else { return BigRational::zero() };
        if p != k {
            a.swap(p, k);
            det = -det;
        }
        let piv = a[k][k].clone();
        det *= &piv;
        for i in (k + 1)..n {
            if a[i][k].is_zero() {
                continue;
            }
            let f = &a[i][k] / &piv;
            for j in k..n {
                let t = &f * &a[k][j];
                a[i][j] -= t;
            }
        }
    }
    det
}

fn matrix_vars(rows: &[Vec<Poly>]) -> BTreeSet<VarId> {
    rows.iter().flatten().flat_map(|p| p.vars()).collect()
}

/// Compares a symbolic determinant with numeric determinants at `count` random points.
pub fn det_agrees_at_points(rows: &[Vec<Poly>], det: &Poly, count: usize, seed: u64) -> bool {
    let mut vars = matrix_vars(rows);
    vars.extend(det.vars());
    random_points(&vars, count, seed).iter().all(|pt| {
        let numeric: Vec<Vec<BigRational>> =
            rows.iter().map(|r| r.iter().map(|p| p.eval(pt).expect("all variables bound")).collect()).collect();
        det_rational(numeric) == det.eval(pt).expect("all variables bound")
    })
}

/// Checks `q * b == a` at random points; a cheap witness for exact division results.
pub fn product_agrees_at_points(a: &Poly, b: &Poly, q: &Poly, count: usize, seed: u64) -> bool {
    let vars: BTreeSet<VarId> = a.vars().into_iter().chain(b.vars()).chain(q.vars()).collect();
    random_points(&vars, count, seed).iter().all(|pt| {
        let ev = |p: &Poly| p.eval(pt).expect("all variables bound");
        ev(q) * ev(b) == ev(a)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linear::det_poly;

    #[test]
    fn numeric_and_symbolic_determinants_agree() {
        let v = |i| Poly::var(VarId::jet(1, i));
        let rows = vec![vec![v(0), Poly::one()], vec![v(1).mul(&v(2)), v(2)]];
        let d = det_poly(&rows);
        assert!(det_agrees_at_points(&rows, &d, 5, 7));
        assert!(!det_agrees_at_points(&rows, &d.add(&Poly::one()), 5, 7));
        let pts = random_points(&[VarId::Independent].into_iter().collect(), 3, 1);
        assert_eq!(pts, random_points(&[VarId::Independent].into_iter().collect(), 3, 1));
    }
}
