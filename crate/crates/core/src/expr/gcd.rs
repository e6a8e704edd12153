//! Multivariate gcd over ℚ: subresultant remainder sequences with content recursion,
//! guarded by a modular image test that settles the common coprime case quickly.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::poly::Poly;
use super::var::VarId;

const P: u64 = 2_305_843_009_213_693_951; // 2^61 - 1

fn mulmod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % P as u128) as u64
}

fn addmod(a: u64, b: u64) -> u64 {
    let s = a + b;
    if s >= P {
        s - P
    } else {
        s
    }
}

fn submod(a: u64, b: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + P - b
    }
}

fn powmod(mut a: u64, mut e: u64) -> u64 {
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, a);
        }
        a = mulmod(a, a);
        e >>= 1;
    }
    acc
}

fn invmod(a: u64) -> u64 {
    powmod(a, P - 2)
}

fn reduce_int(n: &BigInt) -> u64 {
    let p = BigInt::from(P);
    let r = n.mod_floor(&p);
    r.to_u64().unwrap_or(0)
}

fn reduce_rat(c: &BigRational) -> Option<u64> {
    let d = reduce_int(c.denom());
    if d == 0 {
        return None;
    }
    Some(mulmod(reduce_int(c.numer()), invmod(d)))
}

fn trim(p: &mut Vec<u64>) {
    while p.last() == Some(&0) {
        p.pop();
    }
}

/// Degree of the gcd of two univariate polynomials over 𝔽_p (`None` when either is zero).
fn gcd_degree_mod(mut a: Vec<u64>, mut b: Vec<u64>) -> Option<usize> {
    trim(&mut a);
    trim(&mut b);
    if a.is_empty() || b.is_empty() {
        return None;
    }
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    while !b.is_empty() {
        let inv = invmod(*b.last().unwrap_or(&1));
        while a.len() >= b.len() {
            let shift = a.len() - b.len();
            let f = mulmod(*a.last().unwrap_or(&0), inv);
            for (i, &bc) in b.iter().enumerate() {
                a[i + shift] = submod(a[i + shift], mulmod(f, bc));
            }
            trim(&mut a);
            if a.is_empty() {
                break;
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
    Some(a.len() - 1)
}

/// Image of `p` as a univariate polynomial in `v` after evaluating the other variables.
fn univariate_image(p: &Poly, v: VarId, point: &HashMap<VarId, u64>) -> Option<Vec<u64>> {
    let mut out = vec![0u64; p.degree_in(v) as usize + 1];
    for (m, c) in p.terms() {
        let mut t = reduce_rat(c)?;
        let mut ev = 0;
        for &(w, e) in m.factors() {
            if w == v {
                ev = e as usize;
            } else {
                t = mulmod(t, powmod(point[&w], e as u64));
            }
        }
        out[ev] = addmod(out[ev], t);
    }
    Some(out)
}

/// Upper bound on the degree in `v` of gcd(a, b), from one modular image.
///
/// Sound as long as the leading coefficients in `v` survive the evaluation, which is checked.
fn modular_degree_bound(a: &Poly, b: &Poly, v: VarId, rng: &mut ChaCha8Rng) -> Option<usize> {
    let da = a.degree_in(v) as usize;
    let db = b.degree_in(v) as usize;
    let mut vars = a.vars();
    vars.extend(b.vars());
    for _ in 0..4 {
        let point: HashMap<VarId, u64> =
            vars.iter().map(|&w| (w, rng.gen_range(2..P - 1))).collect();
        let (Some(ia), Some(ib)) = (univariate_image(a, v, &point), univariate_image(b, v, &point))
        else {
            return None;
        };
        if ia.len() != da + 1 || ib.len() != db + 1 || ia[da] == 0 || ib[db] == 0 {
            continue;
        }
        return gcd_degree_mod(ia, ib);
    }
    None
}

fn seeded_rng(a: &Poly, b: &Poly) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0x5eed ^ ((a.len() as u64) << 20) ^ b.len() as u64)
}

/// True when the modular images prove that `a` and `b` have no nonconstant common factor.
pub fn provably_coprime(a: &Poly, b: &Poly) -> bool {
    let va = a.vars();
    let vb = b.vars();
    let mut rng = seeded_rng(a, b);
    for v in va.intersection(&vb) {
        if modular_degree_bound(a, b, *v, &mut rng) != Some(0) {
            return false;
        }
    }
    true
}

/// Normalizes a gcd result: integral, primitive, positive leading coefficient.
fn normalize(p: Poly) -> Poly {
    p.integer_primitive().1
}

/// Greatest common divisor with positive leading coefficient and content 1; gcd(0, 0) = 0.
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() {
        return normalize(b.clone());
    }
    if b.is_zero() {
        return normalize(a.clone());
    }
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    let a = a.integer_primitive().1;
    let b = b.integer_primitive().1;
    if a == b {
        return a;
    }
    let ma = a.monomial_content();
    let mb = b.monomial_content();
    let mg = ma.gcd(&mb);
    let a = a.div_monomial(&ma).unwrap_or_else(|| a.clone());
    let b = b.div_monomial(&mb).unwrap_or_else(|| b.clone());
    let core = gcd_primitive(&a, &b);
    normalize(core.mul_term(&mg, &BigRational::one()))
}

/// Gcd of a list, stopping early once it becomes 1.
pub fn gcd_many<'a, I: IntoIterator<Item = &'a Poly>>(items: I) -> Poly {
    let mut g = Poly::zero();
    for p in items {
        g = gcd(&g, p);
        if g.is_one() {
            break;
        }
    }
    g
}

/// Gcd of integral polynomials whose monomial content is 1.
fn gcd_primitive(a: &Poly, b: &Poly) -> Poly {
    if a.is_constant() || b.is_constant() {
        return Poly::one();
    }
    if a == b {
        return a.clone();
    }
    let va = a.vars();
    let vb = b.vars();
    let common: Vec<VarId> = va.intersection(&vb).copied().collect();
    if common.is_empty() {
        return Poly::one();
    }
    let mut rng = seeded_rng(a, b);
    let mut candidates: Vec<(VarId, usize)> = Vec::new();
    for &v in &common {
        match modular_degree_bound(a, b, v, &mut rng) {
            Some(0) => {}
            Some(d) => candidates.push((v, d)),
            None => candidates.push((v, usize::MAX)),
        }
    }
    if candidates.is_empty() {
        return Poly::one();
    }
    // divisibility shortcut: the smaller operand may be the gcd itself
    let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    if candidates.iter().all(|&(v, d)| d == usize::MAX || d as u32 >= small.degree_in(v))
        && large.exact_divide(small).is_ok()
    {
        return normalize(small.clone());
    }
    if let Some(h) = heuristic_gcd(a, b) {
        return normalize(h);
    }
    // main variable: one the gcd may involve, of lowest degree (short remainder sequences),
    // ties broken by frequency across both operands
    let main = candidates
        .iter()
        .min_by_key(|(v, _)| {
            let count = |p: &Poly| p.terms().iter().filter(|t| t.0.exponent(*v) > 0).count();
            (a.degree_in(*v).max(b.degree_in(*v)), std::cmp::Reverse(count(a) + count(b)), *v)
        })
        .map(|c| c.0)
        .unwrap_or(common[0]);
    gcd_in(a, b, main)
}

/// Rough ceiling on the integer size (bits) the evaluation gcd may reach before giving up.
const HEU_BIT_BUDGET: f64 = 400_000.0;

/// Heuristic gcd by evaluation at large integers (GCDHEU): each variable in turn is
/// replaced by an integer ξ, the gcd of the images is lifted back by ξ-adic expansion,
/// and the candidate is accepted only if it divides both operands. `None` means no
/// verdict; the remainder-sequence path then takes over.
fn heuristic_gcd(a: &Poly, b: &Poly) -> Option<Poly> {
    let vars: Vec<VarId> = a.vars().union(&b.vars()).copied().collect();
    let bits = |p: &Poly| p.terms().iter().map(|t| t.1.numer().bits()).max().unwrap_or(0);
    let mut estimate = (bits(a).min(bits(b)) + 6) as f64;
    for &v in &vars {
        estimate *= f64::from(a.degree_in(v).max(b.degree_in(v)).max(1)) + 0.5;
    }
    if estimate > HEU_BIT_BUDGET {
        return None;
    }
    heu_rec(a, b, &vars)
}

fn int_coeffs(p: &Poly) -> impl Iterator<Item = &BigInt> {
    p.terms().iter().map(|t| t.1.numer())
}

fn heu_rec(f: &Poly, g: &Poly, vars: &[VarId]) -> Option<Poly> {
    let Some((&x, rest)) = vars.split_last() else {
        let (a, b) = (f.constant_value()?, g.constant_value()?);
        return Some(Poly::constant(BigRational::from_integer(a.numer().gcd(b.numer()))));
    };
    if f.degree_in(x) == 0 && g.degree_in(x) == 0 {
        return heu_rec(f, g, rest);
    }
    // strip the common integer content; it is restored at the end
    let content = int_coeffs(f).chain(int_coeffs(g)).fold(BigInt::zero(), |c, k| c.gcd(k));
    let inv = BigRational::from_integer(content.clone()).recip();
    let (f, g) = (f.scale(&inv), g.scale(&inv));
    let norm = |p: &Poly| int_coeffs(p).map(|c| c.abs()).max().unwrap_or_default();
    let lead = |p: &Poly| p.leading_coeff().numer().abs();
    let (fn_, gn) = (norm(&f), norm(&g));
    let bound: BigInt = fn_.clone().min(gn.clone()) * 2 + 29;
    let mut xi = bound.clone().min(bound.sqrt() * 99).max((fn_ / lead(&f)).min(gn / lead(&g)) * 2 + 2);
    for _ in 0..6 {
        let at = HashMap::from([(x, BigRational::from_integer(xi.clone()))]);
        let (ff, gg) = (f.eval_partial(&at), g.eval_partial(&at));
        if !ff.is_zero() && !gg.is_zero() {
            if let Some(h) = heu_rec(&ff, &gg, rest) {
                let cand = xi_adic(&h, x, &xi);
                if !cand.is_zero() {
                    let cand = cand.integer_primitive().1;
                    if f.exact_divide(&cand).is_ok() && g.exact_divide(&cand).is_ok() {
                        return Some(cand.scale(&BigRational::from_integer(content)));
                    }
                }
            }
        }
        xi = xi.clone() * 73794 * xi.sqrt().sqrt() / 27011;
    }
    None
}

/// Reads each integer coefficient of `h` as a balanced base-ξ number whose digits
/// become the coefficients of powers of `x`.
fn xi_adic(h: &Poly, x: VarId, xi: &BigInt) -> Poly {
    let half = xi / 2;
    let mut out = Vec::new();
    for (m, c) in h.terms() {
        let mut c = c.numer().clone();
        let mut k = 0u32;
        while !c.is_zero() {
            let mut d = c.mod_floor(xi);
            if d > half {
                d -= xi;
            }
            if !d.is_zero() {
                let mono = m.mul(&super::monomial::Monomial::from_pairs([(x, k)]));
                out.push((mono, BigRational::from_integer(d.clone())));
            }
            c = (c - d) / xi;
            k += 1;
        }
    }
    Poly::from_terms(out)
}

/// Recursive gcd treating `a`, `b` as univariate in `v` over the remaining variables.
fn gcd_in(a: &Poly, b: &Poly, v: VarId) -> Poly {
    let ca = a.coefficients_in(v);
    let cb = b.coefficients_in(v);
    let cont_a = gcd_many(ca.iter());
    let cont_b = gcd_many(cb.iter());
    let cont = gcd(&cont_a, &cont_b);
    let pa: Vec<Poly> = ca.iter().map(|c| exact(c, &cont_a)).collect();
    let pb: Vec<Poly> = cb.iter().map(|c| exact(c, &cont_b)).collect();
    let g = subresultant_gcd(pa, pb);
    let g_poly = Poly::from_coefficients(v, &g);
    normalize(cont.mul(&g_poly))
}

fn exact(a: &Poly, b: &Poly) -> Poly {
    // callers only divide by proven factors
    a.exact_divide(b).unwrap_or_else(|_| panic!("inexact division inside gcd"))
}

type UPoly = Vec<Poly>;

fn deg(p: &UPoly) -> usize {
    p.len() - 1
}

fn utrim(mut p: UPoly) -> UPoly {
    while p.len() > 1 && p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    if p.is_empty() {
        p.push(Poly::zero());
    }
    p
}

fn uzero(p: &UPoly) -> bool {
    p.iter().all(|c| c.is_zero())
}

/// Pseudo-remainder `lc(b)^(deg a - deg b + 1) · a mod b`.
fn prem(a: &UPoly, b: &UPoly) -> UPoly {
    let db = deg(b);
    let lb = &b[db];
    let mut r = a.clone();
    let mut steps = deg(a) + 1 - db;
    while !uzero(&r) && r.len() > db {
        let dr = deg(&r);
        let lr = r[dr].clone();
        let shift = dr - db;
        for c in r.iter_mut() {
            *c = c.mul(lb);
        }
        for (i, bc) in b.iter().enumerate() {
            r[i + shift] = r[i + shift].sub(&lr.mul(bc));
        }
        r = utrim(r);
        steps -= 1;
        if dr == 0 {
            break;
        }
    }
    if steps > 0 {
        let f = lb.pow(steps as u32);
        for c in r.iter_mut() {
            *c = c.mul(&f);
        }
    }
    r
}

fn content_of(p: &UPoly) -> Poly {
    gcd_many(p.iter())
}

/// Primitive gcd of two primitive univariate polynomials via the subresultant PRS.
fn subresultant_gcd(a: UPoly, b: UPoly) -> UPoly {
    let (mut a, mut b) = (utrim(a), utrim(b));
    if deg(&a) < deg(&b) {
        std::mem::swap(&mut a, &mut b);
    }
    let mut g = Poly::one();
    let mut h = Poly::one();
    loop {
        if deg(&b) == 0 {
            return vec![Poly::one()];
        }
        let delta = (deg(&a) - deg(&b)) as u32;
        let r = prem(&a, &b);
        if uzero(&r) {
            let c = content_of(&b);
            return b.iter().map(|x| exact(x, &c)).collect();
        }
        if deg(&r) == 0 {
            return vec![Poly::one()];
        }
        let div = g.mul(&h.pow(delta));
        let next: UPoly = r.iter().map(|x| exact(x, &div)).collect();
        a = b;
        b = next;
        g = a[deg(&a)].clone();
        h = if delta == 0 {
            h
        } else if delta == 1 {
            g.clone()
        } else {
            exact(&g.pow(delta), &h.pow(delta - 1))
        };
    }
}

/// Least common multiple, normalized like [`gcd`].
pub fn lcm(a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() || b.is_zero() {
        return Poly::zero();
    }
    let g = gcd(a, b);
    normalize(exact(a, &g).mul(b))
}

/// Removes from `a` every factor it shares with `b`.
pub fn strip_common(a: &Poly, b: &Poly) -> Poly {
    let mut a = a.clone();
    loop {
        let g = gcd(&a, b);
        if g.is_constant() {
            return a;
        }
        a = exact(&a, &g);
    }
}

/// Content of `p` with respect to `v`: gcd of its coefficients in `v`.
pub fn content_in(p: &Poly, v: VarId) -> Poly {
    gcd_many(p.coefficients_in(v).iter())
}

/// Primitive part of `p` with respect to `v`.
pub fn primitive_part_in(p: &Poly, v: VarId) -> Poly {
    if p.is_zero() {
        return Poly::zero();
    }
    normalize(exact(p, &content_in(p, v)))
}

pub(crate) fn integer_content(p: &Poly) -> BigInt {
    let mut g = BigInt::zero();
    for (_, c) in p.terms() {
        g = g.gcd(c.numer());
    }
    if g.is_zero() {
        BigInt::one()
    } else {
        g.abs()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u(k: usize) -> Poly {
        Poly::var(VarId::jet(1, k))
    }
    fn x() -> Poly {
        Poly::var(VarId::Independent)
    }

    #[test]
    fn spec_gcd_examples() {
        let e = &Poly::one() + &u(1).pow(2);
        let a = &u(2) * &e;
        let b = &u(2) * &u(1);
        assert_eq!(gcd(&a, &b), u(2));
        assert_eq!(gcd(&a.scale(&super::super::poly::int(-3)), &Poly::zero()), a);
        assert!(gcd(&Poly::zero(), &Poly::zero()).is_zero());
    }

    #[test]
    fn nontrivial_common_factor() {
        let f = &(&x() * &u(1)) + &(&u(2).pow(2) - &Poly::int(3));
        let g = &(&x() + &u(1)) * &(&u(1) - &Poly::int(2));
        let h = &(&x().pow(2) + &u(2)) + &Poly::one();
        let a = &f * &g;
        let b = &(&f * &h) * &x();
        assert_eq!(gcd(&a, &b), f.integer_primitive().1);
        assert!(provably_coprime(&g, &h));
        assert!(!provably_coprime(&a, &b));
    }

    #[test]
    fn modular_gcd_degree() {
        // (t - 1)(t - 2) and (t - 1)(t - 3)
        let a = vec![2, P - 3, 1];
        let b = vec![3, P - 4, 1];
        assert_eq!(gcd_degree_mod(a, b), Some(1));
    }
}
