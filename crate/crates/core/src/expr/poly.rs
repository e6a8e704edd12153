use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::monomial::Monomial;
use super::var::VarId;
use crate::error::{Error, Result};

/// Sparse multivariate polynomial over ℚ.
///
/// Terms are kept sorted in ascending graded-lex order with no zero coefficients,
/// so the leading term is the last one.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: Vec<(Monomial, BigRational)>,
}

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl Poly {
    pub fn zero() -> Self {
        Poly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly { terms: vec![(Monomial::one(), c)] }
        }
    }

    pub fn int(n: i64) -> Self {
        Poly::constant(int(n))
    }

    pub fn var(v: VarId) -> Self {
        Poly { terms: vec![(Monomial::var(v), BigRational::one())] }
    }

    pub fn term(m: Monomial, c: BigRational) -> Self {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly { terms: vec![(m, c)] }
        }
    }

    /// Collects arbitrary terms, combining equal monomials and dropping zeros.
    pub fn from_terms<I: IntoIterator<Item = (Monomial, BigRational)>>(terms: I) -> Self {
        let mut acc: HashMap<Monomial, BigRational> = HashMap::new();
        for (m, c) in terms {
            if c.is_zero() {
                continue;
            }
            match acc.get_mut(&m) {
                Some(e) => *e += c,
                None => {
                    acc.insert(m, c);
                }
            }
        }
        Poly::from_map(acc)
    }

    fn from_map(acc: HashMap<Monomial, BigRational>) -> Self {
        let mut terms: Vec<(Monomial, BigRational)> =
            acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        Poly { terms }
    }

    fn from_sorted_map(acc: BTreeMap<Monomial, BigRational>) -> Self {
        Poly { terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0.is_one())
    }

    pub fn constant_value(&self) -> Option<BigRational> {
        match self.terms.as_slice() {
            [] => Some(BigRational::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn terms(&self) -> &[(Monomial, BigRational)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn leading(&self) -> Option<&(Monomial, BigRational)> {
        self.terms.last()
    }

    pub fn leading_coeff(&self) -> BigRational {
        self.terms.last().map_or_else(BigRational::zero, |t| t.1.clone())
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.iter().map(|t| t.0.degree()).max().unwrap_or(0)
    }

    pub fn degree_in(&self, v: VarId) -> u32 {
        self.terms.iter().map(|t| t.0.exponent(v)).max().unwrap_or(0)
    }

    pub fn vars(&self) -> BTreeSet<VarId> {
        self.terms.iter().flat_map(|t| t.0.vars()).collect()
    }

    pub fn contains_var(&self, v: VarId) -> bool {
        self.terms.iter().any(|t| t.0.exponent(v) > 0)
    }

    /// Highest jet order among the jet variables present.
    pub fn jet_order(&self) -> Option<usize> {
        self.terms
            .iter()
            .flat_map(|t| t.0.vars())
            .filter_map(|v| match v {
                VarId::Jet { order, .. } => Some(order as usize),
                _ => None,
            })
            .max()
    }

    pub fn neg(&self) -> Poly {
        Poly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect() }
    }

    pub fn mul_term(&self, m: &Monomial, c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        // multiplication by a monomial preserves a monomial order
        Poly { terms: self.terms.iter().map(|(t, k)| (t.mul(m), k * c)).collect() }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        self.merge(other, false)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.merge(other, true)
    }

    fn merge(&self, other: &Poly, negate: bool) -> Poly {
        let (a, b) = (&self.terms, &other.terms);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    let c = if negate { -&b[j].1 } else { b[j].1.clone() };
                    out.push((b[j].0.clone(), c));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = if negate { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        for t in &b[j..] {
            let c = if negate { -&t.1 } else { t.1.clone() };
            out.push((t.0.clone(), c));
        }
        Poly { terms: out }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        if self.terms.len() == 1 {
            let (m, c) = &self.terms[0];
            return other.mul_term(m, c);
        }
        if other.terms.len() == 1 {
            let (m, c) = &other.terms[0];
            return self.mul_term(m, c);
        }
        let (small, large) =
            if self.terms.len() <= other.terms.len() { (self, other) } else { (other, self) };
        let mut acc: HashMap<Monomial, BigRational> =
            HashMap::with_capacity(small.terms.len() * large.terms.len() / 2 + 1);
        for (ma, ca) in &small.terms {
            for (mb, cb) in &large.terms {
                let m = ma.mul(mb);
                let c = ca * cb;
                match acc.get_mut(&m) {
                    Some(e) => *e += c,
                    None => {
                        acc.insert(m, c);
                    }
                }
            }
        }
        Poly::from_map(acc)
    }

    pub fn pow(&self, mut e: u32) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Explicit partial derivative.
    pub fn partial(&self, v: VarId) -> Poly {
        let mut terms = Vec::new();
        for (m, c) in &self.terms {
            if let Some((e, lowered)) = m.lower(v) {
                terms.push((lowered, c * int(e as i64)));
            }
        }
        Poly::from_terms(terms)
    }

    pub fn eval(&self, point: &HashMap<VarId, BigRational>) -> Option<BigRational> {
        let mut total = BigRational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for &(v, e) in m.factors() {
                let x = point.get(&v)?;
                t *= num_traits::pow(x.clone(), e as usize);
            }
            total += t;
        }
        Some(total)
    }

    /// Substitutes rational values for some variables and keeps the others symbolic.
    pub fn eval_partial(&self, point: &HashMap<VarId, BigRational>) -> Poly {
        let mut out = Vec::with_capacity(self.terms.len());
        for (m, c) in &self.terms {
            let mut coeff = c.clone();
            let mut rest = Vec::new();
            for &(v, e) in m.factors() {
                match point.get(&v) {
                    Some(x) => coeff *= num_traits::pow(x.clone(), e as usize),
                    None => rest.push((v, e)),
                }
            }
            out.push((Monomial::from_pairs(rest), coeff));
        }
        Poly::from_terms(out)
    }

    /// Simultaneous polynomial substitution.
    pub fn substitute(&self, bindings: &BTreeMap<VarId, Poly>) -> Poly {
        if bindings.is_empty() || self.vars().iter().all(|v| !bindings.contains_key(v)) {
            return self.clone();
        }
        let mut powers: HashMap<(VarId, u32), Poly> = HashMap::new();
        let mut acc = Poly::zero();
        let mut pending: Vec<(Monomial, BigRational)> = Vec::new();
        for (m, c) in &self.terms {
            let mut kept = Vec::new();
            let mut value: Option<Poly> = None;
            for &(v, e) in m.factors() {
                match bindings.get(&v) {
                    Some(p) => {
                        let pw = powers.entry((v, e)).or_insert_with(|| p.pow(e)).clone();
                        value = Some(match value {
                            Some(acc) => acc.mul(&pw),
                            None => pw,
                        });
                    }
                    None => kept.push((v, e)),
                }
            }
            let mono = Monomial::from_pairs(kept);
            match value {
                None => pending.push((mono, c.clone())),
                Some(val) => acc = acc.add(&val.mul_term(&mono, c)),
            }
        }
        acc.add(&Poly::from_terms(pending))
    }

    /// Coefficients with respect to `v`, indexed by exponent.
    pub fn coefficients_in(&self, v: VarId) -> Vec<Poly> {
        let deg = self.degree_in(v) as usize;
        let mut buckets: Vec<Vec<(Monomial, BigRational)>> = vec![Vec::new(); deg + 1];
        for (m, c) in &self.terms {
            let (e, rest) = m.split_off(v);
            buckets[e as usize].push((rest, c.clone()));
        }
        buckets
            .into_iter()
            .map(|mut b| {
                b.sort_unstable_by(|x, y| x.0.cmp(&y.0));
                Poly { terms: b }
            })
            .collect()
    }

    pub fn from_coefficients(v: VarId, coeffs: &[Poly]) -> Poly {
        let mut terms = Vec::new();
        for (e, c) in coeffs.iter().enumerate() {
            let vm = Monomial::power(v, e as u32);
            for (m, k) in c.terms() {
                terms.push((m.mul(&vm), k.clone()));
            }
        }
        terms.sort_unstable_by(|x, y| x.0.cmp(&y.0));
        Poly { terms }
    }

    /// Gcd of all monomials present.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.iter();
        let Some(first) = it.next() else { return Monomial::one() };
        let mut g = first.0.clone();
        for (m, _) in it {
            if g.is_one() {
                break;
            }
            g = g.gcd(m);
        }
        g
    }

    pub fn div_monomial(&self, m: &Monomial) -> Option<Poly> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for (t, c) in &self.terms {
            terms.push((t.div(m)?, c.clone()));
        }
        Some(Poly { terms })
    }

    /// Splits `self = c · p` with `p` integral, primitive and of positive leading coefficient.
    pub fn integer_primitive(&self) -> (BigRational, Poly) {
        if self.is_zero() {
            return (BigRational::zero(), Poly::zero());
        }
        let mut den = BigInt::one();
        let mut num = BigInt::zero();
        for (_, c) in &self.terms {
            den = den.lcm(c.denom());
            num = num.gcd(c.numer());
        }
        let mut scale = BigRational::new(num, den);
        if self.leading_coeff().is_negative() {
            scale = -scale;
        }
        if scale.is_one() {
            return (scale, self.clone());
        }
        let inv = scale.recip();
        (scale, self.scale(&inv))
    }

    pub fn is_integral(&self) -> bool {
        self.terms.iter().all(|t| t.1.is_integer())
    }

    /// Monic normalization: divide by the leading coefficient.
    pub fn monic(&self) -> Poly {
        match self.terms.last() {
            None => Poly::zero(),
            Some((_, c)) if c.is_one() => self.clone(),
            Some((_, c)) => self.scale(&c.recip()),
        }
    }

    /// Exact quotient `self / b`.
    pub fn exact_divide(&self, b: &Poly) -> Result<Poly> {
        if b.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(Poly::zero());
        }
        if let Some(c) = b.constant_value() {
            return Ok(self.scale(&c.recip()));
        }
        if b.terms.len() == 1 {
            let (m, c) = &b.terms[0];
            let q = self.div_monomial(m).ok_or(Error::NotDivisible)?;
            return Ok(q.scale(&c.recip()));
        }
        for v in b.vars() {
            if b.degree_in(v) > self.degree_in(v) {
                return Err(Error::NotDivisible);
            }
        }
        let (lm, lc) = b.terms.last().cloned().ok_or(Error::DivisionByZero)?;
        let lc_inv = lc.recip();
        let mut rem: BTreeMap<Monomial, BigRational> = self.terms.iter().cloned().collect();
        let mut quot: Vec<(Monomial, BigRational)> = Vec::new();
        while let Some((m, c)) = rem.pop_last() {
            let qm = m.div(&lm).ok_or(Error::NotDivisible)?;
            let qc = &c * &lc_inv;
            // the leading term cancels by construction; subtract the rest of qc*qm*b
            for (bm, bc) in b.terms.iter().rev().skip(1) {
                let t = bm.mul(&qm);
                let delta = &qc * bc;
                match rem.get_mut(&t) {
                    Some(e) => {
                        *e -= delta;
                        if e.is_zero() {
                            rem.remove(&t);
                        }
                    }
                    None => {
                        rem.insert(t, -delta);
                    }
                }
            }
            quot.push((qm, qc));
        }
        quot.reverse();
        Ok(Poly { terms: quot })
    }

    pub fn divides(&self, a: &Poly) -> bool {
        a.exact_divide(self).is_ok()
    }

    pub fn into_sorted_map(self) -> BTreeMap<Monomial, BigRational> {
        self.terms.into_iter().collect()
    }

    pub fn from_btree(map: BTreeMap<Monomial, BigRational>) -> Poly {
        Poly::from_sorted_map(map)
    }

    pub fn map_coefficients(&self, f: impl Fn(&BigRational) -> BigRational) -> Poly {
        Poly::from_terms(self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }
}

pub fn exact_divide(a: &Poly, b: &Poly) -> Result<Poly> {
    a.exact_divide(b)
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        Poly::add(self, rhs)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        Poly::sub(self, rhs)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        Poly::mul(self, rhs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::neg(self)
    }
}

impl From<VarId> for Poly {
    fn from(v: VarId) -> Poly {
        Poly::var(v)
    }
}

impl std::fmt::Debug for Poly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&super::render::render_poly(self))
    }
}

impl std::fmt::Display for Poly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&super::render::render_poly(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u(k: usize) -> Poly {
        Poly::var(VarId::jet(1, k))
    }

    #[test]
    fn difference_of_squares() {
        let a = &Poly::one() + &u(1);
        let b = &Poly::one() - &u(1);
        assert_eq!((&a * &b).to_string(), "1 - u1_1^2");
    }

    #[test]
    fn exact_division() {
        let e = &Poly::one() + &u(1).pow(2);
        let a = &u(2).pow(2) * &e;
        assert_eq!(a.exact_divide(&u(2)).unwrap(), &u(2) * &e);
        assert_eq!(e.exact_divide(&u(2)), Err(Error::NotDivisible));
        assert_eq!(e.exact_divide(&Poly::zero()), Err(Error::DivisionByZero));
        let c = &(&u(1) + &u(2)) * &(&u(1) - &Poly::int(3));
        assert_eq!(c.exact_divide(&(&u(1) + &u(2))).unwrap(), &u(1) - &Poly::int(3));
        assert_eq!(c.exact_divide(&(&u(1) + &Poly::int(1))), Err(Error::NotDivisible));
    }

    #[test]
    fn partial_and_substitute() {
        let p = &u(1).pow(2) + &Poly::var(VarId::Independent);
        assert_eq!(p.partial(VarId::jet(1, 1)), u(1).scale(&int(2)));
        let mut b = BTreeMap::new();
        b.insert(VarId::jet(1, 1), Poly::zero());
        b.insert(VarId::Independent, Poly::one());
        assert_eq!(p.substitute(&b), Poly::one());
    }

    #[test]
    fn primitive_part() {
        let p = (&u(1).scale(&rat(-2, 3)) + &Poly::constant(rat(4, 9))).clone();
        let (c, q) = p.integer_primitive();
        assert_eq!(c, rat(-2, 9));
        assert_eq!(q.to_string(), "-2 + 3*u1_1");
        assert_eq!(q.scale(&c), p);
    }
}
