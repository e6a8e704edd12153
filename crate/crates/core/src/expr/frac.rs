//! Unreduced fractions with a factored denominator.
//!
//! Used for zero tests on large expressions, where gcd-based normalization after
//! every step would dominate: denominators are tracked as powers of known factors
//! and combined by lcm on factor identity, never by polynomial gcd.

use std::collections::{BTreeMap, HashMap};

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::poly::Poly;
use super::ratexpr::RatExpr;
use super::var::VarId;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct Frac {
    num: Poly,
    /// Distinct nonconstant factors, each integral primitive with positive leading coefficient.
    den: Vec<(Poly, u32)>,
}

impl Frac {
    pub fn zero() -> Self {
        Frac { num: Poly::zero(), den: Vec::new() }
    }

    pub fn one() -> Self {
        Frac::from_poly(Poly::one())
    }

    pub fn from_poly(p: Poly) -> Self {
        Frac { num: p, den: Vec::new() }
    }

    pub fn var(v: VarId) -> Self {
        Frac::from_poly(Poly::var(v))
    }

    pub fn from_ratexpr(e: &RatExpr) -> Self {
        let mut f = Frac::from_poly(e.num().clone());
        if !e.den().is_one() {
            f.den.push((e.den().clone(), 1));
        }
        f
    }

    /// `num / factor^exp`, with the factor normalized.
    pub fn over(num: Poly, factor: &Poly, exp: u32) -> Result<Self> {
        let mut f = Frac::from_poly(num);
        f.divide_by_factor(factor, exp)?;
        Ok(f)
    }

    fn divide_by_factor(&mut self, factor: &Poly, exp: u32) -> Result<()> {
        if exp == 0 {
            return Ok(());
        }
        if factor.is_zero() {
            return Err(Error::DenominatorVanishes);
        }
        let (c, p) = factor.integer_primitive();
        self.num = self.num.scale(&num_traits::pow(c.recip(), exp as usize));
        if p.is_one() {
            return Ok(());
        }
        match self.den.iter_mut().find(|(q, _)| *q == p) {
            Some(entry) => entry.1 += exp,
            None => self.den.push((p, exp)),
        }
        Ok(())
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den_factors(&self) -> &[(Poly, u32)] {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn den_product(&self) -> Poly {
        let mut d = Poly::one();
        for (f, e) in &self.den {
            d = d.mul(&f.pow(*e));
        }
        d
    }

    pub fn to_ratexpr(&self) -> Result<RatExpr> {
        if self.den.is_empty() {
            return Ok(RatExpr::from_poly(self.num.clone()));
        }
        RatExpr::new(self.num.clone(), self.den_product())
    }

    pub fn neg(&self) -> Frac {
        Frac { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn scale(&self, c: &BigRational) -> Frac {
        Frac { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn add(&self, other: &Frac) -> Frac {
        self.combine(other, false)
    }

    pub fn sub(&self, other: &Frac) -> Frac {
        self.combine(other, true)
    }

    fn combine(&self, other: &Frac, negate: bool) -> Frac {
        if other.num.is_zero() {
            return self.clone();
        }
        if self.num.is_zero() {
            return if negate { other.neg() } else { other.clone() };
        }
        let mut den = self.den.clone();
        for (f, e) in &other.den {
            match den.iter_mut().find(|(g, _)| g == f) {
                Some(entry) => entry.1 = entry.1.max(*e),
                None => den.push((f.clone(), *e)),
            }
        }
        let a = self.num.mul(&missing(&den, &self.den));
        let b = other.num.mul(&missing(&den, &other.den));
        let num = if negate { a.sub(&b) } else { a.add(&b) };
        Frac { num, den }
    }

    pub fn mul(&self, other: &Frac) -> Frac {
        if self.num.is_zero() || other.num.is_zero() {
            return Frac::zero();
        }
        let mut den = self.den.clone();
        for (f, e) in &other.den {
            match den.iter_mut().find(|(g, _)| g == f) {
                Some(entry) => entry.1 += *e,
                None => den.push((f.clone(), *e)),
            }
        }
        Frac { num: self.num.mul(&other.num), den }
    }

    pub fn mul_poly(&self, p: &Poly) -> Frac {
        Frac { num: self.num.mul(p), den: self.den.clone() }
    }

    pub fn div(&self, other: &Frac) -> Result<Frac> {
        if other.num.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut out = self.mul(&Frac::from_poly(other.den_product()));
        out.divide_by_factor(&other.num, 1)?;
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Frac {
        Frac {
            num: self.num.pow(e),
            den: self.den.iter().map(|(f, k)| (f.clone(), k * e)).collect(),
        }
    }

    /// Explicit partial derivative.
    pub fn partial(&self, v: VarId) -> Frac {
        let involved: Vec<usize> =
            (0..self.den.len()).filter(|&i| self.den[i].0.contains_var(v)).collect();
        let dn = self.num.partial(v);
        if involved.is_empty() {
            return Frac { num: dn, den: self.den.clone() };
        }
        // d(N / prod F_i^e_i) = (N' prod F_i - N sum e_i F_i' prod_{j != i} F_j) / prod F_i^(e_i+1)
        let mut prod_all = Poly::one();
        for &i in &involved {
            prod_all = prod_all.mul(&self.den[i].0);
        }
        let mut num = dn.mul(&prod_all);
        for &i in &involved {
            let (f, e) = &self.den[i];
            let mut others = Poly::one();
            for &j in &involved {
                if j != i {
                    others = others.mul(&self.den[j].0);
                }
            }
            let term = f.partial(v).mul(&others).scale(&BigRational::from_integer((*e).into()));
            num = num.sub(&self.num.mul(&term));
        }
        let mut den = self.den.clone();
        for &i in &involved {
            den[i].1 += 1;
        }
        Frac { num, den }
    }

    /// Simultaneous substitution of fractions for variables.
    pub fn substitute(&self, bindings: &BTreeMap<VarId, Frac>) -> Result<Frac> {
        let mut out = subst_poly(&self.num, bindings);
        for (f, e) in &self.den {
            let sf = subst_poly(f, bindings);
            if sf.num.is_zero() {
                return Err(Error::DenominatorVanishes);
            }
            // 1 / (n / prod g^k)^e = prod g^(k e) / n^e
            out = out.mul(&Frac::from_poly(sf.den_product().pow(*e)));
            out.divide_by_factor(&sf.num, *e)?;
        }
        Ok(out)
    }

    /// Substitutes rational numbers; `None` when a denominator factor vanishes or a variable is unbound.
    pub fn eval(&self, point: &HashMap<VarId, BigRational>) -> Option<BigRational> {
        let mut d = BigRational::one();
        for (f, e) in &self.den {
            d *= num_traits::pow(f.eval(point)?, *e as usize);
        }
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval(point)? / d)
    }

    pub fn jet_order(&self) -> Option<usize> {
        std::iter::once(self.num.jet_order())
            .chain(self.den.iter().map(|(f, _)| f.jet_order()))
            .flatten()
            .max()
    }
}

/// Product of the factor powers present in `target` beyond those in `have`.
fn missing(target: &[(Poly, u32)], have: &[(Poly, u32)]) -> Poly {
    let mut p = Poly::one();
    for (f, e) in target {
        let h = have.iter().find(|(g, _)| g == f).map_or(0, |x| x.1);
        if *e > h {
            p = p.mul(&f.pow(e - h));
        }
    }
    p
}

/// Substitutes into a polynomial, summing terms over the lcm of their denominators in one pass.
fn subst_poly(p: &Poly, bindings: &BTreeMap<VarId, Frac>) -> Frac {
    if !p.vars().iter().any(|v| bindings.contains_key(v)) {
        return Frac::from_poly(p.clone());
    }
    // distinct denominator factors across all bound values
    let mut factors: Vec<Poly> = Vec::new();
    let mut layout: BTreeMap<VarId, Vec<(usize, u32)>> = BTreeMap::new();
    for (v, f) in bindings {
        let mut entries = Vec::new();
        for (g, e) in &f.den {
            let idx = match factors.iter().position(|h| h == g) {
                Some(i) => i,
                None => {
                    factors.push(g.clone());
                    factors.len() - 1
                }
            };
            entries.push((idx, *e));
        }
        layout.insert(*v, entries);
    }
    let term_exps = |m: &super::monomial::Monomial| {
        let mut exps = vec![0u32; factors.len()];
        for &(v, e) in m.factors() {
            if let Some(entries) = layout.get(&v) {
                for &(i, k) in entries {
                    exps[i] += k * e;
                }
            }
        }
        exps
    };
    let mut max_exps = vec![0u32; factors.len()];
    for (m, _) in p.terms() {
        for (i, e) in term_exps(m).into_iter().enumerate() {
            max_exps[i] = max_exps[i].max(e);
        }
    }
    let mut num_powers: HashMap<(VarId, u32), Poly> = HashMap::new();
    let mut factor_powers: HashMap<(usize, u32), Poly> = HashMap::new();
    let mut groups: HashMap<Vec<u32>, Vec<(super::monomial::Monomial, BigRational, Poly)>> =
        HashMap::new();
    for (m, c) in p.terms() {
        let mut kept = Vec::new();
        let mut value = Poly::one();
        for &(v, e) in m.factors() {
            match bindings.get(&v) {
                Some(f) => {
                    let pw = num_powers.entry((v, e)).or_insert_with(|| f.num.pow(e));
                    value = value.mul(pw);
                }
                None => kept.push((v, e)),
            }
        }
        let mono = super::monomial::Monomial::from_pairs(kept);
        groups.entry(term_exps(m)).or_default().push((mono, c.clone(), value));
    }
    let mut num = Poly::zero();
    let mut keys: Vec<Vec<u32>> = groups.keys().cloned().collect();
    keys.sort();
    for key in keys {
        let mut group_sum = Poly::zero();
        for (mono, c, value) in &groups[&key] {
            group_sum = group_sum.add(&value.mul_term(mono, c));
        }
        let mut filler = Poly::one();
        for (i, &e) in key.iter().enumerate() {
            let gap = max_exps[i] - e;
            if gap > 0 {
                let pw = factor_powers.entry((i, gap)).or_insert_with(|| factors[i].pow(gap));
                filler = filler.mul(pw);
            }
        }
        num = num.add(&group_sum.mul(&filler));
    }
    let den = factors
        .into_iter()
        .zip(max_exps)
        .filter(|(_, e)| *e > 0)
        .collect();
    Frac { num, den }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u(k: usize) -> Poly {
        Poly::var(VarId::jet(1, k))
    }

    #[test]
    fn lcm_addition_keeps_shared_factors() {
        let d = &Poly::one() + &u(1).pow(2);
        let a = Frac::over(u(2), &d, 1).unwrap();
        let b = Frac::over(Poly::one(), &d, 2).unwrap();
        let s = a.add(&b);
        assert_eq!(s.den_factors().len(), 1);
        assert_eq!(s.den_factors()[0].1, 2);
        let back = s.to_ratexpr().unwrap();
        let expect = RatExpr::new(&(&u(2) * &d) + &Poly::one(), d.pow(2)).unwrap();
        assert_eq!(back, expect);
    }

    #[test]
    fn partial_matches_reduced_form() {
        let d = &Poly::one() + &u(1).pow(2);
        let e = RatExpr::new(&u(2) * &u(1), d.pow(3)).unwrap();
        let v = VarId::jet(1, 1);
        let lazy = Frac::from_ratexpr(&e).partial(v).to_ratexpr().unwrap();
        assert_eq!(lazy, e.partial(v));
    }

    #[test]
    fn substitution_into_denominator() {
        // 1/(u1_1 + u1_2) with u1_2 -> -u1_1 vanishes
        let e = Frac::over(Poly::one(), &(&u(1) + &u(2)), 1).unwrap();
        let mut b = BTreeMap::new();
        b.insert(VarId::jet(1, 2), Frac::from_poly(u(1).neg()));
        assert_eq!(e.substitute(&b), Err(Error::DenominatorVanishes));
        let mut b = BTreeMap::new();
        b.insert(VarId::jet(1, 2), Frac::over(Poly::one(), &u(1), 1).unwrap());
        let s = e.substitute(&b).unwrap().to_ratexpr().unwrap();
        let expect = RatExpr::new(u(1), &u(1).pow(2) + &Poly::one()).unwrap();
        assert_eq!(s, expect);
    }
}
