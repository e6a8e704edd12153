use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::frac::Frac;
use super::gcd::gcd;
use super::poly::Poly;
use super::var::VarId;
use crate::error::{Error, Result};

/// Reduced rational function.
///
/// The denominator is an integral primitive polynomial with positive leading
/// coefficient, coprime to the numerator; zero is `0/1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatExpr {
    num: Poly,
    den: Poly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl RatExpr {
    pub fn zero() -> Self {
        RatExpr { num: Poly::zero(), den: Poly::one() }
    }

    pub fn one() -> Self {
        RatExpr { num: Poly::one(), den: Poly::one() }
    }

    pub fn int(n: i64) -> Self {
        RatExpr::from_poly(Poly::int(n))
    }

    pub fn rational(c: BigRational) -> Self {
        RatExpr::from_poly(Poly::constant(c))
    }

    pub fn var(v: VarId) -> Self {
        RatExpr::from_poly(Poly::var(v))
    }

    pub fn from_poly(p: Poly) -> Self {
        RatExpr { num: p, den: Poly::one() }
    }

    /// Normalizing constructor.
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalized(num, den))
    }

    fn normalized(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return RatExpr::zero();
        }
        if let Some(c) = den.constant_value() {
            return RatExpr { num: num.scale(&c.recip()), den: Poly::one() };
        }
        let g = gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (
                num.exact_divide(&g).expect("gcd divides numerator"),
                den.exact_divide(&g).expect("gcd divides denominator"),
            )
        };
        Self::with_coprime(num, den)
    }

    /// Builds from parts already known to be coprime; only scalars are normalized.
    pub(crate) fn with_coprime(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return RatExpr::zero();
        }
        let (c, den) = den.integer_primitive();
        let num = if c.is_one() { num } else { num.scale(&c.recip()) };
        RatExpr { num, den }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn into_parts(self) -> (Poly, Poly) {
        (self.num, self.den)
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_poly(&self) -> Option<&Poly> {
        if self.den.is_one() {
            Some(&self.num)
        } else {
            None
        }
    }

    pub fn constant_value(&self) -> Option<BigRational> {
        if self.den.is_one() {
            self.num.constant_value()
        } else {
            None
        }
    }

    pub fn vars(&self) -> BTreeSet<VarId> {
        let mut v = self.num.vars();
        v.extend(self.den.vars());
        v
    }

    pub fn contains_var(&self, v: VarId) -> bool {
        self.num.contains_var(v) || self.den.contains_var(v)
    }

    pub fn jet_order(&self) -> Option<usize> {
        match (self.num.jet_order(), self.den.jet_order()) {
            (Some(a), Some(b)) => Some(a.max(b)),
            (a, b) => a.or(b),
        }
    }

    pub fn neg(&self) -> RatExpr {
        RatExpr { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn scale(&self, c: &BigRational) -> RatExpr {
        if c.is_zero() {
            return RatExpr::zero();
        }
        RatExpr { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn add(&self, other: &RatExpr) -> RatExpr {
        self.add_signed(other, false)
    }

    pub fn sub(&self, other: &RatExpr) -> RatExpr {
        self.add_signed(other, true)
    }

    fn add_signed(&self, other: &RatExpr, negate: bool) -> RatExpr {
        let combine = |a: &Poly, b: &Poly| if negate { a.sub(b) } else { a.add(b) };
        if other.is_zero() {
            return self.clone();
        }
        if self.den.is_one() && other.den.is_one() {
            return RatExpr::from_poly(combine(&self.num, &other.num));
        }
        if self.den == other.den {
            return Self::normalized(combine(&self.num, &other.num), self.den.clone());
        }
        // a/d1 + b with d1 coprime to a stays coprime
        if other.den.is_one() {
            let n = combine(&self.num, &other.num.mul(&self.den));
            return Self::with_coprime(n, self.den.clone());
        }
        if self.den.is_one() {
            let n = combine(&self.num.mul(&other.den), &other.num);
            return Self::with_coprime(n, other.den.clone());
        }
        let g = gcd(&self.den, &other.den);
        if g.is_one() {
            let n = combine(&self.num.mul(&other.den), &other.num.mul(&self.den));
            return Self::with_coprime(n, self.den.mul(&other.den));
        }
        let d1 = self.den.exact_divide(&g).expect("gcd divides");
        let d2 = other.den.exact_divide(&g).expect("gcd divides");
        let n = combine(&self.num.mul(&d2), &other.num.mul(&d1));
        // only factors of g can cancel
        let h = gcd(&n, &g);
        if h.is_one() {
            return Self::with_coprime(n, d1.mul(&other.den));
        }
        let n = n.exact_divide(&h).expect("gcd divides");
        let g = g.exact_divide(&h).expect("gcd divides");
        Self::normalized(n, d1.mul(&d2).mul(&g))
    }

    pub fn mul(&self, other: &RatExpr) -> RatExpr {
        if self.is_zero() || other.is_zero() {
            return RatExpr::zero();
        }
        if self.den.is_one() && other.den.is_one() {
            return RatExpr::from_poly(self.num.mul(&other.num));
        }
        let g1 = if other.den.is_one() { Poly::one() } else { gcd(&self.num, &other.den) };
        let g2 = if self.den.is_one() { Poly::one() } else { gcd(&other.num, &self.den) };
        let n1 = div_by(&self.num, &g1);
        let d2 = div_by(&other.den, &g1);
        let n2 = div_by(&other.num, &g2);
        let d1 = div_by(&self.den, &g2);
        Self::with_coprime(n1.mul(&n2), d1.mul(&d2))
    }

    pub fn recip(&self) -> Result<RatExpr> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (c, n) = self.num.integer_primitive();
        Ok(RatExpr { num: self.den.scale(&c.recip()), den: n })
    }

    pub fn div(&self, other: &RatExpr) -> Result<RatExpr> {
        Ok(self.mul(&other.recip()?))
    }

    pub fn pow(&self, e: u32) -> RatExpr {
        RatExpr { num: self.num.pow(e), den: self.den.pow(e) }.renormalize_scalars()
    }

    fn renormalize_scalars(self) -> RatExpr {
        Self::with_coprime(self.num, self.den)
    }

    pub fn powi(&self, e: i32) -> Result<RatExpr> {
        if e >= 0 {
            Ok(self.pow(e as u32))
        } else {
            Ok(self.recip()?.pow(e.unsigned_abs()))
        }
    }

    /// Explicit partial derivative, treating every variable as independent.
    pub fn partial(&self, v: VarId) -> RatExpr {
        let dn = self.num.partial(v);
        if self.den.is_one() {
            return RatExpr::from_poly(dn);
        }
        let dd = self.den.partial(v);
        if dd.is_zero() {
            return Self::normalized(dn, self.den.clone());
        }
        let n = dn.mul(&self.den).sub(&self.num.mul(&dd));
        Self::normalized(n, self.den.pow(2))
    }

    /// Simultaneous substitution followed by normalization.
    pub fn substitute(&self, bindings: &BTreeMap<VarId, RatExpr>) -> Result<RatExpr> {
        let frac_bindings: BTreeMap<VarId, Frac> =
            bindings.iter().map(|(v, e)| (*v, Frac::from_ratexpr(e))).collect();
        Frac::from_ratexpr(self).substitute(&frac_bindings)?.to_ratexpr()
    }

    /// Exact evaluation; `None` if a variable is unbound or the denominator vanishes.
    pub fn eval(&self, point: &HashMap<VarId, BigRational>) -> Option<BigRational> {
        let d = self.den.eval(point)?;
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval(point)? / d)
    }

    pub fn canonical_string(&self) -> String {
        super::render::render_rat(self)
    }
}

fn div_by(a: &Poly, g: &Poly) -> Poly {
    if g.is_one() {
        a.clone()
    } else {
        a.exact_divide(g).expect("gcd divides")
    }
}

/// Exact field operation on normalized rational functions.
pub fn arith(op: ArithOp, a: &RatExpr, b: &RatExpr) -> Result<RatExpr> {
    Ok(match op {
        ArithOp::Add => a.add(b),
        ArithOp::Sub => a.sub(b),
        ArithOp::Mul => a.mul(b),
        ArithOp::Div => a.div(b)?,
    })
}

pub fn canonical_string(e: &RatExpr) -> String {
    e.canonical_string()
}

impl Default for RatExpr {
    fn default() -> Self {
        RatExpr::zero()
    }
}

impl From<Poly> for RatExpr {
    fn from(p: Poly) -> Self {
        RatExpr::from_poly(p)
    }
}

impl From<VarId> for RatExpr {
    fn from(v: VarId) -> Self {
        RatExpr::var(v)
    }
}

impl From<i64> for RatExpr {
    fn from(n: i64) -> Self {
        RatExpr::int(n)
    }
}

impl Add for &RatExpr {
    type Output = RatExpr;
    fn add(self, rhs: &RatExpr) -> RatExpr {
        RatExpr::add(self, rhs)
    }
}

impl Sub for &RatExpr {
    type Output = RatExpr;
    fn sub(self, rhs: &RatExpr) -> RatExpr {
        RatExpr::sub(self, rhs)
    }
}

impl Mul for &RatExpr {
    type Output = RatExpr;
    fn mul(self, rhs: &RatExpr) -> RatExpr {
        RatExpr::mul(self, rhs)
    }
}

impl Neg for &RatExpr {
    type Output = RatExpr;
    fn neg(self) -> RatExpr {
        RatExpr::neg(self)
    }
}

impl fmt::Display for RatExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical_string())
    }
}

impl fmt::Debug for RatExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::poly::rat;

    fn u(k: usize) -> RatExpr {
        RatExpr::var(VarId::jet(1, k))
    }

    #[test]
    fn spec_arith_examples() {
        let one = RatExpr::one();
        let p = arith(ArithOp::Mul, &(&one + &u(1)), &(&one - &u(1))).unwrap();
        assert_eq!(p.canonical_string(), "1 - u1_1^2");
        let e = &one + &u(1).pow(2);
        let q = arith(ArithOp::Div, &(&u(2) * &e), &u(2)).unwrap();
        assert_eq!(q, e);
        assert_eq!(arith(ArithOp::Div, &one, &RatExpr::zero()), Err(Error::DivisionByZero));
    }

    #[test]
    fn normalization() {
        let a = RatExpr::new(Poly::int(2), Poly::int(-4)).unwrap();
        assert_eq!(a, RatExpr::rational(rat(-1, 2)));
        let x = RatExpr::var(VarId::Independent);
        let b = RatExpr::new(
            (&x * &x).as_poly().unwrap().sub(&Poly::one()),
            (&x.scale(&rat(-3, 1)) - &RatExpr::int(3)).as_poly().unwrap().clone(),
        )
        .unwrap();
        // (x^2-1)/(-3x-3) = (1 - x)/3
        assert_eq!(b.canonical_string(), "1/3 - 1/3*x");
        assert!(b.den().is_one());
        let c = x.recip().unwrap().add(&(&x + &RatExpr::one()).recip().unwrap());
        assert_eq!(c.canonical_string(), "(1 + 2*x)/(x + x^2)");
    }

    #[test]
    fn partial_of_quotient() {
        let x = RatExpr::var(VarId::Independent);
        let e = x.recip().unwrap();
        assert_eq!(e.partial(VarId::Independent), x.pow(2).recip().unwrap().neg());
    }

    #[test]
    fn substitution() {
        let f = RatExpr::var(VarId::param("f").unwrap());
        let e = &u(2) - &f;
        let mut b = BTreeMap::new();
        b.insert(VarId::jet(1, 2), f.clone());
        assert!(e.substitute(&b).unwrap().is_zero());
        let g = u(1).recip().unwrap();
        let mut b = BTreeMap::new();
        b.insert(VarId::jet(1, 1), RatExpr::zero());
        assert_eq!(g.substitute(&b), Err(Error::DenominatorVanishes));
    }
}
