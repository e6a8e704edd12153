//! Differential atoms: formal symbols such as `e^(-2x)` or `arctan(u1_1)` known only
//! through their partial derivatives and an optional algebraic relation.

use std::collections::BTreeMap;

use super::frac::Frac;
use super::poly::Poly;
use super::ratexpr::{ArithOp, RatExpr};
use super::var::{Name, VarId};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct AtomDef {
    pub name: Name,
    /// Partial derivative of the atom with respect to each variable it depends on.
    pub rules: BTreeMap<VarId, RatExpr>,
    /// Relation `a^d + (lower powers) = 0`, monic in the atom.
    pub relation: Option<Poly>,
}

impl AtomDef {
    pub fn new(name: &str) -> Result<Self> {
        Ok(AtomDef { name: Name::new(name)?, rules: BTreeMap::new(), relation: None })
    }

    pub fn with_rule(mut self, v: VarId, d: RatExpr) -> Self {
        self.rules.insert(v, d);
        self
    }

    /// Attaches a relation; it is rescaled to be monic in the atom.
    pub fn with_relation(mut self, rel: Poly) -> Result<Self> {
        let a = self.var();
        let invalid = |reason: &str| Error::InvalidAtom {
            name: self.name.to_string(),
            reason: reason.to_string(),
        };
        let d = rel.degree_in(a);
        if d == 0 {
            return Err(invalid("relation does not involve the atom"));
        }
        let coeffs = rel.coefficients_in(a);
        let lead = coeffs[d as usize]
            .constant_value()
            .ok_or_else(|| invalid("relation is not monic in the atom"))?;
        self.relation = Some(rel.scale(&lead.recip()));
        Ok(self)
    }

    pub fn var(&self) -> VarId {
        VarId::Atom(self.name)
    }

    pub fn rule(&self, v: VarId) -> Option<&RatExpr> {
        self.rules.get(&v)
    }
}

/// Ordered set of atom definitions; an atom's rules may mention itself and earlier atoms only.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct AtomTable {
    atoms: Vec<AtomDef>,
}

impl AtomTable {
    pub fn new() -> Self {
        AtomTable { atoms: Vec::new() }
    }

    pub fn from_defs(defs: Vec<AtomDef>) -> Result<Self> {
        let mut t = AtomTable::new();
        for d in defs {
            t.add(d)?;
        }
        Ok(t)
    }

    pub fn add(&mut self, def: AtomDef) -> Result<()> {
        let invalid = |reason: String| Error::InvalidAtom { name: def.name.to_string(), reason };
        if self.atoms.iter().any(|a| a.name == def.name) {
            return Err(invalid("declared twice".into()));
        }
        for (v, rule) in &def.rules {
            if v.is_atom() {
                return Err(invalid(format!("derivative with respect to atom {v}")));
            }
            for w in rule.vars() {
                if let VarId::Atom(n) = w {
                    if n != def.name && !self.atoms.iter().any(|a| a.name == n) {
                        return Err(invalid(format!("rule mentions undeclared or later atom {n}")));
                    }
                }
            }
        }
        if let Some(rel) = &def.relation {
            for w in rel.vars() {
                if let VarId::Atom(n) = w {
                    if n != def.name && !self.atoms.iter().any(|a| a.name == n) {
                        return Err(invalid(format!("relation mentions undeclared atom {n}")));
                    }
                }
            }
        }
        self.atoms.push(def);
        Ok(())
    }

    /// Union by name; identical definitions are shared, conflicting ones rejected.
    pub fn merge(&self, other: &AtomTable) -> Result<AtomTable> {
        let mut out = self.clone();
        for def in &other.atoms {
            match out.get(def.name.as_str()) {
                Some(existing) if existing == def => {}
                Some(_) => {
                    return Err(Error::InvalidAtom {
                        name: def.name.to_string(),
                        reason: "conflicting definitions".into(),
                    })
                }
                None => out.add(def.clone())?,
            }
        }
        Ok(out)
    }

    pub fn get(&self, name: &str) -> Option<&AtomDef> {
        self.atoms.iter().find(|a| a.name.as_str() == name)
    }

    fn by_var(&self, v: VarId) -> Option<&AtomDef> {
        match v {
            VarId::Atom(n) => self.atoms.iter().find(|a| a.name == n),
            _ => None,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = &AtomDef> {
        self.atoms.iter()
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Partial derivative with the chain rule through atoms.
    pub fn differentiate(&self, e: &RatExpr, v: VarId) -> RatExpr {
        let mut out = e.partial(v);
        if v.is_atom() {
            return self.reduce(&out);
        }
        for a in &self.atoms {
            let av = a.var();
            if let Some(rule) = a.rule(v) {
                if e.contains_var(av) {
                    out = out.add(&e.partial(av).mul(rule));
                }
            }
        }
        self.reduce(&out)
    }

    /// Applies the derivation `Σ c_v ∂/∂v` over base variables, extended to atoms.
    pub fn derive(&self, e: &RatExpr, coeffs: &[(VarId, RatExpr)]) -> RatExpr {
        let mut out = RatExpr::zero();
        for (v, c) in coeffs {
            if c.is_zero() || !e.contains_var(*v) {
                continue;
            }
            out = out.add(&e.partial(*v).mul(c));
        }
        for a in &self.atoms {
            let av = a.var();
            if !e.contains_var(av) {
                continue;
            }
            let da = self.atom_derivation(a, coeffs);
            if !da.is_zero() {
                out = out.add(&e.partial(av).mul(&da));
            }
        }
        self.reduce(&out)
    }

    /// Image of an atom under the derivation `Σ c_v ∂/∂v`.
    fn atom_derivation(&self, a: &AtomDef, coeffs: &[(VarId, RatExpr)]) -> RatExpr {
        let mut da = RatExpr::zero();
        for (v, c) in coeffs {
            if let Some(rule) = a.rule(*v) {
                da = da.add(&rule.mul(c));
            }
        }
        da
    }

    /// Lazy-fraction version of [`AtomTable::derive`], without gcd normalization.
    pub fn derive_frac(&self, e: &Frac, coeffs: &[(VarId, Frac)]) -> Frac {
        let mut out = Frac::zero();
        for (v, c) in coeffs {
            if c.is_zero() || !frac_contains(e, *v) {
                continue;
            }
            out = out.add(&e.partial(*v).mul(c));
        }
        for a in &self.atoms {
            let av = a.var();
            if !frac_contains(e, av) {
                continue;
            }
            let mut da = Frac::zero();
            for (v, c) in coeffs {
                if let Some(rule) = a.rule(*v) {
                    da = da.add(&Frac::from_ratexpr(rule).mul(c));
                }
            }
            if !da.is_zero() {
                out = out.add(&e.partial(av).mul(&da));
            }
        }
        out
    }

    /// Rewrites every atom power at or above its relation degree.
    pub fn reduce_poly(&self, p: &Poly) -> Poly {
        let mut p = p.clone();
        for a in &self.atoms {
            let Some(rel) = &a.relation else { continue };
            let av = a.var();
            let d = rel.degree_in(av) as usize;
            if (p.degree_in(av) as usize) < d {
                continue;
            }
            let r = rel.coefficients_in(av);
            let mut c = p.coefficients_in(av);
            for k in (d..c.len()).rev() {
                let top = std::mem::take(&mut c[k]);
                if top.is_zero() {
                    continue;
                }
                for (j, rj) in r.iter().enumerate().take(d) {
                    c[k - d + j] = c[k - d + j].sub(&top.mul(rj));
                }
            }
            p = Poly::from_coefficients(av, &c);
        }
        p
    }

    /// Normal form modulo the active relations.
    pub fn reduce(&self, e: &RatExpr) -> RatExpr {
        if !self.atoms.iter().any(|a| a.relation.is_some() && e.contains_var(a.var())) {
            return e.clone();
        }
        let n = self.reduce_poly(e.num());
        let d = self.reduce_poly(e.den());
        if d.is_zero() {
            // a denominator that reduces to zero cannot come from a valid expression
            return e.clone();
        }
        RatExpr::new(n, d).unwrap_or_else(|_| e.clone())
    }

    pub fn is_zero(&self, e: &RatExpr) -> bool {
        self.reduce_poly(e.num()).is_zero()
    }

    pub fn is_zero_frac(&self, f: &Frac) -> bool {
        self.reduce_poly(f.num()).is_zero()
    }

    /// Field operation followed by relation reduction.
    pub fn arith(&self, op: ArithOp, a: &RatExpr, b: &RatExpr) -> Result<RatExpr> {
        Ok(self.reduce(&super::ratexpr::arith(op, a, b)?))
    }

    /// True if `v` is a declared atom.
    pub fn knows(&self, v: VarId) -> bool {
        self.by_var(v).is_some()
    }
}

fn frac_contains(f: &Frac, v: VarId) -> bool {
    f.num().contains_var(v) || f.den_factors().iter().any(|(p, _)| p.contains_var(v))
}

/// Atom `w` standing for `e^(kx)`: `∂w/∂x = k·w`.
pub fn exp_atom(name: &str, k: i64) -> Result<AtomDef> {
    let def = AtomDef::new(name)?;
    let w = RatExpr::var(def.var());
    Ok(def.with_rule(VarId::Independent, w.scale(&super::poly::int(k))))
}

/// Atom standing for `arctan(v)`: derivative `1/(1+v^2)`.
pub fn arctan_atom(name: &str, v: VarId) -> Result<AtomDef> {
    let def = AtomDef::new(name)?;
    let one = RatExpr::one();
    let d = one.add(&RatExpr::var(v).pow(2)).recip()?;
    Ok(def.with_rule(v, d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::poly::int;

    #[test]
    fn spec_differentiate_examples() {
        let t = AtomTable::from_defs(vec![
            exp_atom("w", -2).unwrap(),
            arctan_atom("a", VarId::jet(1, 1)).unwrap(),
        ])
        .unwrap();
        let w = RatExpr::var(VarId::atom("w").unwrap());
        assert_eq!(t.differentiate(&w, VarId::Independent), w.scale(&int(-2)));
        let a = RatExpr::var(VarId::atom("a").unwrap());
        let d = t.differentiate(&a, VarId::jet(1, 1));
        assert_eq!(d.canonical_string(), "(1)/(1 + u1_1^2)");
        let u1 = RatExpr::var(VarId::jet(1, 1));
        assert_eq!(t.differentiate(&u1.pow(2), VarId::jet(1, 1)), u1.scale(&int(2)));
    }

    #[test]
    fn square_root_relation() {
        let u1 = VarId::jet(1, 1);
        let s = AtomDef::new("s").unwrap();
        let sv = Poly::var(s.var());
        let rel = &(&sv.pow(2) - &Poly::one()) - &Poly::var(u1).pow(2);
        let s = s
            .with_rule(u1, RatExpr::new(Poly::var(u1), sv.clone()).unwrap())
            .with_relation(rel)
            .unwrap();
        let t = AtomTable::from_defs(vec![s]).unwrap();
        let e = RatExpr::from_poly(sv.pow(3));
        assert_eq!(t.reduce(&e).canonical_string(), "s + u1_1^2*s");
        // d(s^2)/du1_1 = 2 u1_1
        let sq = RatExpr::from_poly(sv.pow(2));
        assert_eq!(t.differentiate(&sq, u1), RatExpr::var(u1).scale(&int(2)));
    }

    #[test]
    fn rejects_forward_references() {
        let a = AtomDef::new("a")
            .unwrap()
            .with_rule(VarId::Independent, RatExpr::var(VarId::atom("b").unwrap()));
        assert!(AtomTable::from_defs(vec![a]).is_err());
    }
}
