use std::cmp::Ordering;
use std::fmt;

use super::var::VarId;

/// Power product of variables, stored as `(variable, exponent)` pairs sorted by variable.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    factors: Vec<(VarId, u32)>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial { factors: Vec::new() }
    }

    pub fn var(v: VarId) -> Self {
        Monomial { factors: vec![(v, 1)] }
    }

    pub fn power(v: VarId, e: u32) -> Self {
        if e == 0 {
            Monomial::one()
        } else {
            Monomial { factors: vec![(v, e)] }
        }
    }

    /// Builds a monomial from arbitrary pairs, merging repeats and dropping zero exponents.
    pub fn from_pairs<I: IntoIterator<Item = (VarId, u32)>>(pairs: I) -> Self {
        let mut factors: Vec<(VarId, u32)> = pairs.into_iter().filter(|p| p.1 > 0).collect();
        factors.sort_by_key(|f| f.0);
        let mut merged: Vec<(VarId, u32)> = Vec::with_capacity(factors.len());
        for (v, e) in factors {
            match merged.last_mut() {
                Some(last) if last.0 == v => last.1 += e,
                _ => merged.push((v, e)),
            }
        }
        Monomial { factors: merged }
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn factors(&self) -> &[(VarId, u32)] {
        &self.factors
    }

    pub fn degree(&self) -> u32 {
        self.factors.iter().map(|f| f.1).sum()
    }

    pub fn exponent(&self, v: VarId) -> u32 {
        match self.factors.binary_search_by(|f| f.0.cmp(&v)) {
            Ok(i) => self.factors[i].1,
            Err(_) => 0,
        }
    }

    pub fn vars(&self) -> impl Iterator<Item = VarId> + '_ {
        self.factors.iter().map(|f| f.0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.factors, &other.factors);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial { factors: out }
    }

    pub fn pow(&self, e: u32) -> Monomial {
        if e == 0 {
            return Monomial::one();
        }
        Monomial { factors: self.factors.iter().map(|&(v, k)| (v, k * e)).collect() }
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::with_capacity(self.factors.len());
        let mut j = 0;
        let b = &other.factors;
        for &(v, e) in &self.factors {
            if j < b.len() && b[j].0 < v {
                return None;
            }
            if j < b.len() && b[j].0 == v {
                match e.cmp(&b[j].1) {
                    Ordering::Less => return None,
                    Ordering::Equal => {}
                    Ordering::Greater => out.push((v, e - b[j].1)),
                }
                j += 1;
            } else {
                out.push((v, e));
            }
        }
        if j < b.len() {
            return None;
        }
        Some(Monomial { factors: out })
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.factors.iter().all(|&(v, e)| other.exponent(v) >= e)
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let mut out = Vec::new();
        for &(v, e) in &self.factors {
            let f = other.exponent(v);
            if f > 0 {
                out.push((v, e.min(f)));
            }
        }
        Monomial { factors: out }
    }

    /// Removes `v` entirely, returning its exponent and the rest.
    pub fn split_off(&self, v: VarId) -> (u32, Monomial) {
        let mut rest = Vec::with_capacity(self.factors.len());
        let mut e = 0;
        for &(w, k) in &self.factors {
            if w == v {
                e = k;
            } else {
                rest.push((w, k));
            }
        }
        (e, Monomial { factors: rest })
    }

    /// Lowers the exponent of `v` by one, returning the old exponent (0 if absent).
    pub fn lower(&self, v: VarId) -> Option<(u32, Monomial)> {
        let i = self.factors.binary_search_by(|f| f.0.cmp(&v)).ok()?;
        let e = self.factors[i].1;
        let mut factors = self.factors.clone();
        if e == 1 {
            factors.remove(i);
        } else {
            factors[i].1 -= 1;
        }
        Some((e, Monomial { factors }))
    }
}

impl Ord for Monomial {
    /// Graded lexicographic: total degree first, then the smallest variable is most significant.
    fn cmp(&self, other: &Self) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            o => return o,
        }
        for (a, b) in self.factors.iter().zip(other.factors.iter()) {
            if a.0 != b.0 {
                // the monomial containing the smaller variable has the larger exponent there
                return if a.0 < b.0 { Ordering::Greater } else { Ordering::Less };
            }
            match a.1.cmp(&b.1) {
                Ordering::Equal => {}
                o => return o,
            }
        }
        self.factors.len().cmp(&other.factors.len())
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("1");
        }
        for (i, (v, e)) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> VarId {
        VarId::Independent
    }
    fn u(k: usize) -> VarId {
        VarId::jet(1, k)
    }

    #[test]
    fn graded_lex() {
        let one = Monomial::one();
        let a = Monomial::var(u(1));
        let b = Monomial::var(u(2));
        let a2 = Monomial::power(u(1), 2);
        let ab = a.mul(&b);
        assert!(one < a);
        assert!(b < a, "u1_1 is the more significant variable");
        assert!(a < a2);
        assert!(ab < a2);
        assert!(Monomial::var(x()) > a);
    }

    #[test]
    fn division_and_gcd() {
        let m = Monomial::from_pairs([(u(1), 2), (u(2), 1), (u(1), 1)]);
        assert_eq!(m.exponent(u(1)), 3);
        let d = Monomial::from_pairs([(u(1), 1), (u(2), 1)]);
        assert_eq!(m.div(&d), Some(Monomial::power(u(1), 2)));
        assert_eq!(d.div(&m), None);
        assert_eq!(m.gcd(&Monomial::power(u(2), 4)), Monomial::var(u(2)));
        assert_eq!(m.to_string(), "u1_1^3*u1_2");
    }
}
