//! Deterministic text rendering.
//!
//! Terms appear in ascending graded-lex order, variables inside a term in the
//! fixed variable order, and a fraction prints as `(num)/(den)`.

use num_rational::BigRational;
use num_traits::{One, Signed};

use super::gcd::integer_content;
use super::monomial::Monomial;
use super::poly::Poly;
use super::ratexpr::RatExpr;

fn push_term(out: &mut String, first: bool, m: &Monomial, c: &BigRational) {
    let negative = c.is_negative();
    if first {
        if negative {
            out.push('-');
        }
    } else {
        out.push_str(if negative { " - " } else { " + " });
    }
    let a = c.abs();
    if m.is_one() {
        out.push_str(&a.to_string());
    } else if a.is_one() {
        out.push_str(&m.to_string());
    } else {
        out.push_str(&a.to_string());
        out.push('*');
        out.push_str(&m.to_string());
    }
}

pub fn render_poly(p: &Poly) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (m, c)) in p.terms().iter().enumerate() {
        push_term(&mut out, i == 0, m, c);
    }
    out
}

/// Canonical form of a rational function.
pub fn render_rat(e: &RatExpr) -> String {
    if e.den().is_one() {
        render_poly(e.num())
    } else {
        format!("({})/({})", render_poly(e.num()), render_poly(e.den()))
    }
}

/// Factored rendering `sign · content · monomial · (primitive rest)`, used for determinants.
pub fn render_factored(p: &Poly) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let (scale, prim) = p.integer_primitive();
    let negative = scale.is_negative();
    let mono = prim.monomial_content();
    let rest = prim.div_monomial(&mono).unwrap_or_else(|| prim.clone());
    debug_assert!(integer_content(&rest).is_one());
    let mut parts: Vec<String> = Vec::new();
    let mag = scale.abs();
    if !mag.is_one() {
        parts.push(mag.to_string());
    }
    if !mono.is_one() {
        parts.push(mono.to_string());
    }
    let rest_is_one = rest.is_one();
    if !rest_is_one {
        if rest.len() > 1 && (!parts.is_empty() || negative) {
            parts.push(format!("({})", render_poly(&rest)));
        } else {
            parts.push(render_poly(&rest));
        }
    }
    if parts.is_empty() {
        parts.push("1".to_string());
    }
    let body = parts.join("*");
    if negative {
        format!("-{body}")
    } else {
        body
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::var::VarId;

    fn u(k: usize) -> Poly {
        Poly::var(VarId::jet(1, k))
    }

    #[test]
    fn expanded_order() {
        let p = (&u(2) * &(&Poly::one() + &u(1).pow(2))).neg();
        assert_eq!(render_poly(&p), "-u1_2 - u1_1^2*u1_2");
        assert_eq!(render_factored(&p), "-u1_2*(1 + u1_1^2)");
    }

    #[test]
    fn factored_shapes() {
        assert_eq!(render_factored(&Poly::int(-6)), "-6");
        assert_eq!(render_factored(&u(1).scale(&crate::expr::poly::int(3))), "3*u1_1");
        let s = &Poly::one() + &u(1);
        assert_eq!(render_factored(&s.neg()), "-(1 + u1_1)");
        assert_eq!(render_factored(&s), "1 + u1_1");
        let half = crate::expr::poly::rat(1, 2);
        assert_eq!(render_poly(&s.scale(&half)), "1/2 + 1/2*u1_1");
    }
}
