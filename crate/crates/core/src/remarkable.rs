//! Prolongation matrices, generic rank, Lie determinants and maximal minors, and the
//! certificates built on them; differential and relative invariant checks.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rayon::prelude::*;

use crate::catalog::AlgebraSpec;
use crate::error::{Error, Result};
use crate::expr::{content_in, gcd, Frac, Poly, RatExpr, VarId};
use crate::integrals::{check_symmetries, NormalFormODE};
use crate::jetspace::{prolong, JetContext, ProlongedField};
use crate::linear::{bareiss, clear_row_denominators, det_poly};

/// `M_{s^(r)}`: one row per generator, columns `x`, all `u^i_0`, all `u^i_1`, ..., all `u^i_r`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProlMatrix {
    pub m: usize,
    pub order: usize,
    pub rows: Vec<Vec<RatExpr>>,
}

impl ProlMatrix {
    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        1 + self.m * (self.order + 1)
    }

    pub fn is_square(&self) -> bool {
        self.nrows() == self.ncols()
    }

    /// Polynomial rows after clearing each row's denominators (rank and minor zero sets are
    /// unchanged away from the cleared denominators).
    pub fn poly_rows(&self) -> Vec<Vec<Poly>> {
        clear_row_denominators(&self.rows).0
    }

    /// Label of column `j`: `x`, `u1`, `u2`, `u1_1`, ...
    pub fn column_label(&self, j: usize) -> String {
        if j == 0 {
            return "x".into();
        }
        let (k, i) = ((j - 1) / self.m, (j - 1) % self.m);
        VarId::jet(i + 1, k).to_string()
    }

    /// Matrix with `bindings` substituted into every entry.
    pub fn substitute(&self, bindings: &BTreeMap<VarId, RatExpr>) -> Result<ProlMatrix> {
        let rows = self
            .rows
            .iter()
            .map(|r| r.iter().map(|e| e.substitute(bindings)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(ProlMatrix { m: self.m, order: self.order, rows })
    }
}

impl fmt::Display for ProlMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|e| e.canonical_string()).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

pub fn prolonged_generators(alg: &AlgebraSpec, r: usize) -> Result<Vec<ProlongedField>> {
    let ctx = alg.context(r)?;
    alg.generators.par_iter().map(|g| prolong(g, r, &ctx)).collect()
}

pub fn prolongation_matrix(alg: &AlgebraSpec, r: usize) -> Result<ProlMatrix> {
    let rows = prolonged_generators(alg, r)?.iter().map(|p| p.row()).collect();
    Ok(ProlMatrix { m: alg.m, order: r, rows })
}

/// A minor: row and column index sets (ascending) and its value.
#[derive(Clone, Debug, PartialEq)]
pub struct Minor {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub value: Poly,
}

fn submatrix(a: &[Vec<Poly>], rows: &[usize], cols: &[usize]) -> Vec<Vec<Poly>> {
    rows.iter().map(|&i| cols.iter().map(|&j| a[i][j].clone()).collect()).collect()
}

#[derive(Clone, Debug)]
pub struct RankReport {
    pub generic_rank: usize,
    /// Nonzero maximal minor certifying the rank (absent for rank 0).
    pub witness: Option<Minor>,
    /// Some pivot depended on a symbolic parameter: the rank holds for generic values only.
    pub parameter_dependent: bool,
}

/// Rank over the field of rational functions, by fraction-free elimination.
pub fn generic_rank(mx: &ProlMatrix) -> RankReport {
    rank_of_rows(&mx.poly_rows())
}

fn rank_of_rows(a: &[Vec<Poly>]) -> RankReport {
    let e = bareiss(a.to_vec());
    let witness = (e.rank > 0).then(|| {
        let mut rows = e.pivot_rows.clone();
        let mut cols = e.pivot_cols.clone();
        rows.sort_unstable();
        cols.sort_unstable();
        let value = det_poly(&submatrix(a, &rows, &cols));
        Minor { rows, cols, value }
    });
    RankReport { generic_rank: e.rank, witness, parameter_dependent: e.parameter_pivot }
}

/// Determinant with its rational content split off: `value = content * primitive`.
#[derive(Clone, Debug, PartialEq)]
pub struct LieDeterminant {
    pub value: Poly,
    pub content: BigRational,
    pub primitive: Poly,
}

pub fn lie_determinant(mx: &ProlMatrix) -> Result<LieDeterminant> {
    if !mx.is_square() || mx.nrows() != mx.rows.first().map_or(0, |r| r.len()) {
        return Err(Error::NotSquare { rows: mx.nrows(), cols: mx.ncols() });
    }
    let (p, scales) = clear_row_denominators(&mx.rows);
    let mut value = det_poly(&p);
    let s = scales.iter().fold(Poly::one(), |acc, l| acc.mul(l));
    if !s.is_one() {
        value = value.exact_divide(&s).map_err(|_| Error::InvalidArgument(
            "determinant of a matrix with rational entries is not polynomial".into(),
        ))?;
    }
    let (content, primitive) = if value.is_zero() {
        (BigRational::zero(), Poly::zero())
    } else {
        value.integer_primitive()
    };
    Ok(LieDeterminant { value, content, primitive })
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        idx[i] += 1;
        for j in (i + 1)..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Worker count for minor evaluation, from `JETLIE_MINOR_PARALLELISM` if set.
pub fn minor_parallelism() -> usize {
    std::env::var("JETLIE_MINOR_PARALLELISM")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|n| *n >= 1)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

/// All `size x size` minors, ordered lexicographically by (rows, cols).
pub fn maximal_minors(mx: &ProlMatrix, size: usize) -> Vec<Minor> {
    minors_of(&mx.poly_rows(), size)
}

fn minors_of(a: &[Vec<Poly>], size: usize) -> Vec<Minor> {
    let nr = a.len();
    let nc = a.first().map_or(0, |r| r.len());
    if size == 0 || size > nr.min(nc) {
        return Vec::new();
    }
    let mut jobs = Vec::new();
    for rows in combinations(nr, size) {
        for cols in combinations(nc, size) {
            jobs.push((rows.clone(), cols));
        }
    }
    let work = || {
        jobs.par_iter()
            .map(|(rows, cols)| Minor {
                rows: rows.clone(),
                cols: cols.clone(),
                value: det_poly(&submatrix(a, rows, cols)),
            })
            .collect::<Vec<_>>()
    };
    match rayon::ThreadPoolBuilder::new().num_threads(minor_parallelism()).build() {
        Ok(pool) => pool.install(work),
        Err(_) => work(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CertificateKind {
    Hypersurface,
    System,
    InvariantDerivative,
}

impl CertificateKind {
    pub fn as_str(self) -> &'static str {
        match self {
            CertificateKind::Hypersurface => "hypersurface",
            CertificateKind::System => "system",
            CertificateKind::InvariantDerivative => "invariant-derivative",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    Certified,
    CertifiedWithResidualReport,
    Failed(Vec<String>),
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Certified => "Certified",
            Verdict::CertifiedWithResidualReport => "CertifiedWithResidualReport",
            Verdict::Failed(_) => "Failed",
        }
    }

    pub fn is_failed(&self) -> bool {
        matches!(self, Verdict::Failed(_))
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Failed(why) => write!(f, "Failed({})", why.join("; ")),
            v => f.write_str(v.name()),
        }
    }
}

/// A factor left over after dividing out the candidate, with its top jet order.
#[derive(Clone, Debug, PartialEq)]
pub struct Residual {
    pub factor: Poly,
    pub order: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct Certificate {
    pub kind: CertificateKind,
    pub candidate: Vec<RatExpr>,
    pub generic_rank: usize,
    /// Rank of the lower-order matrix, where the certificate uses one.
    pub lower_rank: Option<usize>,
    pub minor_gcd: Option<Poly>,
    pub minors: Vec<Minor>,
    pub residuals: Vec<Residual>,
    /// Certified equation, when the certificate produces one.
    pub equation: Option<RatExpr>,
    /// Generators failing a per-generator check (tangency or annihilation).
    pub offending: Vec<usize>,
    pub notes: Vec<String>,
    pub verdict: Verdict,
}

impl Certificate {
    fn new(kind: CertificateKind, candidate: Vec<RatExpr>) -> Self {
        Certificate {
            kind,
            candidate,
            generic_rank: 0,
            lower_rank: None,
            minor_gcd: None,
            minors: Vec::new(),
            residuals: Vec::new(),
            equation: None,
            offending: Vec::new(),
            notes: Vec::new(),
            verdict: Verdict::Certified,
        }
    }
}

/// True when `p` is a positive constant plus terms that are positive multiples of even
/// powers in every non-parameter variable; such a polynomial has no real zeros.
pub fn positive_by_inspection(p: &Poly) -> bool {
    let (_, prim) = p.integer_primitive();
    prim.terms().iter().any(|(m, _)| m.is_one())
        && prim.terms().iter().all(|(m, c)| {
            c.is_positive() && m.factors().iter().all(|(v, e)| !v.is_parameter() && e % 2 == 0)
        })
}

fn order_of(p: &Poly) -> Option<usize> {
    p.jet_order()
}

/// Part of `g` that involves `v`: `g` divided by its content with respect to `v`.
fn part_involving(g: &Poly, v: VarId) -> Poly {
    if !g.contains_var(v) {
        return Poly::one();
    }
    let c = content_in(g, v);
    g.exact_divide(&c).expect("content divides")
}

/// Uniqueness certificate for a scalar hypersurface `E = 0` of order `r`.
pub fn certify_hypersurface(alg: &AlgebraSpec, r: usize, e: &Poly) -> Result<Certificate> {
    if alg.m != 1 {
        return Err(Error::WrongArity { expected: "1".into(), got: alg.m });
    }
    let top = VarId::jet(1, r);
    if !e.contains_var(top) || order_of(e) != Some(r) {
        return Err(Error::OrderMismatch(format!("candidate must have jet order exactly {r}")));
    }
    let mut cert = Certificate::new(CertificateKind::Hypersurface, vec![RatExpr::from_poly(e.clone())]);
    let mx = prolongation_matrix(alg, r)?;
    let a = mx.poly_rows();
    let dim = mx.ncols();
    let rank = rank_of_rows(&a);
    cert.generic_rank = rank.generic_rank;
    if rank.parameter_dependent {
        cert.notes.push("rank holds for generic parameter values".into());
    }
    let mut failures = Vec::new();
    if rank.generic_rank != dim {
        failures.push(format!("generic rank {} differs from dim J^{r} = {dim}", rank.generic_rank));
    }
    let minors = if rank.generic_rank == dim { minors_of(&a, dim) } else { Vec::new() };
    let g = gcd_of(&minors);
    // factors of order r in the gcd carry every candidate hypersurface of this order
    let g_top = part_involving(&g, top);
    if rank.generic_rank == dim && (g_top.is_constant() || positive_by_inspection(&g_top)) {
        failures.push(format!(
            "rank never drops on a real hypersurface of order {r} (top-order part of the minor gcd: {})",
            if g_top.is_constant() { "constant".to_string() } else { g_top.to_string() }
        ));
    }
    let (_, e_prim) = e.integer_primitive();
    let undivided: Vec<usize> =
        minors.iter().enumerate().filter(|(_, mi)| !e_prim.divides(&mi.value)).map(|(i, _)| i).collect();
    if !undivided.is_empty() {
        failures.push(format!("{} of {} maximal minors are not divisible by the candidate", undivided.len(), minors.len()));
    } else if !minors.is_empty() {
        // strip every power of E from the gcd and inspect what is left
        let mut rest = g.clone();
        while !rest.is_zero() && e_prim.divides(&rest) {
            rest = rest.exact_divide(&e_prim)?;
        }
        let (_, rest_prim) = if rest.is_zero() { (BigRational::zero(), rest.clone()) } else { rest.integer_primitive() };
        let high = part_involving(&rest_prim, top);
        if !high.is_constant() {
            cert.residuals.push(Residual { order: order_of(&high), factor: high.clone() });
        }
        let low = rest_prim.exact_divide(&high)?;
        if !low.is_constant() {
            cert.residuals.push(Residual { order: order_of(&low), factor: low });
        }
    }
    cert.minor_gcd = Some(g);
    cert.minors = minors;
    cert.verdict = if !failures.is_empty() {
        Verdict::Failed(failures)
    } else if cert.residuals.iter().any(|res| res.order == Some(r)) {
        Verdict::CertifiedWithResidualReport
    } else {
        Verdict::Certified
    };
    Ok(cert)
}

fn gcd_of(minors: &[Minor]) -> Poly {
    let mut g = Poly::zero();
    for mi in minors {
        g = gcd(&g, &mi.value);
        if g.is_constant() && !g.is_zero() {
            break;
        }
    }
    g
}

/// Certificate for a system in normal form.
///
/// Vanishing of all `(dim E + 1)`-minors on `E` is decided as a rank statement on the
/// matrix with top derivatives replaced by the right-hand sides: substitution is a ring
/// homomorphism, so every such minor of the substituted matrix is the substituted minor.
pub fn certify_system(alg: &AlgebraSpec, ode: &NormalFormODE) -> Result<Certificate> {
    if ode.m < 2 {
        return Err(Error::WrongArity { expected: "at least 2".into(), got: ode.m });
    }
    if alg.m != ode.m {
        return Err(Error::WrongArity { expected: alg.m.to_string(), got: ode.m });
    }
    let r = ode.order;
    let mut cert = Certificate::new(CertificateKind::System, ode.equations());
    let tangent = check_symmetries(ode, &alg.generators, &alg.atoms)?;
    cert.offending = tangent.iter().enumerate().filter(|(_, t)| !**t).map(|(i, _)| i).collect();
    let mx = prolongation_matrix(alg, r)?;
    let dim = mx.ncols();
    let dim_e = dim - ode.m;
    let rank = generic_rank(&mx);
    cert.generic_rank = rank.generic_rank;
    let mut failures = Vec::new();
    if !cert.offending.is_empty() {
        let list: Vec<String> = cert.offending.iter().map(|i| format!("X{}", i + 1)).collect();
        failures.push(format!("tangency fails for {}", list.join(", ")));
    }
    if rank.generic_rank < dim_e + 1 {
        failures.push(format!("generic rank {} below dim E + 1 = {}", rank.generic_rank, dim_e + 1));
    }
    let on_e = mx.substitute(&ode.top_substitution())?;
    let restricted = generic_rank(&on_e);
    cert.lower_rank = Some(restricted.generic_rank);
    if restricted.generic_rank > dim_e {
        failures.push(format!(
            "rank on the system is {}, so some {}-minor does not vanish there",
            restricted.generic_rank,
            dim_e + 1
        ));
    } else if let Some(w) = restricted.witness {
        // where this minor vanishes on E the orbit dimension drops further
        if !w.value.is_constant() {
            cert.residuals.push(Residual { order: order_of(&w.value), factor: w.value.clone() });
        }
        cert.notes.push(format!(
            "rank on the system is {}; residual is a nonzero {}-minor of the restricted matrix (rows {:?}, cols {:?})",
            restricted.generic_rank, w.rows.len(), w.rows, w.cols
        ));
        cert.minors.push(w);
    }
    cert.verdict = if failures.is_empty() {
        Verdict::CertifiedWithResidualReport
    } else {
        Verdict::Failed(failures)
    };
    Ok(cert)
}

/// All `size`-minors of the matrix restricted to the system; reference for the rank route.
pub fn restricted_minors(alg: &AlgebraSpec, ode: &NormalFormODE, size: usize) -> Result<Vec<RatExpr>> {
    let mx = prolongation_matrix(alg, ode.order)?;
    let subst = ode.top_substitution();
    maximal_minors(&mx, size)
        .into_iter()
        .map(|mi| RatExpr::from_poly(mi.value).substitute(&subst))
        .collect()
}

fn annihilates(p: &ProlongedField, f: &RatExpr, ctx: &JetContext) -> Result<bool> {
    Ok(ctx.atoms.is_zero_frac(&p.apply_frac(&Frac::from_ratexpr(f), ctx)))
}

/// Certificate that `D_x(F) = 0` is the unique associated equation of order `r`.
pub fn certify_invariant_derivative(alg: &AlgebraSpec, r: usize, f: &RatExpr) -> Result<Certificate> {
    if alg.m != 1 {
        return Err(Error::WrongArity { expected: "1".into(), got: alg.m });
    }
    if r == 0 {
        return Err(Error::OrderMismatch("order must be at least 1".into()));
    }
    let ctx = alg.context(r)?;
    let order = ctx.effective_order(f);
    if order >= r || !f.contains_var(VarId::jet(1, r - 1)) {
        return Err(Error::OrderMismatch(format!("F must have jet order exactly {}", r - 1)));
    }
    let mut cert = Certificate::new(CertificateKind::InvariantDerivative, vec![f.clone()]);
    let lower = generic_rank(&prolongation_matrix(alg, r - 1)?).generic_rank;
    let upper = generic_rank(&prolongation_matrix(alg, r)?);
    cert.lower_rank = Some(lower);
    cert.generic_rank = upper.generic_rank;
    let dim = 1 + (r + 1);
    let mut failures = Vec::new();
    if lower != r || upper.generic_rank != r + 1 {
        failures.push(format!(
            "rank conditions need rank M^({}) = {r} and rank M^({r}) = {}, found {lower} and {}",
            r - 1,
            r + 1,
            upper.generic_rank
        ));
    }
    if upper.generic_rank != dim - 1 {
        failures.push(format!("invariants of order {r} are not unique (rank {} vs {})", upper.generic_rank, dim - 1));
    }
    let prolonged = prolonged_generators(alg, r - 1)?;
    let lower_ctx = alg.context(r - 1)?;
    let ann = prolonged.par_iter().map(|p| annihilates(p, f, &lower_ctx)).collect::<Result<Vec<_>>>()?;
    cert.offending = ann.iter().enumerate().filter(|(_, a)| !**a).map(|(i, _)| i).collect();
    if !cert.offending.is_empty() {
        let list: Vec<String> = cert.offending.iter().map(|i| format!("X{}", i + 1)).collect();
        failures.push(format!("annihilation fails for {}", list.join(", ")));
    }
    if failures.is_empty() {
        cert.equation = Some(ctx.total_derivative(f)?);
        cert.verdict = Verdict::Certified;
    } else {
        cert.verdict = Verdict::Failed(failures);
    }
    Ok(cert)
}

/// Per-generator values `X_a^(r)(F)`.
pub fn invariant_residuals(alg: &AlgebraSpec, r: usize, f: &RatExpr) -> Result<Vec<Frac>> {
    let ctx = alg.context(r)?;
    ctx.check(f)?;
    let order = ctx.effective_order(f);
    if order > r {
        return Err(Error::OrderOverflow { needed: order, max: r });
    }
    let ff = Frac::from_ratexpr(f);
    prolonged_generators(alg, r)?.par_iter().map(|p| Ok(p.apply_frac(&ff, &ctx))).collect()
}

/// True iff every prolonged generator annihilates `F`.
pub fn check_invariant(alg: &AlgebraSpec, r: usize, f: &RatExpr) -> Result<bool> {
    let res = invariant_residuals(alg, r, f)?;
    Ok(res.iter().all(|x| alg.atoms.is_zero_frac(x)))
}

/// Logarithmic-derivative test for `Π base_i^{e_i} · exp(Σ c_j t_j)` being invariant:
/// `Σ e_i X(base_i)/base_i + Σ c_j X(t_j) = 0` for every prolonged generator `X`.
pub fn check_relative_invariant(
    alg: &AlgebraSpec,
    r: usize,
    factors: &[(RatExpr, BigRational)],
    log_linear: &[(RatExpr, RatExpr)],
) -> Result<bool> {
    Ok(relative_invariant_residuals(alg, r, factors, log_linear)?.iter().all(|x| alg.atoms.is_zero(x)))
}

pub fn relative_invariant_residuals(
    alg: &AlgebraSpec,
    r: usize,
    factors: &[(RatExpr, BigRational)],
    log_linear: &[(RatExpr, RatExpr)],
) -> Result<Vec<RatExpr>> {
    for (index, (b, _)) in factors.iter().enumerate() {
        if alg.atoms.is_zero(b) {
            return Err(Error::ZeroBase { index });
        }
    }
    let ctx = alg.context(r)?;
    for e in factors.iter().map(|f| &f.0).chain(log_linear.iter().map(|l| &l.0)) {
        ctx.check(e)?;
        let order = ctx.effective_order(e);
        if order > r {
            return Err(Error::OrderOverflow { needed: order, max: r });
        }
    }
    let prolonged = prolonged_generators(alg, r)?;
    prolonged
        .par_iter()
        .map(|p| {
            let mut s = RatExpr::zero();
            for (b, e) in factors {
                s = s.add(&p.apply(b, &ctx)?.div(b)?.scale(e));
            }
            for (t, c) in log_linear {
                s = s.add(&p.apply(t, &ctx)?.mul(c));
            }
            Ok(ctx.atoms.reduce(&s))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{primitive_algebra, third_order_example, PrimitiveId};
    use crate::expr::{arctan_atom, rat, AtomTable};
    use crate::linear::det_cofactor;
    use crate::parse::{parse_expression, parse_poly, Scope};

    fn p(s: &str) -> Poly {
        parse_poly(s, &Scope::new(1, 8)).unwrap()
    }
    fn e(s: &str) -> RatExpr {
        parse_expression(s, &Scope::new(1, 8)).unwrap()
    }

    #[test]
    fn algebra_iv_matrix_and_determinant() {
        let alg = primitive_algebra(PrimitiveId::IV, None).unwrap();
        let mx = prolongation_matrix(&alg, 2).unwrap();
        let expect = [["1", "0", "0", "0"], ["0", "1", "0", "0"], ["x", "u1", "0", "-u1_2"], ["u1", "-x", "-1 - u1_1^2", "-3*u1_1*u1_2"]];
        for (row, want) in mx.rows.iter().zip(expect) {
            let got: Vec<String> = row.iter().map(|c| c.canonical_string()).collect();
            assert_eq!(got, want);
        }
        let d = lie_determinant(&mx).unwrap();
        assert_eq!(d.value, p("-u1_2*(1 + u1_1^2)"));
        assert_eq!(d.value, det_cofactor(&mx.poly_rows()));
        let c = certify_hypersurface(&alg, 2, &p("u1_2")).unwrap();
        assert_eq!(c.verdict, Verdict::Certified, "{:?}", c);
    }

    #[test]
    fn example_of_order_three() {
        let alg = third_order_example();
        let mx = prolongation_matrix(&alg, 3).unwrap();
        let last: Vec<String> = mx.rows[3].iter().map(|c| c.canonical_string()).collect();
        assert_eq!(last, vec!["x", "2*u1", "u1_1", "0", "-u1_3"]);
        assert_eq!(generic_rank(&mx).generic_rank, 4);
        let c = certify_invariant_derivative(&alg, 3, &e("u1_2")).unwrap();
        assert_eq!(c.verdict, Verdict::Certified);
        assert_eq!(c.equation.unwrap(), e("u1_3"));
        let small = AlgebraSpec::new("s", 1, alg.generators[..3].to_vec());
        let c = certify_invariant_derivative(&small, 2, &e("u1_1")).unwrap();
        assert!(c.verdict.is_failed());
        assert_eq!(c.offending, vec![2]);
    }

    #[test]
    fn algebra_i_has_no_first_order_equation() {
        let alg = primitive_algebra(PrimitiveId::I, None).unwrap();
        let mx = prolongation_matrix(&alg, 1).unwrap();
        let rk = generic_rank(&mx);
        assert_eq!(rk.generic_rank, 3);
        assert_eq!(rk.witness.unwrap().value, p("-1 - u1_1^2"));
        let c = certify_hypersurface(&alg, 1, &p("u1_1")).unwrap();
        assert!(c.verdict.is_failed());
        let c = certify_hypersurface(&alg, 1, &p("1 + u1_1^2")).unwrap();
        assert!(c.verdict.is_failed());
    }

    #[test]
    fn invariants() {
        let iv = primitive_algebra(PrimitiveId::IV, None).unwrap();
        assert!(check_invariant(&iv, 3, &e("((1 + u1_1^2)*u1_3 - 3*u1_1*u1_2^2)/u1_2^2")).unwrap());
        assert!(!check_invariant(&iv, 2, &e("u1_2")).unwrap());
        let v = primitive_algebra(PrimitiveId::V, None).unwrap();
        let j = [(e("u1_2"), rat(-8, 3)), (e("3*u1_2*u1_4 - 5*u1_3^2"), rat(1, 1))];
        assert!(check_relative_invariant(&v, 4, &j, &[]).unwrap());
        assert!(!check_relative_invariant(&iv, 2, &[(e("u1_2"), rat(1, 1))], &[]).unwrap());
        let atoms = AtomTable::from_defs(vec![arctan_atom("a", VarId::jet(1, 1)).unwrap()]).unwrap();
        let i = primitive_algebra(PrimitiveId::I, None).unwrap().with_extra_atoms(&atoms).unwrap();
        let alpha = RatExpr::var(VarId::param("alpha").unwrap());
        let a = RatExpr::var(VarId::atom("a").unwrap());
        let f = [(e("u1_2"), rat(1, 1)), (e("1 + u1_1^2"), rat(-3, 2))];
        assert!(check_relative_invariant(&i, 2, &f, &[(a, alpha.neg())]).unwrap());
        assert!(matches!(
            check_relative_invariant(&iv, 2, &[(RatExpr::zero(), rat(1, 1))], &[]),
            Err(Error::ZeroBase { index: 0 })
        ));
    }

    #[test]
    fn minor_enumeration() {
        assert_eq!(combinations(4, 2).len(), 6);
        assert_eq!(combinations(3, 3), vec![vec![0, 1, 2]]);
        assert!(combinations(2, 3).is_empty());
        let vii = primitive_algebra(PrimitiveId::VII, None).unwrap();
        let mx = prolongation_matrix(&vii, 3).unwrap();
        let ms = maximal_minors(&mx, 5);
        assert_eq!(ms.len(), 6);
        assert!(ms.windows(2).all(|w| (w[0].rows.clone(), w[0].cols.clone()) < (w[1].rows.clone(), w[1].cols.clone())));
    }
}
