//! Jets of `m` functions of one variable: total derivative, prolongation of point
//! vector fields, brackets and closure of generator sets.

use std::collections::BTreeMap;

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::expr::{AtomTable, Frac, Monomial, Poly, RatExpr, VarId};
use crate::linear;

/// Jet space `J^r(1, m)` together with the differential atoms in scope.
#[derive(Clone, Debug, PartialEq)]
pub struct JetContext {
    pub m: usize,
    pub max_order: usize,
    pub atoms: AtomTable,
}

impl JetContext {
    pub fn new(m: usize, max_order: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidArgument("at least one dependent variable is needed".into()));
        }
        Ok(JetContext { m, max_order, atoms: AtomTable::new() })
    }

    pub fn with_atoms(mut self, atoms: AtomTable) -> Self {
        self.atoms = atoms;
        self
    }

    pub fn with_max_order(&self, r: usize) -> Self {
        JetContext { m: self.m, max_order: r, atoms: self.atoms.clone() }
    }

    /// `dim J^r(1, m) = 1 + m(r + 1)`.
    pub fn dim(&self, r: usize) -> usize {
        1 + self.m * (r + 1)
    }

    /// Coordinates of `J^r` in column order: `x`, then all `u^i_0`, then all `u^i_1`, ...
    pub fn coordinates(&self, r: usize) -> Vec<VarId> {
        let mut out = vec![VarId::Independent];
        for k in 0..=r {
            for i in 1..=self.m {
                out.push(VarId::jet(i, k));
            }
        }
        out
    }

    /// Checks that every variable of `e` lives in this context.
    pub fn check(&self, e: &RatExpr) -> Result<()> {
        for v in e.vars() {
            match v {
                VarId::Jet { dep, order } => {
                    if dep as usize > self.m {
                        return Err(Error::InvalidArgument(format!(
                            "{v} refers to a dependent variable beyond m = {}",
                            self.m
                        )));
                    }
                    if order as usize > self.max_order {
                        return Err(Error::OrderOverflow {
                            needed: order as usize,
                            max: self.max_order,
                        });
                    }
                }
                VarId::Atom(_) if !self.atoms.knows(v) => {
                    return Err(Error::InvalidArgument(format!("undeclared atom {v}")));
                }
                _ => {}
            }
        }
        Ok(())
    }

    /// Jet order reached by `e`, counting jets hidden behind atom rules.
    pub fn effective_order(&self, e: &RatExpr) -> usize {
        let mut order = e.jet_order().unwrap_or(0);
        for a in self.atoms.iter() {
            if e.contains_var(a.var()) {
                for v in a.rules.keys() {
                    order = order.max(v.jet_order().unwrap_or(0));
                }
            }
        }
        order
    }

    fn dx_coefficients(&self, top: usize) -> Vec<(VarId, RatExpr)> {
        let mut coeffs = vec![(VarId::Independent, RatExpr::one())];
        for i in 1..=self.m {
            for k in 0..=top {
                coeffs.push((VarId::jet(i, k), RatExpr::var(VarId::jet(i, k + 1))));
            }
        }
        coeffs
    }

    /// `D_x e`.
    pub fn total_derivative(&self, e: &RatExpr) -> Result<RatExpr> {
        let order = self.effective_order(e);
        if order + 1 > self.max_order {
            return Err(Error::OrderOverflow { needed: order + 1, max: self.max_order });
        }
        Ok(self.atoms.derive(e, &self.dx_coefficients(order)))
    }

    /// `D_x` on lazy fractions, without the order check.
    pub fn total_derivative_frac(&self, e: &Frac, order: usize) -> Frac {
        let coeffs: Vec<(VarId, Frac)> = self
            .dx_coefficients(order)
            .into_iter()
            .map(|(v, c)| (v, Frac::from_ratexpr(&c)))
            .collect();
        self.atoms.derive_frac(e, &coeffs)
    }
}

pub fn total_derivative(e: &RatExpr, ctx: &JetContext) -> Result<RatExpr> {
    ctx.total_derivative(e)
}

/// Point vector field `xi ∂x + Σ phi_i ∂u^i`.
#[derive(Clone, PartialEq)]
pub struct VectorField {
    pub xi: RatExpr,
    pub phis: Vec<RatExpr>,
}

impl VectorField {
    pub fn new(xi: RatExpr, phis: Vec<RatExpr>) -> Result<Self> {
        for c in std::iter::once(&xi).chain(phis.iter()) {
            if c.vars().iter().any(|v| matches!(v, VarId::Jet { order, .. } if *order > 0)) {
                return Err(Error::NotPointField(format!("coefficient {c} involves derivatives")));
            }
        }
        if phis.is_empty() {
            return Err(Error::NotPointField("no dependent components".into()));
        }
        Ok(VectorField { xi, phis })
    }

    pub fn zero(m: usize) -> Self {
        VectorField { xi: RatExpr::zero(), phis: vec![RatExpr::zero(); m] }
    }

    pub fn m(&self) -> usize {
        self.phis.len()
    }

    pub fn components(&self) -> Vec<&RatExpr> {
        std::iter::once(&self.xi).chain(self.phis.iter()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.components().iter().all(|c| c.is_zero())
    }

    /// Derivation coefficients on `J^0`.
    pub fn derivation(&self) -> Vec<(VarId, RatExpr)> {
        let mut d = vec![(VarId::Independent, self.xi.clone())];
        for (i, p) in self.phis.iter().enumerate() {
            d.push((VarId::jet(i + 1, 0), p.clone()));
        }
        d
    }

    /// `X(f)` for a function `f` on `J^0` (and atoms).
    pub fn apply(&self, f: &RatExpr, atoms: &AtomTable) -> RatExpr {
        atoms.derive(f, &self.derivation())
    }

    pub fn add(&self, other: &VectorField) -> VectorField {
        VectorField {
            xi: self.xi.add(&other.xi),
            phis: self.phis.iter().zip(&other.phis).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn sub(&self, other: &VectorField) -> VectorField {
        VectorField {
            xi: self.xi.sub(&other.xi),
            phis: self.phis.iter().zip(&other.phis).map(|(a, b)| a.sub(b)).collect(),
        }
    }

    pub fn scale(&self, c: &RatExpr) -> VectorField {
        VectorField {
            xi: self.xi.mul(c),
            phis: self.phis.iter().map(|p| p.mul(c)).collect(),
        }
    }

    pub fn scale_rational(&self, c: &BigRational) -> VectorField {
        VectorField { xi: self.xi.scale(c), phis: self.phis.iter().map(|p| p.scale(c)).collect() }
    }

    /// `Σ c_a X_a`.
    pub fn combination(fields: &[VectorField], coeffs: &[RatExpr]) -> VectorField {
        let m = fields.first().map_or(1, |f| f.m());
        let mut acc = VectorField::zero(m);
        for (f, c) in fields.iter().zip(coeffs) {
            if !c.is_zero() {
                acc = acc.add(&f.scale(c));
            }
        }
        acc
    }
}

impl std::fmt::Display for VectorField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.components().iter().map(|c| c.canonical_string()).collect();
        write!(f, "{}", parts.join(" | "))
    }
}

impl std::fmt::Debug for VectorField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "VF[{self}]")
    }
}

/// Prolongation `X^(r)` with coefficients `coeffs[i][k] = X^{i+1}_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProlongedField {
    pub base: VectorField,
    pub order: usize,
    pub coeffs: Vec<Vec<RatExpr>>,
}

impl ProlongedField {
    pub fn coeff(&self, dep: usize, k: usize) -> &RatExpr {
        &self.coeffs[dep - 1][k]
    }

    /// Row of the prolongation matrix: `xi`, then coefficients grouped by order.
    pub fn row(&self) -> Vec<RatExpr> {
        let mut row = vec![self.base.xi.clone()];
        for k in 0..=self.order {
            for i in 0..self.base.m() {
                row.push(self.coeffs[i][k].clone());
            }
        }
        row
    }

    pub fn derivation(&self) -> Vec<(VarId, RatExpr)> {
        let mut d = vec![(VarId::Independent, self.base.xi.clone())];
        for (i, cs) in self.coeffs.iter().enumerate() {
            for (k, c) in cs.iter().enumerate() {
                d.push((VarId::jet(i + 1, k), c.clone()));
            }
        }
        d
    }

    /// `X^(r)(f)`; `f` must not involve jets above the prolongation order.
    pub fn apply(&self, f: &RatExpr, ctx: &JetContext) -> Result<RatExpr> {
        let order = ctx.effective_order(f);
        if order > self.order {
            return Err(Error::OrderOverflow { needed: order, max: self.order });
        }
        Ok(ctx.atoms.derive(f, &self.derivation()))
    }

    /// `X^(r)(f)` on lazy fractions.
    pub fn apply_frac(&self, f: &Frac, ctx: &JetContext) -> Frac {
        let coeffs: Vec<(VarId, Frac)> =
            self.derivation().into_iter().map(|(v, c)| (v, Frac::from_ratexpr(&c))).collect();
        ctx.atoms.derive_frac(f, &coeffs)
    }
}

/// `X^(r)` via `X^i_{k+1} = D_x(X^i_k) - u^i_{k+1} D_x(xi)`.
pub fn prolong(x: &VectorField, r: usize, ctx: &JetContext) -> Result<ProlongedField> {
    if r > ctx.max_order {
        return Err(Error::OrderOverflow { needed: r, max: ctx.max_order });
    }
    if x.m() != ctx.m {
        return Err(Error::WrongArity { expected: ctx.m.to_string(), got: x.m() });
    }
    // D_x of intermediate coefficients may reach order r; use a context sized for that
    let inner = ctx.with_max_order(r + 1);
    let dxi = if r > 0 { inner.total_derivative(&x.xi)? } else { RatExpr::zero() };
    let mut coeffs = Vec::with_capacity(x.m());
    for (i, phi) in x.phis.iter().enumerate() {
        let mut cs = vec![phi.clone()];
        for k in 0..r {
            let prev = &cs[k];
            let next = inner
                .total_derivative(prev)?
                .sub(&RatExpr::var(VarId::jet(i + 1, k + 1)).mul(&dxi));
            cs.push(next);
        }
        coeffs.push(cs);
    }
    Ok(ProlongedField { base: x.clone(), order: r, coeffs })
}

/// `[X, Y]^k = X(Y^k) - Y(X^k)`.
pub fn lie_bracket(x: &VectorField, y: &VectorField, atoms: &AtomTable) -> VectorField {
    let comp = |a: &RatExpr, b: &RatExpr| y.apply(a, atoms).neg().add(&x.apply(b, atoms));
    VectorField {
        xi: comp(&x.xi, &y.xi),
        phis: x.phis.iter().zip(&y.phis).map(|(a, b)| comp(a, b)).collect(),
    }
}

/// Outcome of a closure check.
#[derive(Clone, Debug)]
pub struct StructureReport {
    pub closed: bool,
    /// `constants[a][b][k] = c^k_{ab}` with `[X_a, X_b] = Σ_k c^k_{ab} X_k`, when closed.
    pub constants: Option<Vec<Vec<Vec<RatExpr>>>>,
    /// First bracket found outside the span.
    pub witness: Option<(usize, usize, VectorField)>,
}

impl StructureReport {
    pub fn dim(&self) -> usize {
        self.constants.as_ref().map_or(0, |c| c.len())
    }

    pub fn is_antisymmetric(&self) -> bool {
        let Some(c) = &self.constants else { return false };
        let n = c.len();
        (0..n).all(|a| (0..n).all(|b| (0..n).all(|k| c[a][b][k].add(&c[b][a][k]).is_zero())))
    }

    /// Jacobi identity on the structure constants.
    pub fn satisfies_jacobi(&self) -> bool {
        let Some(c) = &self.constants else { return false };
        let n = c.len();
        for a in 0..n {
            for b in (a + 1)..n {
                for cc in (b + 1)..n {
                    for e in 0..n {
                        let mut s = RatExpr::zero();
                        for d in 0..n {
                            s = s.add(&c[a][b][d].mul(&c[d][cc][e]));
                            s = s.add(&c[b][cc][d].mul(&c[d][a][e]));
                            s = s.add(&c[cc][a][d].mul(&c[d][b][e]));
                        }
                        if !s.is_zero() {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }
}

/// Coefficient vector of a field: monomials in non-parameter variables, coefficients in ℚ(params).
fn coefficient_vector(
    x: &VectorField,
    index: usize,
) -> Result<BTreeMap<(usize, Monomial), RatExpr>> {
    let mut out: BTreeMap<(usize, Monomial), Poly> = BTreeMap::new();
    let mut dens = Vec::new();
    for (ci, c) in x.components().into_iter().enumerate() {
        if c.den().vars().iter().any(|v| !v.is_parameter()) {
            return Err(Error::NonPolynomialGenerator { index });
        }
        for (m, k) in c.num().terms() {
            let (params, rest): (Vec<_>, Vec<_>) =
                m.factors().iter().partition(|(v, _)| v.is_parameter());
            let key = (ci, Monomial::from_pairs(rest));
            let term = Poly::term(Monomial::from_pairs(params), k.clone());
            let entry = out.entry(key).or_insert_with(Poly::zero);
            *entry = entry.add(&term);
        }
        dens.push((ci, c.den().clone()));
    }
    let mut res = BTreeMap::new();
    for ((ci, m), p) in out {
        let den = dens.iter().find(|d| d.0 == ci).map(|d| d.1.clone()).unwrap_or_else(Poly::one);
        let value = RatExpr::new(p, den)?;
        if !value.is_zero() {
            res.insert((ci, m), value);
        }
    }
    Ok(res)
}

fn as_columns(
    vectors: &[BTreeMap<(usize, Monomial), RatExpr>],
    extra: Option<&BTreeMap<(usize, Monomial), RatExpr>>,
) -> (Vec<Vec<RatExpr>>, Vec<RatExpr>) {
    let mut keys: Vec<&(usize, Monomial)> = vectors.iter().flat_map(|v| v.keys()).collect();
    if let Some(e) = extra {
        keys.extend(e.keys());
    }
    keys.sort();
    keys.dedup();
    let col = |v: &BTreeMap<(usize, Monomial), RatExpr>| -> Vec<RatExpr> {
        keys.iter().map(|k| v.get(*k).cloned().unwrap_or_else(RatExpr::zero)).collect()
    };
    let cols = vectors.iter().map(col).collect();
    let rhs = extra.map(col).unwrap_or_default();
    (cols, rhs)
}

/// Coordinates of `target` in the span of `basis`, or `None` if it lies outside.
pub fn span_coordinates(basis: &[VectorField], target: &VectorField) -> Result<Option<Vec<RatExpr>>> {
    let vecs: Vec<_> =
        basis.iter().enumerate().map(|(i, g)| coefficient_vector(g, i)).collect::<Result<_>>()?;
    let t = coefficient_vector(target, basis.len())?;
    let (cols, rhs) = as_columns(&vecs, Some(&t));
    if rhs.is_empty() {
        return Ok(Some(vec![RatExpr::zero(); basis.len()]));
    }
    Ok(linear::solve_columns(&cols, &rhs))
}

/// Rank of a list of fields as vectors over ℚ(params).
pub fn span_rank(fields: &[VectorField]) -> Result<usize> {
    let vecs: Vec<_> =
        fields.iter().enumerate().map(|(i, g)| coefficient_vector(g, i)).collect::<Result<_>>()?;
    let (cols, _) = as_columns(&vecs, None);
    if cols.is_empty() || cols[0].is_empty() {
        return Ok(0);
    }
    let rows: Vec<Vec<RatExpr>> =
        (0..cols[0].len()).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect();
    Ok(linear::rank(&rows))
}

/// Decides closure under brackets and extracts structure constants.
pub fn closure_check(gens: &[VectorField], atoms: &AtomTable) -> Result<StructureReport> {
    let n = gens.len();
    if span_rank(gens)? < n {
        return Err(Error::DependentGenerators);
    }
    let mut constants = vec![vec![vec![RatExpr::zero(); n]; n]; n];
    for a in 0..n {
        for b in (a + 1)..n {
            let br = lie_bracket(&gens[a], &gens[b], atoms);
            match span_coordinates(gens, &br)? {
                Some(c) => {
                    for k in 0..n {
                        constants[b][a][k] = c[k].neg();
                        constants[a][b][k] = c[k].clone();
                    }
                }
                None => {
                    return Ok(StructureReport {
                        closed: false,
                        constants: None,
                        witness: Some((a, b, br)),
                    })
                }
            }
        }
    }
    Ok(StructureReport { closed: true, constants: Some(constants), witness: None })
}
