//! Normal-form ODE systems: point-symmetry tangency, the field `Z`, and first integrals
//! as ratios of symmetry determinants.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::expr::{AtomTable, Frac, RatExpr, VarId};
use crate::jetspace::{prolong, JetContext, VectorField};
use crate::linear::det_ratexpr;

/// System `u^i_r = f^i` with every `f^i` of jet order below `r`.
#[derive(Clone, Debug, PartialEq)]
pub struct NormalFormODE {
    pub m: usize,
    pub order: usize,
    pub rhs: Vec<RatExpr>,
    pub atoms: AtomTable,
}

impl NormalFormODE {
    pub fn new(m: usize, order: usize, rhs: Vec<RatExpr>, atoms: AtomTable) -> Result<Self> {
        if m == 0 || rhs.len() != m {
            return Err(Error::NotNormalForm(format!("{} right-hand sides for m = {m}", rhs.len())));
        }
        if order == 0 {
            return Err(Error::NotNormalForm("order must be positive".into()));
        }
        let ode = NormalFormODE { m, order, rhs, atoms };
        let ctx = JetContext::new(m, order)?.with_atoms(ode.atoms.clone());
        for (i, f) in ode.rhs.iter().enumerate() {
            ctx.check(f).map_err(|e| Error::NotNormalForm(format!("u{}_{order}: {e}", i + 1)))?;
            if ctx.effective_order(f) >= order {
                return Err(Error::NotNormalForm(format!(
                    "right-hand side of u{}_{order} involves order {order} or higher",
                    i + 1
                )));
            }
        }
        Ok(ode)
    }

    /// Residuals `u^i_r - f^i`.
    pub fn equations(&self) -> Vec<RatExpr> {
        self.rhs
            .iter()
            .enumerate()
            .map(|(i, f)| RatExpr::var(VarId::jet(i + 1, self.order)).sub(f))
            .collect()
    }

    /// Bindings `u^i_r -> f^i`.
    pub fn top_substitution(&self) -> BTreeMap<VarId, RatExpr> {
        self.rhs.iter().enumerate().map(|(i, f)| (VarId::jet(i + 1, self.order), f.clone())).collect()
    }

    pub fn context(&self) -> Result<JetContext> {
        Ok(JetContext::new(self.m, self.order)?.with_atoms(self.atoms.clone()))
    }
}

impl std::fmt::Display for NormalFormODE {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for (i, r) in self.rhs.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "u{}_{} = {}", i + 1, self.order, r.canonical_string())?;
        }
        Ok(())
    }
}

/// Residuals of `X^(r)(u^i_r - f^i)` after substituting `u^j_r -> f^j`; all zero iff `X`
/// is a point symmetry. Computed on lazy fractions so large right-hand sides stay cheap.
pub fn symmetry_residuals(ode: &NormalFormODE, x: &VectorField, atoms: &AtomTable) -> Result<Vec<Frac>> {
    let atoms = ode.atoms.merge(atoms)?;
    let ctx = JetContext::new(ode.m, ode.order)?.with_atoms(atoms.clone());
    let p = prolong(x, ode.order, &ctx)?;
    let subst: BTreeMap<VarId, Frac> =
        ode.top_substitution().into_iter().map(|(v, e)| (v, Frac::from_ratexpr(&e))).collect();
    let mut out = Vec::with_capacity(ode.m);
    for (i, f) in ode.rhs.iter().enumerate() {
        let top = Frac::from_ratexpr(p.coeff(i + 1, ode.order)).substitute(&subst)?;
        let along = p.apply_frac(&Frac::from_ratexpr(f), &ctx);
        out.push(top.sub(&along));
    }
    Ok(out)
}

/// True iff `X` is a point symmetry of `ode`.
pub fn check_point_symmetry(ode: &NormalFormODE, x: &VectorField, atoms: &AtomTable) -> Result<bool> {
    let table = ode.atoms.merge(atoms)?;
    Ok(symmetry_residuals(ode, x, atoms)?.iter().all(|r| table.is_zero_frac(r)))
}

/// Tangency of each generator, checked in parallel; results in generator order.
pub fn check_symmetries(ode: &NormalFormODE, gens: &[VectorField], atoms: &AtomTable) -> Result<Vec<bool>> {
    gens.par_iter().map(|g| check_point_symmetry(ode, g, atoms)).collect()
}

/// The field `Z = ∂x + Σ_k u^i_{k+1} ∂u^i_k + Σ f^i ∂u^i_{r-1}` on `J^{r-1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct ZField {
    pub m: usize,
    pub order: usize,
    /// Components in the order `x`, then all `u^i_0`, then all `u^i_1`, ... up to `u^i_{r-1}`.
    pub components: Vec<RatExpr>,
}

impl ZField {
    pub fn derivation(&self) -> Vec<(VarId, RatExpr)> {
        let mut d = vec![(VarId::Independent, self.components[0].clone())];
        for k in 0..self.order {
            for i in 0..self.m {
                d.push((VarId::jet(i + 1, k), self.components[1 + k * self.m + i].clone()));
            }
        }
        d
    }
}

pub fn z_field(ode: &NormalFormODE) -> ZField {
    let mut comps = vec![RatExpr::one()];
    for k in 0..ode.order {
        for i in 0..ode.m {
            comps.push(if k + 1 < ode.order {
                RatExpr::var(VarId::jet(i + 1, k + 1))
            } else {
                ode.rhs[i].clone()
            });
        }
    }
    ZField { m: ode.m, order: ode.order, components: comps }
}

/// First integral together with advisory notes.
#[derive(Clone, Debug)]
pub struct FirstIntegral {
    pub value: RatExpr,
    pub numerator_det: RatExpr,
    pub denominator_det: RatExpr,
    pub warnings: Vec<String>,
}

fn contraction_matrix(z: &ZField, rows: &[VectorField], ctx: &JetContext) -> Result<Vec<Vec<RatExpr>>> {
    let mut m = vec![z.components.clone()];
    for x in rows {
        m.push(prolong(x, z.order - 1, ctx)?.row());
    }
    Ok(m)
}

/// `det(Z, X_{i_1}, ..., X_{i_n}) / det(Z, X_{j_1}, ..., X_{j_n})` for a scalar ODE of order `n`,
/// with the symmetry rows prolonged to order `n - 1`.
pub fn first_integral(
    ode: &NormalFormODE,
    num_rows: &[VectorField],
    den_rows: &[VectorField],
    atoms: &AtomTable,
) -> Result<FirstIntegral> {
    if ode.m != 1 {
        return Err(Error::WrongArity { expected: "1".into(), got: ode.m });
    }
    let n = ode.order;
    for rows in [num_rows, den_rows] {
        if rows.len() != n {
            return Err(Error::InvalidArgument(format!(
                "expected {n} symmetry rows, got {}",
                rows.len()
            )));
        }
    }
    let all: Vec<VectorField> = num_rows.iter().chain(den_rows).cloned().collect();
    let ok = check_symmetries(ode, &all, atoms)?;
    if let Some(index) = ok.iter().position(|t| !t) {
        return Err(Error::NotASymmetry { index });
    }
    let atoms = ode.atoms.merge(atoms)?;
    let ctx = JetContext::new(1, n)?.with_atoms(atoms.clone());
    let z = z_field(ode);
    let num = atoms.reduce(&det_ratexpr(&contraction_matrix(&z, num_rows, &ctx)?));
    let den = atoms.reduce(&det_ratexpr(&contraction_matrix(&z, den_rows, &ctx)?));
    if den.is_zero() {
        return Err(Error::DegenerateDenominator);
    }
    let value = atoms.reduce(&num.div(&den)?);
    let mut warnings = Vec::new();
    let mut distinct: Vec<&VectorField> = Vec::new();
    for f in &all {
        if !distinct.contains(&f) {
            distinct.push(f);
        }
    }
    if distinct.len() < n + 1 {
        warnings.push(format!(
            "only {} distinct symmetries for order {n}; at least {} are needed for a nonconstant integral",
            distinct.len(),
            n + 1
        ));
    }
    Ok(FirstIntegral { value, numerator_det: num, denominator_det: den, warnings })
}

/// `Z(I) = 0`.
pub fn verify_first_integral(ode: &NormalFormODE, i: &RatExpr, atoms: &AtomTable) -> Result<bool> {
    let atoms = ode.atoms.merge(atoms)?;
    if i.jet_order().unwrap_or(0) >= ode.order {
        return Err(Error::OrderOverflow { needed: i.jet_order().unwrap_or(0), max: ode.order - 1 });
    }
    let z = z_field(ode);
    Ok(atoms.is_zero(&atoms.derive(i, &z.derivation())))
}
