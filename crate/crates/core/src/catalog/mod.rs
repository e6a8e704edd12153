//! Built-in generator tables: the eight primitive algebras of the plane, the isometry,
//! affine, conformal and projective algebras of `R^{1+m}`, a few small realizations,
//! and the equations used alongside them.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::expr::{exp_atom, rat, AtomDef, AtomTable, RatExpr, VarId};
use crate::integrals::NormalFormODE;
use crate::jetspace::{closure_check, JetContext, StructureReport, VectorField};
use crate::parse;

/// Largest `m` accepted by [`space_algebra`] unless a bound is given explicitly.
pub const DEFAULT_MAX_M: usize = 4;

/// Named basis of a Lie algebra of point vector fields.
#[derive(Clone, Debug)]
pub struct AlgebraSpec {
    pub name: String,
    pub m: usize,
    /// Parameter values; a symbolic parameter maps to its own variable.
    pub params: BTreeMap<String, RatExpr>,
    pub generators: Vec<VectorField>,
    pub expected_dim: usize,
    pub atoms: AtomTable,
}

impl AlgebraSpec {
    pub fn new(name: &str, m: usize, generators: Vec<VectorField>) -> Self {
        let expected_dim = generators.len();
        AlgebraSpec {
            name: name.to_string(),
            m,
            params: BTreeMap::new(),
            generators,
            expected_dim,
            atoms: AtomTable::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.generators.len()
    }

    pub fn context(&self, r: usize) -> Result<JetContext> {
        Ok(JetContext::new(self.m, r)?.with_atoms(self.atoms.clone()))
    }

    /// Same algebra with more atoms in scope (e.g. atoms used by an invariant).
    pub fn with_extra_atoms(&self, atoms: &AtomTable) -> Result<AlgebraSpec> {
        let mut out = self.clone();
        out.atoms = self.atoms.merge(atoms)?;
        Ok(out)
    }

    /// Same algebra on a different basis.
    pub fn with_generators(&self, generators: Vec<VectorField>) -> AlgebraSpec {
        AlgebraSpec { generators, ..self.clone() }
    }

    pub fn closure(&self) -> Result<StructureReport> {
        closure_check(&self.generators, &self.atoms)
    }
}

/// Identifiers of the primitive algebras of the plane.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum PrimitiveId {
    I,
    II,
    III,
    IV,
    V,
    VI,
    VII,
    VIII,
}

impl PrimitiveId {
    pub const ALL: [PrimitiveId; 8] = [
        PrimitiveId::I,
        PrimitiveId::II,
        PrimitiveId::III,
        PrimitiveId::IV,
        PrimitiveId::V,
        PrimitiveId::VI,
        PrimitiveId::VII,
        PrimitiveId::VIII,
    ];

    pub fn expected_dim(self) -> usize {
        [3, 3, 3, 4, 5, 6, 6, 8][self as usize]
    }

    pub fn as_str(self) -> &'static str {
        ["I", "II", "III", "IV", "V", "VI", "VII", "VIII"][self as usize]
    }
}

impl FromStr for PrimitiveId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        PrimitiveId::ALL
            .iter()
            .copied()
            .find(|p| p.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownAlgebraId(s.to_string()))
    }
}

impl fmt::Display for PrimitiveId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

fn x() -> RatExpr {
    RatExpr::var(VarId::Independent)
}

fn u() -> RatExpr {
    RatExpr::var(VarId::jet(1, 0))
}

fn c(n: i64) -> RatExpr {
    RatExpr::int(n)
}

fn plane(xi: RatExpr, phi: RatExpr) -> VectorField {
    VectorField { xi, phis: vec![phi] }
}

/// The primitive algebra `id`; `alpha` is only meaningful for `I` and stays symbolic if omitted.
pub fn primitive_algebra(id: PrimitiveId, alpha: Option<RatExpr>) -> Result<AlgebraSpec> {
    use PrimitiveId::*;
    if alpha.is_some() && id != I {
        return Err(Error::InvalidArgument(format!("alpha only applies to algebra I, not {id}")));
    }
    let (dx, du) = (plane(c(1), c(0)), plane(c(0), c(1)));
    let xu = &x() * &u();
    let (x2, u2) = (x().pow(2), u().pow(2));
    let mut params = BTreeMap::new();
    let gens = match id {
        I => {
            let a = alpha.unwrap_or_else(|| RatExpr::var(VarId::param("alpha").unwrap()));
            params.insert("alpha".to_string(), a.clone());
            vec![dx, du, plane(&u() + &(&a * &x()), &x().neg() + &(&a * &u()))]
        }
        II => vec![dx, plane(x(), u()), plane(&x2 - &u2, xu.scale(&rat(2, 1)))],
        III => vec![
            plane(u(), x().neg()),
            plane(&(&c(1) + &x2) - &u2, xu.scale(&rat(2, 1))),
            plane(xu.scale(&rat(2, 1)), &(&c(1) - &x2) + &u2),
        ],
        IV => vec![dx, du, plane(x(), u()), plane(u(), x().neg())],
        V => vec![dx, du, plane(x(), u().neg()), plane(u(), c(0)), plane(c(0), x())],
        VI => vec![dx, du, plane(x(), c(0)), plane(c(0), u()), plane(u(), c(0)), plane(c(0), x())],
        VII => vec![
            dx,
            du,
            plane(u(), x().neg()),
            plane(x(), u()),
            plane(&x2 - &u2, xu.scale(&rat(2, 1))),
            plane(xu.scale(&rat(2, 1)), &u2 - &x2),
        ],
        VIII => vec![
            dx,
            du,
            plane(x(), c(0)),
            plane(c(0), u()),
            plane(u(), c(0)),
            plane(c(0), x()),
            plane(x2.clone(), xu.clone()),
            plane(xu.clone(), u2.clone()),
        ],
    };
    Ok(AlgebraSpec {
        name: id.as_str().to_string(),
        m: 1,
        params,
        expected_dim: id.expected_dim(),
        generators: gens,
        atoms: AtomTable::new(),
    })
}

/// Families of algebras acting on `R^{1+m}` with coordinates `y^0 = x`, `y^i = u^i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpaceKind {
    Isometry,
    Affine,
    Conformal,
    Projective,
}

impl SpaceKind {
    pub const ALL: [SpaceKind; 4] =
        [SpaceKind::Isometry, SpaceKind::Affine, SpaceKind::Conformal, SpaceKind::Projective];

    pub fn as_str(self) -> &'static str {
        match self {
            SpaceKind::Isometry => "isometry",
            SpaceKind::Affine => "affine",
            SpaceKind::Conformal => "conformal",
            SpaceKind::Projective => "projective",
        }
    }

    pub fn expected_dim(self, m: usize) -> usize {
        match self {
            SpaceKind::Isometry => (m + 1) + m * (m + 1) / 2,
            SpaceKind::Affine => (m + 1) * (m + 2),
            SpaceKind::Conformal => (m + 2) * (m + 3) / 2,
            SpaceKind::Projective => (m + 1) * (m + 3),
        }
    }
}

impl FromStr for SpaceKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        SpaceKind::ALL
            .iter()
            .copied()
            .find(|k| k.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownAlgebraId(s.to_string()))
    }
}

fn y(i: usize) -> RatExpr {
    if i == 0 {
        x()
    } else {
        RatExpr::var(VarId::jet(i, 0))
    }
}

/// Field with components `comps[j]` along `∂/∂y^j`.
fn yfield(comps: Vec<RatExpr>) -> VectorField {
    let mut it = comps.into_iter();
    let xi = it.next().expect("at least one component");
    VectorField { xi, phis: it.collect() }
}

fn unit(m: usize, j: usize, e: RatExpr) -> VectorField {
    let mut comps = vec![RatExpr::zero(); m + 1];
    comps[j] = e;
    yfield(comps)
}

fn translations(m: usize) -> Vec<VectorField> {
    (0..=m).map(|j| unit(m, j, c(1))).collect()
}

/// `-u^i ∂x + x ∂u^i`, then `u^i ∂u^j - u^j ∂u^i` for `i < j`.
fn rotations(m: usize) -> Vec<VectorField> {
    let mut out = Vec::new();
    for i in 1..=m {
        let mut comps = vec![RatExpr::zero(); m + 1];
        comps[0] = y(i).neg();
        comps[i] = x();
        out.push(yfield(comps));
    }
    for i in 1..=m {
        for j in (i + 1)..=m {
            let mut comps = vec![RatExpr::zero(); m + 1];
            comps[j] = y(i);
            comps[i] = y(j).neg();
            out.push(yfield(comps));
        }
    }
    out
}

fn euler(m: usize) -> Vec<RatExpr> {
    (0..=m).map(y).collect()
}

pub fn space_algebra(kind: SpaceKind, m: usize) -> Result<AlgebraSpec> {
    space_algebra_bounded(kind, m, DEFAULT_MAX_M)
}

pub fn space_algebra_bounded(kind: SpaceKind, m: usize, max_m: usize) -> Result<AlgebraSpec> {
    if m == 0 {
        return Err(Error::InvalidArgument("m must be at least 1".into()));
    }
    if m > max_m {
        return Err(Error::UnsupportedDimension { m, max: max_m });
    }
    let mut gens = translations(m);
    match kind {
        SpaceKind::Isometry => gens.extend(rotations(m)),
        SpaceKind::Affine | SpaceKind::Projective => {
            for a in 0..=m {
                for b in 0..=m {
                    gens.push(unit(m, b, y(a)));
                }
            }
            if kind == SpaceKind::Projective {
                for a in 0..=m {
                    gens.push(yfield(euler(m).iter().map(|e| &y(a) * e).collect()));
                }
            }
        }
        SpaceKind::Conformal => {
            gens.extend(rotations(m));
            gens.push(yfield(euler(m)));
            let norm = (0..=m).fold(RatExpr::zero(), |acc, i| acc.add(&y(i).pow(2)));
            for j in 0..=m {
                let comps = (0..=m)
                    .map(|i| {
                        if i == j {
                            y(j).pow(2).scale(&rat(2, 1)).sub(&norm)
                        } else {
                            (&y(j) * &y(i)).scale(&rat(2, 1))
                        }
                    })
                    .collect();
                gens.push(yfield(comps));
            }
        }
    }
    let mut params = BTreeMap::new();
    params.insert("m".to_string(), RatExpr::int(m as i64));
    Ok(AlgebraSpec {
        name: kind.as_str().to_string(),
        m,
        params,
        expected_dim: kind.expected_dim(m),
        generators: gens,
        atoms: AtomTable::new(),
    })
}

/// `{∂u, ∂x + u∂u, u∂x + (u²/2)∂u}`, a realization of `sl(2)`.
pub fn sl2_realization() -> AlgebraSpec {
    AlgebraSpec::new(
        "sl2",
        1,
        vec![
            plane(c(0), c(1)),
            plane(c(1), u()),
            plane(u(), u().pow(2).scale(&rat(1, 2))),
        ],
    )
}

/// `{∂x, ∂u, x∂u, x∂x + 2u∂u}`.
pub fn third_order_example() -> AlgebraSpec {
    AlgebraSpec::new(
        "example3",
        1,
        vec![plane(c(1), c(0)), plane(c(0), c(1)), plane(c(0), x()), plane(x(), u().scale(&rat(2, 1)))],
    )
}

/// Atom `E` standing for `e^u`.
pub fn exp_u_atom() -> AtomDef {
    let def = AtomDef::new("E").expect("valid name");
    let e = RatExpr::var(def.var());
    def.with_rule(VarId::jet(1, 0), e)
}

/// Two-dimensional non-abelian realizations with `[X, Y] = X`:
/// `1 -> {e^u ∂u, -∂u}`, `2 -> {∂u, ∂x + u∂u}`.
pub fn two_dim_realization(which: u8) -> Result<AlgebraSpec> {
    match which {
        1 => {
            let atoms = AtomTable::from_defs(vec![exp_u_atom()])?;
            let e = RatExpr::var(VarId::atom("E")?);
            let mut alg = AlgebraSpec::new("real1", 1, vec![plane(c(0), e), plane(c(0), c(-1))]);
            alg.atoms = atoms;
            Ok(alg)
        }
        2 => Ok(AlgebraSpec::new("real2", 1, vec![plane(c(0), c(1)), plane(c(1), u())])),
        _ => Err(Error::UnknownAlgebraId(format!("real{which}"))),
    }
}

/// Resolves a catalog id: `I`..`VIII`, `isometry|affine|conformal|projective` (with `m`),
/// `sl2`, `example3`, `real1`, `real2`.
pub fn algebra_by_id(id: &str, m: usize, alpha: Option<RatExpr>) -> Result<AlgebraSpec> {
    if let Ok(p) = id.parse::<PrimitiveId>() {
        return primitive_algebra(p, alpha);
    }
    if alpha.is_some() {
        return Err(Error::InvalidArgument(format!("alpha only applies to algebra I, not {id}")));
    }
    if let Ok(k) = id.parse::<SpaceKind>() {
        return space_algebra(k, m);
    }
    match id {
        "sl2" => Ok(sl2_realization()),
        "example3" => Ok(third_order_example()),
        "real1" => two_dim_realization(1),
        "real2" => two_dim_realization(2),
        _ => Err(Error::UnknownAlgebraId(id.to_string())),
    }
}

/// Atom `w` standing for `e^{-2x}`.
pub fn w_atom() -> AtomDef {
    exp_atom("w", -2).expect("valid name")
}

/// `u_xx = u_x/2 + K w u_x^3` with `w = e^{-2x}` and symbolic `K`.
pub fn family_ode() -> NormalFormODE {
    let atoms = AtomTable::from_defs(vec![w_atom()]).expect("single atom");
    let u1 = RatExpr::var(VarId::jet(1, 1));
    let k = RatExpr::var(VarId::param("K").unwrap());
    let w = RatExpr::var(VarId::atom("w").unwrap());
    let rhs = u1.scale(&rat(1, 2)).add(&(&(&k * &w) * &u1.pow(3)));
    NormalFormODE::new(1, 2, vec![rhs], atoms).expect("normal form")
}

/// `u^k_xx = c_k` for every `k`.
pub fn second_order_system(m: usize, values: &[BigRational]) -> Result<NormalFormODE> {
    let rhs = (0..m)
        .map(|k| RatExpr::rational(values.get(k).cloned().unwrap_or_else(|| rat(0, 1))))
        .collect();
    NormalFormODE::new(m, 2, rhs, AtomTable::new())
}

/// Straight lines: `u^k_xx = 0`.
pub fn lines_ode(m: usize) -> Result<NormalFormODE> {
    second_order_system(m, &[])
}

/// Circles: `(1 + Σ_j (u^j_x)^2) u^k_xxx = 3 u^k_xx Σ_j u^j_x u^j_xx`.
pub fn circles_ode(m: usize) -> Result<NormalFormODE> {
    let j = |i, k| RatExpr::var(VarId::jet(i, k));
    let norm = (1..=m).fold(RatExpr::one(), |acc, i| acc.add(&j(i, 1).pow(2)));
    let dot = (1..=m).fold(RatExpr::zero(), |acc, i| acc.add(&(&j(i, 1) * &j(i, 2))));
    let rhs = (1..=m)
        .map(|k| (&j(k, 2) * &dot).scale(&rat(3, 1)).div(&norm))
        .collect::<Result<Vec<_>>>()?;
    NormalFormODE::new(m, 3, rhs, AtomTable::new())
}

const AFFINE_ORDER5: &str = include_str!("data/affine_order5.ode");
const PROJECTIVE_ORDER6: &str = include_str!("data/projective_order6.ode");

/// Fifth-order system in two dependent variables invariant under the affine algebra of `R^3`.
pub fn affine_ode() -> NormalFormODE {
    parse::parse_ode_file(AFFINE_ORDER5).expect("embedded data parses").ode
}

/// Sixth-order system in two dependent variables invariant under the projective algebra of `R^3`.
pub fn projective_ode() -> NormalFormODE {
    parse::parse_ode_file(PROJECTIVE_ORDER6).expect("embedded data parses").ode
}

pub fn affine_ode_source() -> &'static str {
    AFFINE_ORDER5
}

pub fn projective_ode_source() -> &'static str {
    PROJECTIVE_ORDER6
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::jetspace::span_coordinates;

    #[test]
    fn primitive_dimensions_and_closure() {
        for id in PrimitiveId::ALL {
            let alg = primitive_algebra(id, None).unwrap();
            assert_eq!(alg.dim(), id.expected_dim(), "{id}");
            let rep = alg.closure().unwrap();
            assert!(rep.closed, "{id}");
            assert!(rep.satisfies_jacobi(), "{id}");
        }
        let zero = primitive_algebra(PrimitiveId::I, Some(RatExpr::zero())).unwrap();
        assert_eq!(zero.generators[2], plane(u(), x().neg()));
        assert!(primitive_algebra(PrimitiveId::II, Some(RatExpr::one())).is_err());
        assert!(matches!("IX".parse::<PrimitiveId>(), Err(Error::UnknownAlgebraId(_))));
    }

    #[test]
    fn space_dimensions_and_closure() {
        for kind in SpaceKind::ALL {
            for m in 1..=3 {
                let alg = space_algebra(kind, m).unwrap();
                assert_eq!(alg.dim(), alg.expected_dim, "{kind:?} {m}");
                assert!(alg.closure().unwrap().closed, "{kind:?} {m}");
            }
        }
        let dims: Vec<usize> = SpaceKind::ALL.iter().map(|k| k.expected_dim(2)).collect();
        assert_eq!(dims, vec![6, 12, 10, 15]);
        assert!(matches!(
            space_algebra(SpaceKind::Affine, 5),
            Err(Error::UnsupportedDimension { m: 5, max: 4 })
        ));
    }

    #[test]
    fn containments() {
        let inside = |small: &AlgebraSpec, big: &AlgebraSpec| {
            small.generators.iter().all(|g| span_coordinates(&big.generators, g).unwrap().is_some())
        };
        for m in 1..=3 {
            let iso = space_algebra(SpaceKind::Isometry, m).unwrap();
            let aff = space_algebra(SpaceKind::Affine, m).unwrap();
            let conf = space_algebra(SpaceKind::Conformal, m).unwrap();
            let proj = space_algebra(SpaceKind::Projective, m).unwrap();
            assert!(inside(&iso, &conf) && inside(&iso, &aff) && inside(&aff, &proj));
            assert!(!inside(&aff, &conf));
        }
        let p = |id| primitive_algebra(id, None).unwrap();
        assert!(inside(&p(PrimitiveId::IV), &p(PrimitiveId::VII)));
        assert!(inside(&p(PrimitiveId::VI), &p(PrimitiveId::VIII)));
        // the conformal algebra of the plane is algebra VII
        let conf1 = space_algebra(SpaceKind::Conformal, 1).unwrap();
        assert!(inside(&conf1, &p(PrimitiveId::VII)) && inside(&p(PrimitiveId::VII), &conf1));
    }

    #[test]
    fn realizations() {
        for alg in [sl2_realization(), third_order_example(), two_dim_realization(1).unwrap()] {
            assert!(alg.closure().unwrap().closed, "{}", alg.name);
        }
        let r1 = two_dim_realization(1).unwrap();
        let rep = r1.closure().unwrap();
        let cst = rep.constants.unwrap();
        assert_eq!(cst[0][1], vec![RatExpr::one(), RatExpr::zero()]);
    }
}
