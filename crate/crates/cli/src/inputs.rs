//! Resolving `--algebra`, `--ode` and expression arguments into core values.

use std::path::Path;

use jetlie_core::catalog::{
    affine_ode, algebra_by_id, circles_ode, family_ode, lines_ode, projective_ode, AlgebraSpec,
};
use jetlie_core::expr::{Poly, RatExpr, VarId};
use jetlie_core::integrals::NormalFormODE;
use jetlie_core::jetspace::VectorField;
use jetlie_core::parse::{declarations_scope, parse_algebra_file, parse_expression, parse_ode_file, parse_poly, Scope};
use jetlie_core::{Error, Result};

use crate::Cli;

/// Error tagged with the file it came from, for diagnostics.
#[derive(Debug)]
pub struct Located {
    pub source: Option<String>,
    /// Text the error span indexes into, when known.
    pub text: Option<String>,
    pub error: Error,
}

impl From<Error> for Located {
    fn from(error: Error) -> Self {
        Located { source: None, text: None, error }
    }
}

pub type CliResult<T> = std::result::Result<T, Located>;

fn read(path: &str) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| Located {
        source: Some(path.to_string()),
        text: None,
        error: Error::InvalidArgument(format!("cannot read {path}: {e}")),
    })
}

fn in_file<T>(path: &str, text: &str, r: Result<T>) -> CliResult<T> {
    r.map_err(|error| Located { source: Some(path.to_string()), text: Some(text.to_string()), error })
}

fn in_arg<T>(text: &str, r: Result<T>) -> CliResult<T> {
    r.map_err(|error| Located { source: None, text: Some(text.to_string()), error })
}

/// Built-in equations: `builtin:lines`, `builtin:circles` (both use `--m`), `builtin:affine`,
/// `builtin:projective`, `builtin:family`; anything else is read as an ODE file.
pub fn load_ode(spec: &str, m: Option<usize>) -> CliResult<NormalFormODE> {
    if let Some(name) = spec.strip_prefix("builtin:") {
        let m = m.unwrap_or(2);
        return Ok(match name {
            "lines" => lines_ode(m)?,
            "circles" => circles_ode(m)?,
            "affine" => affine_ode(),
            "projective" => projective_ode(),
            "family" => family_ode(),
            _ => return Err(Error::InvalidArgument(format!("unknown built-in equation `{name}`")).into()),
        });
    }
    let text = read(spec)?;
    Ok(in_file(spec, &text, parse_ode_file(&text))?.ode)
}

pub struct LoadedAlgebra {
    pub spec: AlgebraSpec,
    pub warnings: Vec<String>,
}

pub fn load_algebra(cli: &Cli, default_m: Option<usize>) -> CliResult<LoadedAlgebra> {
    let Some(id) = cli.algebra.as_deref() else {
        return Err(Error::InvalidArgument("--algebra is required".into()).into());
    };
    if Path::new(id).is_file() {
        if cli.alpha.is_some() {
            return Err(Error::InvalidArgument("--alpha only applies to catalog algebra I".into()).into());
        }
        let text = read(id)?;
        let parsed = in_file(id, &text, parse_algebra_file(&text))?;
        return Ok(LoadedAlgebra { spec: parsed.spec, warnings: parsed.warnings });
    }
    let alpha = match cli.alpha.as_deref() {
        None => None,
        Some(a) => {
            let v = expr(a, &Scope::new(1, 0))?;
            if v.constant_value().is_none() {
                return Err(Error::InvalidArgument(format!("--alpha expects a rational number, got `{a}`")).into());
            }
            Some(v)
        }
    };
    let m = cli.m.or(default_m).unwrap_or(2);
    Ok(LoadedAlgebra { spec: algebra_by_id(id, m, alpha)?, warnings: Vec::new() })
}

/// Scope for user expressions: command-line declarations plus the algebra's atoms and parameters.
pub fn expression_scope(cli: &Cli, alg: &AlgebraSpec, max_order: usize) -> CliResult<Scope> {
    let mut scope = declarations_scope(alg.m, max_order, &cli.params, &cli.atoms)?;
    scope.atoms = scope.atoms.merge(&alg.atoms)?;
    for v in alg.params.values().flat_map(|v| v.vars()) {
        if let VarId::Parameter(n) = v {
            scope.params.insert(n);
        }
    }
    Ok(scope)
}

pub fn expr(text: &str, scope: &Scope) -> CliResult<RatExpr> {
    in_arg(text, parse_expression(text, scope))
}

pub fn poly(text: &str, scope: &Scope) -> CliResult<Poly> {
    in_arg(text, parse_poly(text, scope))
}

/// `xi | phi_1 | ... | phi_m`.
pub fn field(text: &str, scope: &Scope) -> CliResult<VectorField> {
    let mut point = scope.clone();
    point.max_order = 0;
    let comps = text.split('|').map(|c| expr(c, &point)).collect::<CliResult<Vec<_>>>()?;
    if comps.len() != scope.m + 1 {
        return Err(Error::WrongArity { expected: (scope.m + 1).to_string(), got: comps.len() }.into());
    }
    let mut it = comps.into_iter();
    let xi = it.next().expect("nonempty");
    Ok(VectorField::new(xi, it.collect())?)
}

/// Comma-separated 1-based generator indices.
pub fn indices(text: &str, n: usize) -> CliResult<Vec<usize>> {
    text.split(',')
        .map(|t| {
            let t = t.trim();
            match t.parse::<usize>() {
                Ok(i) if i >= 1 && i <= n => Ok(i - 1),
                _ => Err(Error::InvalidArgument(format!("`{t}` is not a generator index in 1..={n}")).into()),
            }
        })
        .collect()
}

/// `<expr> : <value>` pairs used by `rel-invariant`.
pub fn pair(text: &str) -> CliResult<(&str, &str)> {
    text.rsplit_once(':')
        .map(|(a, b)| (a.trim(), b.trim()))
        .ok_or_else(|| Error::InvalidArgument(format!("expected `<expr> : <value>`, got `{text}`")).into())
}
