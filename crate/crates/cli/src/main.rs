//! `jetlie`: command-line front end for prolongations, Lie determinants and symmetry certificates.

mod inputs;
mod repro;
mod report;

use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;

use jetlie_core::expr::render::render_factored;
use jetlie_core::expr::{AtomTable, Frac, Poly, RatExpr};
use jetlie_core::integrals::{check_symmetries, first_integral, symmetry_residuals, verify_first_integral};
use jetlie_core::jetspace::{lie_bracket, prolong, span_coordinates, JetContext, VectorField};
use jetlie_core::oracle::det_agrees_at_points;
use jetlie_core::parse::{declarations_scope, dump_algebra};
use jetlie_core::remarkable::{
    certify_hypersurface, certify_invariant_derivative, certify_system, generic_rank, invariant_residuals,
    lie_determinant, maximal_minors, prolongation_matrix, relative_invariant_residuals, Minor, ProlMatrix,
};
use jetlie_core::{Error, SourceSpan};

use inputs::{CliResult, Located};
use report::{certificate_into, expr_value, minor_value, Format, Report};

/// Number of random points used by the `--seed` oracle.
const ORACLE_POINTS: usize = 6;

#[derive(Parser, Debug)]
#[command(name = "jetlie", version, about = "Prolongations, Lie determinants and symmetry certificates for ODEs")]
pub struct Cli {
    #[arg(long, global = true, value_enum, default_value = "text")]
    pub format: Format,
    /// Catalog id (I..VIII, isometry, affine, conformal, projective, sl2, example3, real1, real2) or algebra file.
    #[arg(long, global = true)]
    pub algebra: Option<String>,
    /// Jet order r.
    #[arg(long, global = true)]
    pub order: Option<usize>,
    /// Number of dependent variables.
    #[arg(long, global = true)]
    pub m: Option<usize>,
    /// Value of the parameter of algebra I (rational); symbolic when omitted.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub alpha: Option<String>,
    /// Seed for the random-point cross-check of symbolic determinants.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Declare symbolic parameters: `--param K` or `--param "a, b"`.
    #[arg(long = "param", global = true)]
    pub params: Vec<String>,
    /// Declare an atom: `--atom "w : d/dx = -2*w"`.
    #[arg(long = "atom", global = true)]
    pub atoms: Vec<String>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Prolong a field (`--field "xi | phi1 | ..."`) or every generator of `--algebra`.
    Prolong {
        #[arg(long)]
        field: Option<String>,
    },
    /// Lie bracket of two fields or of two generators (`--pair 1,2`).
    Bracket {
        #[arg(long)]
        left: Option<String>,
        #[arg(long)]
        right: Option<String>,
        #[arg(long)]
        pair: Option<String>,
    },
    /// Closure of the generators and structure constants.
    Closure,
    /// Prolongation matrix.
    Matrix,
    /// Generic rank of the prolongation matrix with a witness minor.
    Rank,
    /// Determinant of a square prolongation matrix.
    Liedet,
    /// All k x k minors (default: maximal), optionally testing divisibility.
    Minors {
        #[arg(long)]
        size: Option<usize>,
        #[arg(long)]
        divisor: Option<String>,
    },
    /// Certificate for a hypersurface `--equation E` or a system `--ode FILE`.
    Certify34 {
        #[arg(long, allow_hyphen_values = true)]
        equation: Option<String>,
        #[arg(long)]
        ode: Option<String>,
    },
    /// Certificate that `D_x F = 0` is the associated equation of order `--order`.
    Certify37 {
        #[arg(long, allow_hyphen_values = true)]
        function: String,
    },
    /// Check that a function is annihilated by every prolonged generator.
    Invariant {
        #[arg(long, allow_hyphen_values = true)]
        function: String,
    },
    /// Relative invariant `prod base^exp * exp(sum coeff*term)`.
    RelInvariant {
        /// `base : exponent`, repeatable.
        #[arg(long, allow_hyphen_values = true)]
        factor: Vec<String>,
        /// `term : coefficient`, repeatable.
        #[arg(long, allow_hyphen_values = true)]
        log: Vec<String>,
    },
    /// Tangency of every generator to a normal-form equation.
    CheckSymmetry {
        /// ODE file or `builtin:lines|circles|affine|projective|family`.
        #[arg(long)]
        ode: String,
    },
    /// First integral from two sets of symmetry generators (1-based indices).
    FirstIntegral {
        #[arg(long)]
        ode: String,
        #[arg(long)]
        num: String,
        #[arg(long)]
        den: String,
    },
    /// Scripted reproduction of the main results.
    Repro {
        #[arg(value_enum)]
        target: repro::Target,
        /// Include the order-6 projective verification.
        #[arg(long)]
        extended: bool,
    },
    /// Print an algebra in file format.
    Dump,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(rep) => {
            print!("{}", rep.render(cli.format));
            if rep.failed {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            eprint!("{}", diagnostic(&e));
            ExitCode::from(2)
        }
    }
}

fn span_of(e: &Error) -> Option<SourceSpan> {
    match e {
        Error::Syntax { span, .. } | Error::UnknownVariable { span, .. } => Some(*span),
        _ => None,
    }
}

fn diagnostic(e: &Located) -> String {
    let mut out = match &e.source {
        Some(s) => format!("error: {s}: {}\n", e.error),
        None => format!("error: {}\n", e.error),
    };
    if let (Some(text), Some(span)) = (&e.text, span_of(&e.error)) {
        if let Some(line) = text.lines().nth(span.line - 1) {
            let width = span.end.saturating_sub(span.start).max(1);
            out.push_str(&format!("  | {line}\n  | {}{}\n", " ".repeat(span.column - 1), "^".repeat(width)));
        }
    }
    out
}

fn require_order(cli: &Cli) -> CliResult<usize> {
    cli.order.ok_or_else(|| Error::InvalidArgument("--order is required".into()).into())
}

fn algebra(cli: &Cli, default_m: Option<usize>, rep: &mut Report) -> CliResult<jetlie_core::catalog::AlgebraSpec> {
    let loaded = inputs::load_algebra(cli, default_m)?;
    for w in &loaded.warnings {
        eprintln!("warning: {w}");
    }
    rep.input("algebra", loaded.spec.name.clone());
    rep.input("m", loaded.spec.m);
    if !loaded.warnings.is_empty() {
        rep.set("warnings", loaded.warnings.clone());
    }
    Ok(loaded.spec)
}

fn run(cli: &Cli) -> CliResult<Report> {
    match &cli.command {
        Command::Prolong { field } => cmd_prolong(cli, field.as_deref()),
        Command::Bracket { left, right, pair } => cmd_bracket(cli, left.as_deref(), right.as_deref(), pair.as_deref()),
        Command::Closure => cmd_closure(cli),
        Command::Matrix => cmd_matrix(cli),
        Command::Rank => cmd_rank(cli),
        Command::Liedet => cmd_liedet(cli),
        Command::Minors { size, divisor } => cmd_minors(cli, *size, divisor.as_deref()),
        Command::Certify34 { equation, ode } => cmd_certify34(cli, equation.as_deref(), ode.as_deref()),
        Command::Certify37 { function } => cmd_certify37(cli, function),
        Command::Invariant { function } => cmd_invariant(cli, function),
        Command::RelInvariant { factor, log } => cmd_rel_invariant(cli, factor, log),
        Command::CheckSymmetry { ode } => cmd_check_symmetry(cli, ode),
        Command::FirstIntegral { ode, num, den } => cmd_first_integral(cli, ode, num, den),
        Command::Repro { target, extended } => Ok(repro::run(*target, *extended)?),
        Command::Dump => {
            let mut rep = Report::new("dump");
            let alg = algebra(cli, None, &mut rep)?;
            let text = dump_algebra(&alg);
            rep.set("file", text.clone());
            rep.text = text.lines().map(String::from).collect();
            Ok(rep)
        }
    }
}

fn labelled_row(mx: &ProlMatrix, row: &[RatExpr]) -> Vec<serde_json::Value> {
    row.iter()
        .enumerate()
        .map(|(j, c)| json!({ "variable": mx.column_label(j), "value": c.canonical_string() }))
        .collect()
}

fn cmd_prolong(cli: &Cli, field: Option<&str>) -> CliResult<Report> {
    let mut rep = Report::new("prolong");
    let r = require_order(cli)?;
    rep.input("order", r);
    let (fields, ctx) = match field {
        Some(text) => {
            let m = cli.m.unwrap_or(1);
            let scope = declarations_scope(m, 0, &cli.params, &cli.atoms)?;
            rep.input("field", text);
            rep.input("m", m);
            let f = inputs::field(text, &scope)?;
            (vec![f], JetContext::new(m, r)?.with_atoms(scope.atoms))
        }
        None => {
            let alg = algebra(cli, None, &mut rep)?;
            let ctx = alg.context(r)?;
            (alg.generators, ctx)
        }
    };
    let mut out = Vec::new();
    for (i, f) in fields.iter().enumerate() {
        let p = prolong(f, r, &ctx)?;
        let mx = ProlMatrix { m: ctx.m, order: r, rows: vec![p.row()] };
        rep.line(format!("X{}^({r}):", i + 1));
        for (j, c) in p.row().iter().enumerate() {
            rep.line(format!("  {}: {}", mx.column_label(j), c.canonical_string()));
        }
        out.push(json!({ "field": f.to_string(), "coefficients": labelled_row(&mx, &p.row()) }));
    }
    rep.set("prolongations", out);
    Ok(rep)
}

fn cmd_bracket(cli: &Cli, left: Option<&str>, right: Option<&str>, pair: Option<&str>) -> CliResult<Report> {
    let mut rep = Report::new("bracket");
    let (x, y, alg) = match (left, right, pair) {
        (Some(l), Some(r), None) => {
            let alg = if cli.algebra.is_some() { Some(algebra(cli, None, &mut rep)?) } else { None };
            let m = alg.as_ref().map_or(cli.m.unwrap_or(1), |a| a.m);
            let mut scope = declarations_scope(m, 0, &cli.params, &cli.atoms)?;
            if let Some(a) = &alg {
                scope = inputs::expression_scope(cli, a, 0)?;
            }
            rep.input("left", l);
            rep.input("right", r);
            (inputs::field(l, &scope)?, inputs::field(r, &scope)?, alg)
        }
        (None, None, Some(p)) => {
            let alg = algebra(cli, None, &mut rep)?;
            let idx = inputs::indices(p, alg.dim())?;
            if idx.len() != 2 {
                return Err(Error::InvalidArgument("--pair expects two indices `a,b`".into()).into());
            }
            rep.input("pair", p);
            (alg.generators[idx[0]].clone(), alg.generators[idx[1]].clone(), Some(alg))
        }
        _ => {
            return Err(Error::InvalidArgument("give --left and --right, or --pair with --algebra".into()).into())
        }
    };
    let mut atoms = AtomTable::new();
    if let Some(a) = &alg {
        atoms = a.atoms.clone();
    }
    atoms = atoms.merge(&declarations_scope(x.m(), 0, &cli.params, &cli.atoms)?.atoms)?;
    let b = lie_bracket(&x, &y, &atoms);
    rep.set("bracket", b.components().iter().map(|c| expr_value(c)).collect::<Vec<_>>());
    rep.line(format!("[X, Y] = {b}"));
    if let Some(a) = &alg {
        match span_coordinates(&a.generators, &b)? {
            Some(c) => {
                let terms: Vec<String> = c
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .map(|(k, v)| format!("({})*X{}", v.canonical_string(), k + 1))
                    .collect();
                let text = if terms.is_empty() { "0".to_string() } else { terms.join(" + ") };
                rep.line(format!("in the span: {text}"));
                rep.set("coordinates", c.iter().map(expr_value).collect::<Vec<_>>());
            }
            None => {
                rep.line("not in the span of the generators");
                rep.set("coordinates", serde_json::Value::Null);
            }
        }
    }
    Ok(rep)
}

fn cmd_closure(cli: &Cli) -> CliResult<Report> {
    let mut rep = Report::new("closure");
    let alg = algebra(cli, None, &mut rep)?;
    let s = alg.closure()?;
    rep.set("closed", s.closed);
    rep.set("dimension", alg.dim());
    if s.closed {
        rep.verdict("Closed", false);
        rep.line(format!("closed, dimension {}", alg.dim()));
        let c = s.constants.as_ref().expect("closed algebras carry constants");
        let mut table = Vec::new();
        for a in 0..c.len() {
            for b in (a + 1)..c.len() {
                let terms: Vec<String> = c[a][b]
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .map(|(k, v)| format!("({})*X{}", v.canonical_string(), k + 1))
                    .collect();
                if terms.is_empty() {
                    continue;
                }
                rep.line(format!("[X{}, X{}] = {}", a + 1, b + 1, terms.join(" + ")));
                table.push(json!({
                    "pair": [a + 1, b + 1],
                    "coefficients": c[a][b].iter().map(expr_value).collect::<Vec<_>>(),
                }));
            }
        }
        rep.set("structure_constants", table);
        rep.set("antisymmetric", s.is_antisymmetric());
        rep.set("jacobi", s.satisfies_jacobi());
    } else {
        rep.verdict("NotClosed", true);
        if let Some((a, b, w)) = &s.witness {
            rep.line(format!("not closed: [X{}, X{}] = {w} is outside the span", a + 1, b + 1));
            rep.set("witness", json!({ "pair": [a + 1, b + 1], "bracket": w.to_string() }));
        } else {
            rep.line("not closed");
        }
    }
    Ok(rep)
}

fn matrix_for(cli: &Cli, rep: &mut Report) -> CliResult<(jetlie_core::catalog::AlgebraSpec, ProlMatrix)> {
    let alg = algebra(cli, None, rep)?;
    let r = require_order(cli)?;
    rep.input("order", r);
    let mx = prolongation_matrix(&alg, r)?;
    Ok((alg, mx))
}

fn cmd_matrix(cli: &Cli) -> CliResult<Report> {
    let mut rep = Report::new("matrix");
    let (_, mx) = matrix_for(cli, &mut rep)?;
    let labels: Vec<String> = (0..mx.ncols()).map(|j| mx.column_label(j)).collect();
    rep.set("columns", labels.clone());
    let rows: Vec<Vec<String>> = mx.rows.iter().map(|r| r.iter().map(|c| c.canonical_string()).collect()).collect();
    rep.set("rows", rows);
    rep.line(format!("columns: {}", labels.join(", ")));
    rep.text.extend(mx.to_string().lines().map(String::from));
    Ok(rep)
}

fn submatrix(a: &[Vec<Poly>], rows: &[usize], cols: &[usize]) -> Vec<Vec<Poly>> {
    rows.iter().map(|&i| cols.iter().map(|&j| a[i][j].clone()).collect()).collect()
}

/// Random-point agreement of each minor with a numeric determinant; `None` without `--seed`.
fn oracle(cli: &Cli, rep: &mut Report, a: &[Vec<Poly>], minors: &[&Minor]) -> Option<bool> {
    let seed = cli.seed?;
    let ok = minors
        .iter()
        .all(|m| det_agrees_at_points(&submatrix(a, &m.rows, &m.cols), &m.value, ORACLE_POINTS, seed));
    rep.input("seed", seed);
    rep.set("oracle", json!({ "points": ORACLE_POINTS, "agrees": ok }));
    rep.line(format!("random-point check (seed {seed}): {}", if ok { "agrees" } else { "DISAGREES" }));
    if !ok {
        rep.verdict("OracleMismatch", true);
    }
    Some(ok)
}

fn cmd_rank(cli: &Cli) -> CliResult<Report> {
    let mut rep = Report::new("rank");
    let (_, mx) = matrix_for(cli, &mut rep)?;
    let rk = generic_rank(&mx);
    rep.set("generic_rank", rk.generic_rank);
    rep.set("parameter_dependent", rk.parameter_dependent);
    rep.line(format!("generic rank: {} ({}x{} matrix)", rk.generic_rank, mx.nrows(), mx.ncols()));
    if rk.parameter_dependent {
        rep.line("note: valid for generic parameter values");
    }
    match &rk.witness {
        Some(w) => {
            rep.set("witness", minor_value(w));
            rep.line(format!("witness minor rows {:?} cols {:?}: {}", w.rows, w.cols, w.value));
            oracle(cli, &mut rep, &mx.poly_rows(), &[w]);
        }
        None => rep.set("witness", serde_json::Value::Null),
    }
    Ok(rep)
}

fn cmd_liedet(cli: &Cli) -> CliResult<Report> {
    let mut rep = Report::new("liedet");
    let (_, mx) = matrix_for(cli, &mut rep)?;
    let d = lie_determinant(&mx)?;
    rep.set("determinant", d.value.to_string());
    rep.set("determinant_factored", render_factored(&d.value));
    rep.line(render_factored(&d.value));
    let n = mx.nrows();
    let all: Vec<usize> = (0..n).collect();
    let whole = Minor { rows: all.clone(), cols: all, value: d.value.clone() };
    oracle(cli, &mut rep, &mx.poly_rows(), &[&whole]);
    Ok(rep)
}

fn cmd_minors(cli: &Cli, size: Option<usize>, divisor: Option<&str>) -> CliResult<Report> {
    let mut rep = Report::new("minors");
    let (alg, mx) = matrix_for(cli, &mut rep)?;
    let k = size.unwrap_or(mx.nrows().min(mx.ncols()));
    rep.input("size", k);
    let minors = maximal_minors(&mx, k);
    rep.set("minors", minors.iter().map(minor_value).collect::<Vec<_>>());
    rep.line(format!("{} minors of size {k}", minors.len()));
    for m in &minors {
        rep.line(format!("rows {:?} cols {:?}: {}", m.rows, m.cols, m.value));
    }
    if let Some(text) = divisor {
        let scope = inputs::expression_scope(cli, &alg, mx.order)?;
        let d = inputs::poly(text, &scope)?;
        rep.input("divisor", text);
        let mut quotients = Vec::new();
        let mut all = true;
        for m in &minors {
            match m.value.exact_divide(&d) {
                Ok(q) => quotients.push(json!(q.to_string())),
                Err(_) => {
                    all = false;
                    quotients.push(serde_json::Value::Null);
                }
            }
        }
        rep.set("quotients", quotients);
        rep.line(format!("divisible by {d}: {}", if all { "all" } else { "not all" }));
        if all {
            rep.verdict("Divisible", false);
        } else {
            rep.verdict("NotDivisible", true);
        }
    }
    let refs: Vec<&Minor> = minors.iter().collect();
    oracle(cli, &mut rep, &mx.poly_rows(), &refs);
    Ok(rep)
}

fn cmd_certify34(cli: &Cli, equation: Option<&str>, ode: Option<&str>) -> CliResult<Report> {
    let mut rep = Report::new("certify34");
    let cert = match (equation, ode) {
        (Some(text), None) => {
            let alg = algebra(cli, None, &mut rep)?;
            let r = require_order(cli)?;
            rep.input("order", r);
            rep.input("equation", text);
            let scope = inputs::expression_scope(cli, &alg, r)?;
            let e = inputs::poly(text, &scope)?;
            certify_hypersurface(&alg, r, &e)?
        }
        (None, Some(path)) => {
            let ode = inputs::load_ode(path, cli.m)?;
            rep.input("ode", path);
            let alg = algebra(cli, Some(ode.m), &mut rep)?.with_extra_atoms(&ode.atoms)?;
            certify_system(&alg, &ode)?
        }
        _ => return Err(Error::InvalidArgument("give exactly one of --equation and --ode".into()).into()),
    };
    certificate_into(&mut rep, &cert, |i| format!("X{}", i + 1));
    Ok(rep)
}

fn cmd_certify37(cli: &Cli, function: &str) -> CliResult<Report> {
    let mut rep = Report::new("certify37");
    let alg = algebra(cli, None, &mut rep)?;
    let r = require_order(cli)?;
    rep.input("order", r);
    rep.input("function", function);
    let scope = inputs::expression_scope(cli, &alg, r)?;
    let f = inputs::expr(function, &scope)?;
    let alg = alg.with_extra_atoms(&scope.atoms)?;
    let cert = certify_invariant_derivative(&alg, r, &f)?;
    certificate_into(&mut rep, &cert, |i| format!("X{}", i + 1));
    Ok(rep)
}

fn frac_string(f: &Frac) -> String {
    f.to_ratexpr().map_or_else(|_| "<nonzero>".to_string(), |e| e.canonical_string())
}

/// Shared tail of the invariant-style checks: one residual per generator.
fn residual_report(rep: &mut Report, zero: Vec<bool>, values: Vec<String>, ok: &str, bad: &str) {
    let offending: Vec<usize> = zero.iter().enumerate().filter(|(_, z)| !**z).map(|(i, _)| i + 1).collect();
    rep.set(
        "residuals",
        values
            .iter()
            .enumerate()
            .map(|(i, v)| json!({ "generator": i + 1, "value": v }))
            .collect::<Vec<_>>(),
    );
    rep.set("offending", offending.iter().map(|i| format!("X{i}")).collect::<Vec<_>>());
    if offending.is_empty() {
        rep.verdict(ok, false);
        rep.line(format!("{ok}: annihilated by all {} generators", zero.len()));
    } else {
        rep.verdict(bad, true);
        rep.line(format!("{bad}: {} of {} generators give a nonzero residual", offending.len(), zero.len()));
        for i in offending {
            rep.line(format!("  X{i}: {}", values[i - 1]));
        }
    }
}

fn cmd_invariant(cli: &Cli, function: &str) -> CliResult<Report> {
    let mut rep = Report::new("invariant");
    let alg = algebra(cli, None, &mut rep)?;
    let r = require_order(cli)?;
    rep.input("order", r);
    rep.input("function", function);
    let scope = inputs::expression_scope(cli, &alg, r)?;
    let f = inputs::expr(function, &scope)?;
    let alg = alg.with_extra_atoms(&scope.atoms)?;
    let res = invariant_residuals(&alg, r, &f)?;
    let zero = res.iter().map(|x| alg.atoms.is_zero_frac(x)).collect();
    let values = res.iter().map(|x| if alg.atoms.is_zero_frac(x) { "0".into() } else { frac_string(x) }).collect();
    residual_report(&mut rep, zero, values, "Invariant", "NotInvariant");
    Ok(rep)
}

fn cmd_rel_invariant(cli: &Cli, factors: &[String], logs: &[String]) -> CliResult<Report> {
    let mut rep = Report::new("rel-invariant");
    let alg = algebra(cli, None, &mut rep)?;
    let r = require_order(cli)?;
    rep.input("order", r);
    rep.input("factors", factors.to_vec());
    rep.input("logs", logs.to_vec());
    if factors.is_empty() && logs.is_empty() {
        return Err(Error::InvalidArgument("give at least one --factor or --log".into()).into());
    }
    let scope = inputs::expression_scope(cli, &alg, r)?;
    let mut fs = Vec::new();
    for f in factors {
        let (base, exp) = inputs::pair(f)?;
        let e = inputs::expr(exp, &scope)?;
        let e = e
            .constant_value()
            .ok_or_else(|| Error::InvalidArgument(format!("exponent `{exp}` is not a rational number")))?;
        fs.push((inputs::expr(base, &scope)?, e));
    }
    let mut ls = Vec::new();
    for l in logs {
        let (term, coeff) = inputs::pair(l)?;
        ls.push((inputs::expr(term, &scope)?, inputs::expr(coeff, &scope)?));
    }
    let alg = alg.with_extra_atoms(&scope.atoms)?;
    let res = relative_invariant_residuals(&alg, r, &fs, &ls)?;
    let zero = res.iter().map(|x| alg.atoms.is_zero(x)).collect();
    let values = res.iter().map(|x| alg.atoms.reduce(x).canonical_string()).collect();
    residual_report(&mut rep, zero, values, "RelativeInvariant", "NotRelativeInvariant");
    Ok(rep)
}

fn cmd_check_symmetry(cli: &Cli, path: &str) -> CliResult<Report> {
    let mut rep = Report::new("check-symmetry");
    let ode = inputs::load_ode(path, cli.m)?;
    rep.input("ode", path);
    let alg = algebra(cli, Some(ode.m), &mut rep)?;
    let extra = declarations_scope(ode.m, 0, &cli.params, &cli.atoms)?.atoms;
    let atoms = alg.atoms.merge(&extra)?;
    let ok = check_symmetries(&ode, &alg.generators, &atoms)?;
    let n = ok.len();
    let bad: Vec<usize> = ok.iter().enumerate().filter(|(_, t)| !**t).map(|(i, _)| i + 1).collect();
    rep.set("tangent", ok.clone());
    rep.set("offending", bad.iter().map(|i| format!("X{i}")).collect::<Vec<_>>());
    if bad.is_empty() {
        rep.verdict("Tangent", false);
        rep.line(format!("all {n} generators tangent"));
    } else {
        rep.verdict("NotTangent", true);
        rep.line(format!("{} of {n} generators tangent", n - bad.len()));
        let merged = ode.atoms.merge(&atoms)?;
        for i in &bad {
            let res = symmetry_residuals(&ode, &alg.generators[i - 1], &atoms)?;
            let shown: Vec<String> =
                res.iter().map(|f| if merged.is_zero_frac(f) { "0".into() } else { frac_string(f) }).collect();
            rep.line(format!("  X{i} not tangent, residuals: {}", shown.join(" | ")));
        }
    }
    Ok(rep)
}

fn cmd_first_integral(cli: &Cli, path: &str, num: &str, den: &str) -> CliResult<Report> {
    let mut rep = Report::new("first-integral");
    let ode = inputs::load_ode(path, cli.m)?;
    rep.input("ode", path);
    rep.input("num", num);
    rep.input("den", den);
    let alg = algebra(cli, Some(ode.m), &mut rep)?;
    let pick = |text: &str| -> CliResult<Vec<VectorField>> {
        Ok(inputs::indices(text, alg.dim())?.into_iter().map(|i| alg.generators[i].clone()).collect())
    };
    let (nr, dr) = (pick(num)?, pick(den)?);
    let extra = declarations_scope(ode.m, 0, &cli.params, &cli.atoms)?.atoms;
    let atoms = alg.atoms.merge(&extra)?;
    let fi = first_integral(&ode, &nr, &dr, &atoms)?;
    let verified = verify_first_integral(&ode, &fi.value, &atoms)?;
    rep.set("integral", expr_value(&fi.value));
    rep.set("numerator_determinant", expr_value(&fi.numerator_det));
    rep.set("denominator_determinant", expr_value(&fi.denominator_det));
    rep.set("verified", verified);
    rep.set("warnings", fi.warnings.clone());
    rep.line(format!("I = {}", fi.value.canonical_string()));
    rep.line(format!("numerator determinant: {}", fi.numerator_det.canonical_string()));
    rep.line(format!("denominator determinant: {}", fi.denominator_det.canonical_string()));
    for w in &fi.warnings {
        rep.line(format!("warning: {w}"));
    }
    if verified {
        rep.verdict("Verified", false);
        rep.line("Z(I) = 0 verified");
    } else {
        rep.verdict("NotAnIntegral", true);
        rep.line("Z(I) does not vanish");
    }
    Ok(rep)
}
