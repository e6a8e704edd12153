//! Text front end: expressions, ODE files and algebra files.
//!
//! Expressions use `x`, `u<i>` / `u<i>_<k>` for jets, plus atoms and parameters declared
//! in file headers. Precedence: `^` (nonnegative integer exponent) > unary `-` > `* /` > `+ -`.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::catalog::AlgebraSpec;
use crate::error::{Error, Result, SourceSpan};
use crate::expr::{AtomDef, AtomTable, Name, Poly, RatExpr, VarId};
use crate::integrals::NormalFormODE;
use crate::jetspace::{closure_check, JetContext, StructureReport, VectorField};

/// Largest jet order accepted in files.
pub const FILE_MAX_ORDER: usize = 64;

/// Names and bounds an expression may refer to.
#[derive(Clone, Debug)]
pub struct Scope {
    pub m: usize,
    pub max_order: usize,
    pub atoms: AtomTable,
    pub params: BTreeSet<Name>,
    /// Atom being declared; its rules may mention it before it enters the table.
    pending: Option<Name>,
}

impl Scope {
    pub fn new(m: usize, max_order: usize) -> Self {
        Scope { m, max_order, atoms: AtomTable::new(), params: BTreeSet::new(), pending: None }
    }

    pub fn from_context(ctx: &JetContext) -> Self {
        Scope { atoms: ctx.atoms.clone(), ..Scope::new(ctx.m, ctx.max_order) }
    }

    pub fn with_params(mut self, names: &[&str]) -> Result<Self> {
        for n in names {
            self.params.insert(Name::new(n)?);
        }
        Ok(self)
    }

    pub fn with_atoms(mut self, atoms: AtomTable) -> Self {
        self.atoms = atoms;
        self
    }

    fn resolve(&self, name: &str, span: SourceSpan) -> Result<VarId> {
        if name == "x" {
            return Ok(VarId::Independent);
        }
        if let Some((dep, order)) = jet_name(name) {
            if dep == 0 || dep > self.m {
                return Err(Error::UnknownVariable { name: name.to_string(), span });
            }
            if order > self.max_order {
                return Err(Error::OrderOverflow { needed: order, max: self.max_order });
            }
            return Ok(VarId::jet(dep, order));
        }
        let unknown = || Error::UnknownVariable { name: name.to_string(), span };
        let n = Name::new(name).map_err(|_| unknown())?;
        if self.atoms.get(name).is_some() || self.pending == Some(n) {
            return Ok(VarId::Atom(n));
        }
        if self.params.contains(&n) {
            return Ok(VarId::Parameter(n));
        }
        Err(unknown())
    }
}

/// `u<i>` or `u<i>_<k>`.
fn jet_name(s: &str) -> Option<(usize, usize)> {
    let rest = s.strip_prefix('u')?;
    let (dep, order) = match rest.split_once('_') {
        Some((d, k)) => (d, k),
        None => (rest, "0"),
    };
    let digits = |t: &str| !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit());
    if !digits(dep) || !digits(order) {
        return None;
    }
    Some((dep.parse().ok()?, order.parse().ok()?))
}

fn reserved(name: &str) -> bool {
    name == "x" || jet_name(name).is_some() || matches!(name, "VF" | "atom" | "param" | "m" | "name")
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Op(char),
    End,
}

struct Lexer<'a> {
    text: &'a str,
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn new(text: &'a str) -> Result<Self> {
        let bytes = text.as_bytes();
        let mut toks = Vec::new();
        let mut i = 0;
        while i < bytes.len() {
            let b = bytes[i];
            if b.is_ascii_whitespace() {
                i += 1;
            } else if b.is_ascii_alphabetic() {
                let s = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                toks.push((Tok::Ident(text[s..i].to_string()), s, i));
            } else if b.is_ascii_digit() {
                let s = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                toks.push((Tok::Int(text[s..i].parse().expect("digits")), s, i));
            } else if b"+-*/^()".contains(&b) {
                toks.push((Tok::Op(b as char), i, i + 1));
                i += 1;
            } else {
                let ch = text[i..].chars().next().expect("in bounds");
                return Err(Error::Syntax {
                    message: format!("unexpected character `{ch}`"),
                    span: SourceSpan::locate(text, i, i + ch.len_utf8()),
                });
            }
        }
        toks.push((Tok::End, text.len(), text.len()));
        Ok(Lexer { text, toks, pos: 0 })
    }

    fn peek(&self) -> &(Tok, usize, usize) {
        &self.toks[self.pos]
    }

    fn next(&mut self) -> (Tok, usize, usize) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn span(&self, s: usize, e: usize) -> SourceSpan {
        SourceSpan::locate(self.text, s, e)
    }

    fn syntax(&self, message: impl Into<String>, s: usize, e: usize) -> Error {
        Error::Syntax { message: message.into(), span: self.span(s, e) }
    }
}

const UNARY_BP: u8 = 5;

fn infix_bp(op: char) -> Option<(u8, u8)> {
    match op {
        '+' | '-' => Some((1, 2)),
        '*' | '/' => Some((3, 4)),
        '^' => Some((7, 8)),
        _ => None,
    }
}

fn parse_bp(lx: &mut Lexer, scope: &Scope, min_bp: u8) -> Result<RatExpr> {
    let (tok, s, e) = lx.next();
    let mut lhs = match tok {
        Tok::Int(n) => RatExpr::rational(BigRational::from_integer(n)),
        Tok::Ident(name) => RatExpr::var(scope.resolve(&name, lx.span(s, e))?),
        Tok::Op('(') => {
            let inner = parse_bp(lx, scope, 0)?;
            match lx.next() {
                (Tok::Op(')'), _, _) => inner,
                (_, s2, e2) => return Err(lx.syntax("expected `)`", s2, e2)),
            }
        }
        Tok::Op('-') => parse_bp(lx, scope, UNARY_BP)?.neg(),
        Tok::End => return Err(lx.syntax("unexpected end of input", s, e)),
        Tok::Op(c) => return Err(lx.syntax(format!("unexpected `{c}`"), s, e)),
    };
    loop {
        let (tok, s, e) = lx.peek().clone();
        let op = match tok {
            Tok::Op(c) if infix_bp(c).is_some() => c,
            Tok::End | Tok::Op(')') => break,
            _ => return Err(lx.syntax("expected an operator", s, e)),
        };
        let (l, r) = infix_bp(op).expect("checked");
        if l < min_bp {
            break;
        }
        lx.next();
        if op == '^' {
            let (t2, s2, e2) = lx.next();
            let Tok::Int(n) = t2 else {
                return Err(lx.syntax("exponent must be a nonnegative integer literal", s2, e2));
            };
            let n: u32 = n.try_into().map_err(|_| lx.syntax("exponent too large", s2, e2))?;
            lhs = lhs.pow(n);
            continue;
        }
        if matches!(lx.peek().0, Tok::End) {
            return Err(lx.syntax(format!("missing operand after `{op}`"), s, e));
        }
        let start = lx.peek().1;
        let rhs = parse_bp(lx, scope, r)?;
        lhs = match op {
            '+' => lhs.add(&rhs),
            '-' => lhs.sub(&rhs),
            '*' => lhs.mul(&rhs),
            '/' => {
                let end = lx.toks[lx.pos.saturating_sub(1)].2;
                lhs.div(&rhs).map_err(|_| lx.syntax("division by zero", start, end))?
            }
            _ => unreachable!(),
        };
    }
    Ok(lhs)
}

/// Parses an expression in the given scope, reducing modulo atom relations.
pub fn parse_expression(text: &str, scope: &Scope) -> Result<RatExpr> {
    let mut lx = Lexer::new(text)?;
    let e = parse_bp(&mut lx, scope, 0)?;
    match lx.peek() {
        (Tok::End, _, _) => Ok(scope.atoms.reduce(&e)),
        (_, s, e2) => Err(lx.syntax("unexpected trailing input", *s, *e2)),
    }
}

/// Parses `text` as it sits at byte `base` of `full`, re-anchoring spans on error.
fn parse_at(text: &str, base: usize, full: &str, scope: &Scope) -> Result<RatExpr> {
    parse_expression(text, scope).map_err(|e| match e {
        Error::Syntax { message, span } => Error::Syntax { message, span: span.offset(full, base) },
        Error::UnknownVariable { name, span } => {
            Error::UnknownVariable { name, span: span.offset(full, base) }
        }
        other => other,
    })
}

/// Header lines shared by ODE and algebra files.
#[derive(Clone, Debug)]
struct Header {
    name: Option<String>,
    m: Option<usize>,
    params: Vec<Name>,
    atoms: AtomTable,
}

/// A line with its byte offset in the file, comments and surrounding blanks removed.
fn lines(text: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut offset = 0;
    for raw in text.split_inclusive('\n') {
        let body = raw.split('#').next().unwrap_or("");
        let trimmed = body.trim_end();
        let lead = trimmed.len() - trimmed.trim_start().len();
        if !trimmed.trim().is_empty() {
            out.push((offset + lead, trimmed.trim_start()));
        }
        offset += raw.len();
    }
    out
}

fn err_at(full: &str, start: usize, len: usize, message: impl Into<String>) -> Error {
    Error::Syntax { message: message.into(), span: SourceSpan::locate(full, start, start + len) }
}

fn scope_of(h: &Header) -> Scope {
    let mut s = Scope::new(h.m.unwrap_or(1), FILE_MAX_ORDER);
    s.atoms = h.atoms.clone();
    s.params = h.params.iter().copied().collect();
    s
}

/// Consumes a header line; `Ok(false)` if the line is not a header.
fn header_line(h: &mut Header, full: &str, off: usize, line: &str) -> Result<bool> {
    let word_end = line.find(|c: char| !c.is_ascii_alphanumeric() && c != '_').unwrap_or(line.len());
    let word = &line[..word_end];
    let rest = &line[word_end..];
    let rest_off = off + word_end;
    match word {
        "m" | "name" if rest.trim_start().starts_with('=') => {
            let eq = rest.find('=').expect("checked");
            let value = rest[eq + 1..].trim();
            if word == "name" {
                h.name = Some(value.to_string());
                return Ok(true);
            }
            if h.m.is_some() {
                return Err(err_at(full, off, line.len(), "m declared twice"));
            }
            let m: usize = value
                .parse()
                .ok()
                .filter(|m| *m >= 1)
                .ok_or_else(|| err_at(full, off, line.len(), "m must be a positive integer"))?;
            h.m = Some(m);
            Ok(true)
        }
        "param" => {
            for (i, n) in rest.split([',', ' ']).filter(|s| !s.is_empty()).enumerate() {
                let p = rest.find(n).unwrap_or(0) + rest_off;
                let _ = i;
                if reserved(n) {
                    return Err(err_at(full, p, n.len(), format!("`{n}` is a reserved name")));
                }
                let name = Name::new(n).map_err(|_| err_at(full, p, n.len(), "invalid parameter name"))?;
                if h.params.contains(&name) || h.atoms.get(n).is_some() {
                    return Err(err_at(full, p, n.len(), format!("`{n}` declared twice")));
                }
                h.params.push(name);
            }
            Ok(true)
        }
        "atom" => {
            if h.m.is_none() {
                return Err(err_at(full, off, line.len(), "`m = ...` must precede atom declarations"));
            }
            let colon = rest
                .find(':')
                .ok_or_else(|| err_at(full, off, line.len(), "expected `atom <name> : ...`"))?;
            let n = rest[..colon].trim();
            let npos = rest_off + rest.find(n).unwrap_or(0);
            if reserved(n) || h.params.iter().any(|p| p.as_str() == n) {
                return Err(err_at(full, npos, n.len(), format!("`{n}` cannot name an atom")));
            }
            let mut def = AtomDef::new(n).map_err(|_| err_at(full, npos, n.len(), "invalid atom name"))?;
            let mut scope = scope_of(h);
            scope.pending = Some(def.name);
            let body = &rest[colon + 1..];
            let mut pos = rest_off + colon + 1;
            let mut relation = None;
            for part in body.split(';') {
                let lead = part.len() - part.trim_start().len();
                let item = part.trim();
                let ipos = pos + lead;
                pos += part.len() + 1;
                if item.is_empty() {
                    continue;
                }
                let eq = item.find('=').ok_or_else(|| err_at(full, ipos, item.len(), "expected `=`"))?;
                let lhs = item[..eq].trim();
                let rhs = &item[eq + 1..];
                let rhs_off = ipos + eq + 1;
                let value = parse_at(rhs, rhs_off, full, &scope)?;
                if lhs == "relation" {
                    if !value.is_polynomial() {
                        return Err(err_at(full, rhs_off, rhs.len(), "relation must be a polynomial"));
                    }
                    relation = Some(value.num().clone());
                } else {
                    let var = lhs
                        .strip_prefix("d/d")
                        .ok_or_else(|| err_at(full, ipos, lhs.len(), "expected `d/d<var>` or `relation`"))?;
                    let v = scope.resolve(var.trim(), SourceSpan::locate(full, ipos, ipos + lhs.len()))?;
                    if !v.is_base() {
                        return Err(err_at(full, ipos, lhs.len(), "derivatives are taken along x and jets"));
                    }
                    def = def.with_rule(v, value);
                }
            }
            if let Some(rel) = relation {
                def = def.with_relation(rel)?;
            }
            h.atoms.add(def)?;
            Ok(true)
        }
        _ => Ok(false),
    }
}

/// Scope built from header-style declarations: `param` names and `atom` lines
/// (`<name> : d/d<var> = <expr> [; ...]`), as accepted on the command line.
pub fn declarations_scope(m: usize, max_order: usize, params: &[String], atoms: &[String]) -> Result<Scope> {
    let mut h = Header { name: None, m: Some(m), params: Vec::new(), atoms: AtomTable::new() };
    for p in params {
        let line = format!("param {p}");
        header_line(&mut h, &line, 0, &line)?;
    }
    for a in atoms {
        let line = format!("atom {a}");
        header_line(&mut h, &line, 0, &line)?;
    }
    let mut s = scope_of(&h);
    s.max_order = max_order;
    Ok(s)
}

/// Result of reading an ODE file.
#[derive(Clone, Debug)]
pub struct ParsedOdeFile {
    pub ode: NormalFormODE,
    pub params: Vec<Name>,
}

/// ODE file: headers (`m = <int>`, `param`, `atom`), then one line `u<i>_<r> = <expr>` per dependent.
pub fn parse_ode_file(text: &str) -> Result<ParsedOdeFile> {
    let mut h = Header { name: None, m: None, params: Vec::new(), atoms: AtomTable::new() };
    let mut eqs: BTreeMap<usize, (usize, RatExpr)> = BTreeMap::new();
    let mut order = None;
    for (off, line) in lines(text) {
        if header_line(&mut h, text, off, line)? {
            continue;
        }
        let m = h.m.ok_or_else(|| err_at(text, off, line.len(), "`m = ...` must come first"))?;
        let eq = line.find('=').ok_or_else(|| err_at(text, off, line.len(), "expected `u<i>_<r> = <expr>`"))?;
        let lhs = line[..eq].trim();
        let (dep, r) = jet_name(lhs)
            .filter(|(d, r)| *d >= 1 && *d <= m && *r >= 1)
            .ok_or_else(|| err_at(text, off, lhs.len().max(1), format!("`{lhs}` is not a jet variable u<i>_<r>")))?;
        if *order.get_or_insert(r) != r {
            return Err(err_at(text, off, lhs.len(), "all equations must have the same order"));
        }
        if eqs.contains_key(&dep) {
            return Err(err_at(text, off, lhs.len(), format!("second equation for `{lhs}`")));
        }
        let mut scope = scope_of(&h);
        scope.max_order = r;
        let value = parse_at(&line[eq + 1..], off + eq + 1, text, &scope)?;
        eqs.insert(dep, (off, value));
    }
    let m = h.m.ok_or_else(|| err_at(text, 0, 0, "missing `m = ...`"))?;
    let order = order.ok_or_else(|| err_at(text, text.len(), text.len(), "no equations"))?;
    if eqs.len() != m {
        return Err(err_at(text, text.len(), text.len(), format!("expected {m} equations, found {}", eqs.len())));
    }
    let rhs = eqs.into_values().map(|(_, e)| e).collect();
    Ok(ParsedOdeFile { ode: NormalFormODE::new(m, order, rhs, h.atoms)?, params: h.params })
}

/// Result of reading an algebra file.
#[derive(Clone, Debug)]
pub struct ParsedAlgebraFile {
    pub spec: AlgebraSpec,
    pub params: Vec<Name>,
    /// `None` when closure could not be decided (dependent or non-polynomial generators).
    pub closure: Option<StructureReport>,
    pub warnings: Vec<String>,
}

/// Algebra file: headers, then `VF <xi> | <phi_1> | ... | <phi_m>` lines.
pub fn parse_algebra_file(text: &str) -> Result<ParsedAlgebraFile> {
    let mut h = Header { name: None, m: None, params: Vec::new(), atoms: AtomTable::new() };
    let mut gens = Vec::new();
    for (off, line) in lines(text) {
        if let Some(body) = line.strip_prefix("VF").filter(|b| b.starts_with([' ', '\t'])) {
            let m = h.m.ok_or_else(|| err_at(text, off, line.len(), "`m = ...` must precede generators"))?;
            let mut scope = scope_of(&h);
            scope.max_order = 0;
            let mut comps = Vec::new();
            let mut pos = off + 2;
            for part in body.split('|') {
                comps.push(parse_at(part, pos, text, &scope)?);
                pos += part.len() + 1;
            }
            if comps.len() != m + 1 {
                return Err(err_at(text, off, line.len(), format!("expected {} components, found {}", m + 1, comps.len())));
            }
            let xi = comps.remove(0);
            gens.push(VectorField::new(xi, comps)?);
            continue;
        }
        if !gens.is_empty() {
            return Err(err_at(text, off, line.len(), "headers must precede generators"));
        }
        if !header_line(&mut h, text, off, line)? {
            return Err(err_at(text, off, line.len(), "expected a header or `VF` line"));
        }
    }
    let m = h.m.ok_or_else(|| err_at(text, 0, 0, "missing `m = ...`"))?;
    if gens.is_empty() {
        return Err(err_at(text, text.len(), text.len(), "no generators"));
    }
    let mut spec = AlgebraSpec::new(h.name.as_deref().unwrap_or("file"), m, gens);
    spec.atoms = h.atoms;
    for p in &h.params {
        spec.params.insert(p.to_string(), RatExpr::var(VarId::Parameter(*p)));
    }
    let mut warnings = Vec::new();
    let closure = match closure_check(&spec.generators, &spec.atoms) {
        Ok(rep) => {
            if let Some((a, b, w)) = &rep.witness {
                warnings.push(format!("not closed: [X{}, X{}] = {w} lies outside the span", a + 1, b + 1));
            }
            Some(rep)
        }
        Err(e @ (Error::DependentGenerators | Error::NonPolynomialGenerator { .. })) => {
            warnings.push(e.to_string());
            None
        }
        Err(e) => return Err(e),
    };
    Ok(ParsedAlgebraFile { spec, params: h.params, closure, warnings })
}

fn var_surface(v: VarId) -> String {
    v.to_string()
}

/// Writes an algebra in file format; parsing the output gives the same algebra back.
pub fn dump_algebra(alg: &AlgebraSpec) -> String {
    let mut out = format!("name = {}\nm = {}\n", alg.name, alg.m);
    let mut params: BTreeSet<Name> = BTreeSet::new();
    for g in &alg.generators {
        for c in g.components() {
            params.extend(c.vars().into_iter().filter_map(|v| match v {
                VarId::Parameter(n) => Some(n),
                _ => None,
            }));
        }
    }
    for a in alg.atoms.iter() {
        for r in a.rules.values() {
            params.extend(r.vars().into_iter().filter_map(|v| match v {
                VarId::Parameter(n) => Some(n),
                _ => None,
            }));
        }
    }
    for p in params {
        out.push_str(&format!("param {p}\n"));
    }
    for a in alg.atoms.iter() {
        let mut parts: Vec<String> = a
            .rules
            .iter()
            .map(|(v, r)| format!("d/d{} = {}", var_surface(*v), r.canonical_string()))
            .collect();
        if let Some(rel) = &a.relation {
            parts.push(format!("relation = {rel}"));
        }
        out.push_str(&format!("atom {} : {}\n", a.name, parts.join(" ; ")));
    }
    for g in &alg.generators {
        let comps: Vec<String> = g.components().iter().map(|c| c.canonical_string()).collect();
        out.push_str(&format!("VF {}\n", comps.join(" | ")));
    }
    out
}

/// Polynomial from text, for candidate equations.
pub fn parse_poly(text: &str, scope: &Scope) -> Result<Poly> {
    let e = parse_expression(text, scope)?;
    if e.is_polynomial() {
        Ok(e.num().clone())
    } else {
        Err(Error::InvalidArgument(format!("`{text}` is not a polynomial")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{primitive_algebra, sl2_realization, PrimitiveId};
    use crate::expr::{exp_atom, rat};

    fn scope() -> Scope {
        Scope::new(2, 6)
            .with_params(&["K"])
            .unwrap()
            .with_atoms(AtomTable::from_defs(vec![exp_atom("w", -2).unwrap()]).unwrap())
    }

    #[test]
    fn expressions() {
        let s = scope();
        let e = parse_expression("u1_2 - (1/2)*u1_1 - K*w*u1_1^3", &s).unwrap();
        let u1 = RatExpr::var(VarId::jet(1, 1));
        let k = RatExpr::var(VarId::param("K").unwrap());
        let w = RatExpr::var(VarId::atom("w").unwrap());
        let expect = RatExpr::var(VarId::jet(1, 2)).sub(&u1.scale(&rat(1, 2))).sub(&(&(&k * &w) * &u1.pow(3)));
        assert_eq!(e, expect);
        let x2 = parse_expression("x^2", &s).unwrap();
        assert_eq!(x2, RatExpr::var(VarId::Independent).pow(2));
        assert_eq!(parse_expression("-x^2", &s).unwrap(), x2.neg());
        assert_eq!(parse_expression("2^3/4", &s).unwrap(), RatExpr::rational(rat(2, 1)));
        assert_eq!(parse_expression("u2", &s).unwrap(), RatExpr::var(VarId::jet(2, 0)));
    }

    #[test]
    fn expression_errors() {
        let s = scope();
        match parse_expression("u1_1/", &s) {
            Err(Error::Syntax { span, .. }) => assert_eq!((span.start, span.end), (4, 5)),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_expression("u3", &s), Err(Error::UnknownVariable { .. })));
        assert!(matches!(parse_expression("q + 1", &s), Err(Error::UnknownVariable { .. })));
        assert!(matches!(parse_expression("u1_7", &s), Err(Error::OrderOverflow { needed: 7, max: 6 })));
        assert!(matches!(parse_expression("x^-1", &s), Err(Error::Syntax { .. })));
        assert!(matches!(parse_expression("1/(x-x)", &s), Err(Error::Syntax { .. })));
        assert!(matches!(parse_expression("(x", &s), Err(Error::Syntax { .. })));
        assert!(matches!(parse_expression("x y", &s), Err(Error::Syntax { .. })));
        assert!(matches!(parse_expression("x $", &s), Err(Error::Syntax { .. })));
    }

    #[test]
    fn ode_file() {
        let text = "# family\nm = 1\nparam K\natom w : d/dx = -2*w\nu1_2 = (1/2)*u1_1 + K*w*u1_1^3\n";
        let p = parse_ode_file(text).unwrap();
        assert_eq!(p.ode, crate::catalog::family_ode());
        let bad = "m = 1\nu1_2 = u1_2\n";
        assert!(matches!(parse_ode_file(bad), Err(Error::OrderOverflow { .. } | Error::NotNormalForm(_))));
        let e = parse_ode_file("m = 1\nu1_2 = 1 +\n").unwrap_err();
        assert_eq!(e.span().unwrap().line, 2);
    }

    #[test]
    fn algebra_files() {
        let text = "m = 1\nVF 0 | 1\nVF 1 | u1\nVF u1 | (1/2)*u1^2\n";
        let p = parse_algebra_file(text).unwrap();
        assert_eq!(p.spec.generators, sl2_realization().generators);
        assert!(p.closure.as_ref().unwrap().closed);
        let ex = parse_algebra_file("m = 1\nVF 1 | 0\nVF 0 | 1\nVF 0 | x\nVF x | 2*u1\n").unwrap();
        assert_eq!(ex.spec.dim(), 4);
        assert!(matches!(parse_algebra_file("m = 1\n# nothing\n"), Err(Error::Syntax { .. })));
        let open = parse_algebra_file("m = 1\nVF 1 | 0\nVF 0 | x^2\n").unwrap();
        assert_eq!(open.warnings.len(), 1);
        let atoms = parse_algebra_file("m = 1\natom E : d/du1 = E\nVF 0 | E\nVF 0 | -1\n").unwrap();
        assert!(atoms.closure.unwrap().closed);
        assert!(parse_algebra_file("m = 1\nVF 0 | u1_1\n").is_err());
    }

    #[test]
    fn dump_round_trip() {
        for alg in [
            primitive_algebra(PrimitiveId::I, None).unwrap(),
            primitive_algebra(PrimitiveId::VIII, None).unwrap(),
            crate::catalog::two_dim_realization(1).unwrap(),
        ] {
            let text = dump_algebra(&alg);
            let back = parse_algebra_file(&text).unwrap();
            assert_eq!(back.spec.generators, alg.generators);
            assert_eq!(back.spec.atoms, alg.atoms);
            assert_eq!(dump_algebra(&back.spec), text);
        }
    }
}
