//! Command reports: a JSON object with a fixed top-level shape and a text projection.

use std::time::Instant;

use serde_json::{json, Map, Value};

use jetlie_core::expr::{Poly, RatExpr};
use jetlie_core::remarkable::{Certificate, Minor};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
}

pub struct Report {
    pub command: String,
    pub inputs: Map<String, Value>,
    pub verdict: Option<String>,
    pub data: Map<String, Value>,
    /// Text rendering; empty means "derive from the data".
    pub text: Vec<String>,
    pub failed: bool,
    timings: Map<String, Value>,
    started: Instant,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            command: command.to_string(),
            inputs: Map::new(),
            verdict: None,
            data: Map::new(),
            text: Vec::new(),
            failed: false,
            timings: Map::new(),
            started: Instant::now(),
        }
    }

    pub fn input(&mut self, key: &str, value: impl Into<Value>) {
        self.inputs.insert(key.to_string(), value.into());
    }

    pub fn set(&mut self, key: &str, value: impl Into<Value>) {
        self.data.insert(key.to_string(), value.into());
    }

    pub fn line(&mut self, s: impl Into<String>) {
        self.text.push(s.into());
    }

    /// Extra entry under `timings`, which text output never shows.
    pub fn set_timing(&mut self, key: &str, value: Value) {
        self.timings.insert(key.to_string(), value);
    }

    pub fn verdict(&mut self, v: &str, failed: bool) {
        self.verdict = Some(v.to_string());
        self.failed |= failed;
    }

    pub fn to_json(&self) -> Value {
        let mut obj = Map::new();
        obj.insert("command".into(), json!(self.command));
        obj.insert("inputs".into(), Value::Object(self.inputs.clone()));
        obj.insert("verdict".into(), self.verdict.clone().map_or(Value::Null, Value::String));
        for (k, v) in &self.data {
            obj.insert(k.clone(), v.clone());
        }
        let ms = self.started.elapsed().as_secs_f64() * 1000.0;
        let mut t = self.timings.clone();
        t.insert("total_ms".into(), json!((ms * 1000.0).round() / 1000.0));
        obj.insert("timings".into(), Value::Object(t));
        Value::Object(obj)
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.to_json()).expect("serializable");
                s.push('\n');
                s
            }
            Format::Text => {
                let mut out = String::new();
                if self.text.is_empty() {
                    if let Some(v) = &self.verdict {
                        out.push_str(&format!("verdict: {v}\n"));
                    }
                    for (k, v) in &self.data {
                        out.push_str(&format!("{k}: {}\n", plain(v)));
                    }
                } else {
                    for l in &self.text {
                        out.push_str(l);
                        out.push('\n');
                    }
                }
                out
            }
        }
    }
}

fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

pub fn expr_value(e: &RatExpr) -> Value {
    json!(e.canonical_string())
}

pub fn poly_value(p: &Poly) -> Value {
    json!(p.to_string())
}

pub fn minor_value(m: &Minor) -> Value {
    json!({ "rows": m.rows, "cols": m.cols, "value": m.value.to_string() })
}

pub fn certificate_into(rep: &mut Report, c: &Certificate, labels: impl Fn(usize) -> String) {
    rep.verdict(c.verdict.name(), c.verdict.is_failed());
    rep.set("kind", c.kind.as_str());
    rep.set("candidate", c.candidate.iter().map(expr_value).collect::<Vec<_>>());
    rep.set("generic_rank", c.generic_rank);
    if let Some(r) = c.lower_rank {
        rep.set("secondary_rank", r);
    }
    if let Some(g) = &c.minor_gcd {
        rep.set("minor_gcd", poly_value(g));
    }
    rep.set("minors", c.minors.iter().map(minor_value).collect::<Vec<_>>());
    rep.set(
        "residuals",
        c.residuals
            .iter()
            .map(|r| json!({ "factor": r.factor.to_string(), "order": r.order }))
            .collect::<Vec<_>>(),
    );
    if let Some(e) = &c.equation {
        rep.set("equation", expr_value(e));
    }
    rep.set("offending", c.offending.iter().map(|i| labels(*i)).collect::<Vec<_>>());
    rep.set("notes", c.notes.clone());
    if let jetlie_core::remarkable::Verdict::Failed(why) = &c.verdict {
        rep.set("reasons", why.clone());
    }
    rep.line(format!("verdict: {}", c.verdict));
    rep.line(format!("generic rank: {}", c.generic_rank));
    if let Some(r) = c.lower_rank {
        rep.line(format!("secondary rank: {r}"));
    }
    if let Some(g) = &c.minor_gcd {
        rep.line(format!("gcd of maximal minors: {g}"));
    }
    for r in &c.residuals {
        let order = r.order.map_or("-".to_string(), |o| o.to_string());
        rep.line(format!("residual factor (order {order}): {}", r.factor));
    }
    if let Some(e) = &c.equation {
        rep.line(format!("equation: {} = 0", e.canonical_string()));
    }
    for n in &c.notes {
        rep.line(format!("note: {n}"));
    }
}
