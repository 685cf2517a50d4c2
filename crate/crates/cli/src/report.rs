//! Reports: one structure, rendered either as JSON or as plain text. Both
//! renderings are pure functions of the report, so identical inputs give
//! byte-identical output.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

pub const TOOL: &str = "calc";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Fail,
}

/// One verified relation. `residual` and `tol` are absent for purely
/// boolean checks.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub residual: Option<f64>,
    pub tol: Option<f64>,
    pub passed: bool,
}

impl Check {
    pub fn residual(name: impl Into<String>, residual: f64, tol: f64) -> Self {
        Self {
            name: name.into(),
            residual: Some(residual),
            tol: Some(tol),
            passed: residual <= tol,
        }
    }

    pub fn flag(name: impl Into<String>, passed: bool) -> Self {
        Self {
            name: name.into(),
            residual: None,
            tol: None,
            passed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub seed: u64,
    pub inputs: Vec<String>,
    pub expr: Option<String>,
    pub tolerances: BTreeMap<String, f64>,
    pub checks: Vec<Check>,
    pub status: Status,
    pub result: Value,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.status == Status::Ok
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} {}: {}", self.tool, self.version, self.command);
        let _ = writeln!(out, "seed: {}", self.seed);
        if !self.inputs.is_empty() {
            let _ = writeln!(out, "inputs: {}", self.inputs.join(", "));
        }
        if let Some(e) = &self.expr {
            let _ = writeln!(out, "expr: {e}");
        }
        if !self.tolerances.is_empty() {
            let _ = writeln!(out, "tolerances:");
            for (k, v) in &self.tolerances {
                let _ = writeln!(out, "  {k}: {v:e}");
            }
        }
        if !self.checks.is_empty() {
            let _ = writeln!(out, "checks:");
            let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
            for c in &self.checks {
                let mark = if c.passed { "pass" } else { "FAIL" };
                match (c.residual, c.tol) {
                    (Some(r), Some(t)) => {
                        let _ = writeln!(out, "  [{mark}] {:<width$}  residual {r:.3e}  tol {t:e}", c.name);
                    }
                    _ => {
                        let _ = writeln!(out, "  [{mark}] {}", c.name);
                    }
                }
            }
        }
        let _ = writeln!(out, "result:");
        render(&mut out, &self.result, 1);
        let status = match self.status {
            Status::Ok => "ok",
            Status::Fail => "fail",
        };
        let _ = writeln!(out, "status: {status}");
        out
    }
}

fn indent(out: &mut String, depth: usize) {
    for _ in 0..depth {
        out.push_str("  ");
    }
}

fn number(v: &Value) -> Option<f64> {
    v.as_f64()
}

fn scalar(v: &Value) -> String {
    match v {
        Value::Null => "null".into(),
        Value::Bool(b) => b.to_string(),
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.clone(),
        _ => v.to_string(),
    }
}

fn complex(re: f64, im: f64) -> String {
    if im == 0.0 {
        format!("{re}")
    } else if im < 0.0 {
        format!("{re}-{}i", -im)
    } else {
        format!("{re}+{im}i")
    }
}

/// `[re, im]`.
fn as_point(v: &Value) -> Option<String> {
    let a = v.as_array()?;
    match a.as_slice() {
        [re, im] => Some(complex(number(re)?, number(im)?)),
        _ => None,
    }
}

/// A matrix object `{re, im?}` as rows of complex numbers.
fn as_matrix(v: &Value) -> Option<Vec<String>> {
    let o = v.as_object()?;
    if !o.keys().all(|k| k == "re" || k == "im") {
        return None;
    }
    let re = o.get("re")?.as_array()?;
    let im = o.get("im").and_then(Value::as_array);
    re.iter()
        .enumerate()
        .map(|(i, row)| {
            let row = row.as_array()?;
            let cells = row
                .iter()
                .enumerate()
                .map(|(j, x)| {
                    let y = match im {
                        Some(im) => number(im.get(i)?.as_array()?.get(j)?)?,
                        None => 0.0,
                    };
                    Some(complex(number(x)?, y))
                })
                .collect::<Option<Vec<_>>>()?;
            Some(format!("[{}]", cells.join(", ")))
        })
        .collect()
}

fn render(out: &mut String, v: &Value, depth: usize) {
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                render_entry(out, k, x, depth);
            }
        }
        other => {
            indent(out, depth);
            let _ = writeln!(out, "{}", scalar(other));
        }
    }
}

fn render_entry(out: &mut String, key: &str, v: &Value, depth: usize) {
    indent(out, depth);
    if let Some(rows) = as_matrix(v) {
        let _ = writeln!(out, "{key}:");
        for r in rows {
            indent(out, depth + 1);
            let _ = writeln!(out, "{r}");
        }
        return;
    }
    if let Some(p) = as_point(v) {
        let _ = writeln!(out, "{key}: {p}");
        return;
    }
    match v {
        Value::Object(_) => {
            let _ = writeln!(out, "{key}:");
            render(out, v, depth + 1);
        }
        Value::Array(items) if items.iter().all(|x| !x.is_object() && !x.is_array()) => {
            let cells: Vec<String> = items.iter().map(scalar).collect();
            let _ = writeln!(out, "{key}: [{}]", cells.join(", "));
        }
        Value::Array(items) if items.iter().all(|x| as_point(x).is_some()) => {
            let cells: Vec<String> = items.iter().filter_map(as_point).collect();
            let _ = writeln!(out, "{key}: [{}]", cells.join(", "));
        }
        Value::Array(items) => {
            let _ = writeln!(out, "{key}:");
            for (i, x) in items.iter().enumerate() {
                render_entry(out, &format!("- {i}"), x, depth + 1);
            }
        }
        other => {
            let _ = writeln!(out, "{key}: {}", scalar(other));
        }
    }
}
