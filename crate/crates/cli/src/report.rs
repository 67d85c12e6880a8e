use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

use nc_arakelov::arithbundles::DetLine;
use nc_arakelov::exactlin::{FgAbGroup, Matrix};
use nc_arakelov::scalar::render_rational;
use nc_arakelov::Scalar;

pub const EXIT_PASS: u8 = 0;
pub const EXIT_INPUT: u8 = 1;
pub const EXIT_CHECK: u8 = 2;

#[derive(Clone, Debug, Serialize)]
pub struct Tool {
    pub name: &'static str,
    pub version: &'static str,
}

pub const TOOL: Tool = Tool { name: "nc-arakelov", version: env!("CARGO_PKG_VERSION") };

#[derive(Clone, Debug, Serialize)]
pub struct TaskReport {
    pub index: usize,
    pub id: String,
    pub kind: &'static str,
    pub passed: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
    pub result: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Failure {
    pub task: String,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub tool: Tool,
    pub scenario: Value,
    pub arithmetic: &'static str,
    pub seed: u64,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "serde_json::Map::is_empty")]
    pub random_draws: serde_json::Map<String, Value>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
    pub tasks: Vec<TaskReport>,
    pub failures: Vec<Failure>,
    pub passed: bool,
}

impl Report {
    pub fn exit_code(&self) -> u8 {
        if self.passed {
            EXIT_PASS
        } else {
            EXIT_CHECK
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize") + "\n"
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let name = self.scenario.get("name").and_then(Value::as_str).unwrap_or("?");
        let _ = writeln!(out, "{} {}  scenario {name}", self.tool.name, self.tool.version);
        let _ = writeln!(out, "arithmetic {}  seed {}  tolerance {:e}", self.arithmetic, self.seed, self.tolerance);
        for w in &self.warnings {
            let _ = writeln!(out, "warning: {w}");
        }
        for t in &self.tasks {
            let _ = writeln!(out, "\n[{}] {} ({}): {}", t.index, t.id, t.kind, if t.passed { "PASS" } else { "FAIL" });
            for w in &t.warnings {
                let _ = writeln!(out, "  warning: {w}");
            }
            render_value(&mut out, &t.result, 1);
        }
        let _ = writeln!(out);
        for f in &self.failures {
            match f.residual {
                Some(r) => {
                    let _ = writeln!(out, "FAILED {}: {} (residual {r:e})", f.task, f.message);
                }
                None => {
                    let _ = writeln!(out, "FAILED {}: {}", f.task, f.message);
                }
            }
        }
        let _ = writeln!(out, "{}", if self.passed { "all checks passed" } else { "some checks failed" });
        out
    }
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Indented rendering; arrays of flat objects become one line per row.
pub fn render_value(out: &mut String, v: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                match x {
                    Value::Object(_) => {
                        let _ = writeln!(out, "{pad}{k}:");
                        render_value(out, x, depth + 1);
                    }
                    Value::Array(items) if items.iter().any(|i| i.is_object() || i.is_array()) => {
                        let _ = writeln!(out, "{pad}{k}:");
                        for item in items {
                            match item {
                                Value::Object(row) => {
                                    let cells: Vec<String> =
                                        row.iter().map(|(a, b)| format!("{a}={}", scalar_text(b))).collect();
                                    let _ = writeln!(out, "{pad}  {}", cells.join("  "));
                                }
                                other => {
                                    let _ = writeln!(out, "{pad}  {other}");
                                }
                            }
                        }
                    }
                    _ => {
                        let _ = writeln!(out, "{pad}{k}: {}", scalar_text(x));
                    }
                }
            }
        }
        other => {
            let _ = writeln!(out, "{pad}{}", scalar_text(other));
        }
    }
}

pub fn group_json(g: &FgAbGroup) -> Value {
    serde_json::json!({
        "group": g.describe(),
        "rank": g.rank(),
        "torsion": g.torsion().iter().map(|t| t.to_string()).collect::<Vec<_>>(),
    })
}

pub fn detline_json<T: Scalar>(d: &DetLine<T>) -> Value {
    serde_json::json!({ "q": render_rational(d.q()), "t": d.t().render(), "adeg": d.adeg() })
}

pub fn matrix_json<T: Scalar>(m: &Matrix<T>) -> Value {
    let rows: Vec<Vec<String>> = (0..m.rows()).map(|i| (0..m.cols()).map(|j| m.get(i, j).render()).collect()).collect();
    serde_json::json!(rows)
}
