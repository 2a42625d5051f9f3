//! Machine-readable reports.

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::report::{Check, Report};
use crate::settings::Settings;

use super::document::MatrixDoc;

/// Non-finite residuals become strings so that the report stays valid JSON.
pub fn number(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        json!(x.to_string())
    }
}

fn check_value(c: &Check) -> Value {
    let mut m = Map::new();
    m.insert("name".into(), json!(c.name));
    m.insert("passed".into(), json!(c.passed));
    m.insert("residual".into(), number(c.residual));
    m.insert("bound".into(), number(c.bound));
    m.insert("count".into(), json!(c.count));
    if let Some(w) = &c.witness {
        let mut wm = Map::new();
        wm.insert("location".into(), json!(w.location));
        wm.insert("note".into(), json!(w.note));
        if let Some(e) = &w.element {
            wm.insert("element".into(), serde_json::to_value(MatrixDoc::from_matrix(e)).expect("matrix"));
        }
        m.insert("witness".into(), Value::Object(wm));
    }
    Value::Object(m)
}

/// `sha256:` digest over the input files, in order, each prefixed by its
/// length so that concatenation is unambiguous.
pub fn inputs_digest(inputs: &[Vec<u8>]) -> String {
    let mut h = Sha256::new();
    for bytes in inputs {
        h.update((bytes.len() as u64).to_le_bytes());
        h.update(bytes);
    }
    format!("sha256:{}", hex::encode(h.finalize()))
}

pub struct Outcome {
    pub report: Report,
    pub results: Map<String, Value>,
}

impl Outcome {
    pub fn new(report: Report) -> Self {
        Outcome { report, results: Map::new() }
    }

    pub fn with(mut self, key: &str, value: Value) -> Self {
        self.results.insert(key.into(), value);
        self
    }
}

pub fn render(
    command: &str,
    digest: &str,
    settings: &Settings,
    outcome: &Outcome,
    duration_ms: Option<f64>,
) -> String {
    let verdict = if outcome.report.passed() { "pass" } else { "fail" };
    let mut top = Map::new();
    top.insert("command".into(), json!(command));
    top.insert("inputs_digest".into(), json!(digest));
    top.insert(
        "settings".into(),
        json!({ "tol": number(settings.tol), "samples": settings.samples, "seed": settings.seed }),
    );
    top.insert("checks".into(), Value::Array(outcome.report.checks.iter().map(check_value).collect()));
    top.insert("results".into(), Value::Object(outcome.results.clone()));
    top.insert("verdict".into(), json!(verdict));
    if let Some(ms) = duration_ms {
        top.insert("duration_ms".into(), number(ms));
    }
    // serde_json's map is ordered by key, so output is key-sorted
    let mut text = serde_json::to_string_pretty(&Value::Object(top)).expect("report serializes");
    text.push('\n');
    text
}

pub fn emit(text: &str) -> std::io::Result<()> {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    out.write_all(text.as_bytes())?;
    out.flush()
}
