//! JSON and table renderings of a [`JobReport`].

use std::fmt::Write as _;
use std::time::Duration;

use orbit_lie::age::{Param, UnionRule};
use orbit_lie::AgeSpec;
use serde_json::{json, Value};

use crate::run::JobReport;

pub const SCHEMA_VERSION: u32 = 1;

/// Compact one-line rendering of an age, e.g. `times_q(K[2])`.
pub fn spec_label(spec: &AgeSpec) -> String {
    match spec {
        AgeSpec::Sets { lambda: Param::Value(q) } => format!("sets({q})"),
        AgeSpec::Sets { lambda } => format!("sets({lambda})"),
        AgeSpec::LinearOrders => "linear_orders".into(),
        AgeSpec::FiniteModel(m) => format!("model[{} vertices]", m.n()),
        AgeSpec::DisjointUnion { components, rule } => {
            let parts: Vec<String> = components.iter().map(spec_label).collect();
            let sep = match rule {
                UnionRule::Product => " + ",
                UnionRule::Sum => " +sum ",
            };
            format!("({})", parts.join(sep))
        }
        AgeSpec::TimesQ(inner) => format!("times_q({})", spec_label(inner)),
        AgeSpec::MultisetOver(inner) => format!("multiset_over({})", spec_label(inner)),
    }
}

/// Deterministic JSON: no timings, object keys in sorted order.
pub fn to_json(report: &JobReport) -> String {
    let tasks: Vec<Value> = report
        .tasks
        .iter()
        .map(|t| json!({ "task": t.task, "status": t.status.as_str(), "payload": t.payload }))
        .collect();
    let specialization: serde_json::Map<String, Value> =
        report.job.specialization.iter().map(|(k, v)| (k.clone(), json!(v.to_string()))).collect();
    let doc = json!({
        "schema_version": SCHEMA_VERSION,
        "age": report.job.raw.age,
        "age_label": spec_label(&report.job.spec),
        "N": report.job.level,
        "specialization": specialization,
        "symbol": report.symbol,
        "tasks": tasks,
        "notes": report.notes,
    });
    let mut out = serde_json::to_string_pretty(&doc).expect("serializable");
    out.push('\n');
    out
}

fn millis(d: Duration) -> String {
    format!("{:.1}ms", d.as_secs_f64() * 1e3)
}

pub fn to_table(report: &JobReport) -> String {
    let mut out = String::new();
    writeln!(out, "age: {}", spec_label(&report.job.spec)).unwrap();
    let mut line = format!("N = {}", report.job.level);
    if let Some(s) = report.symbol.as_ref().filter(|s| s.as_str() != "lambda") {
        line += &format!(", lambda stands for {s}");
    }
    for (k, v) in &report.job.specialization {
        line += &format!(", {k} = {v}");
    }
    writeln!(out, "{line}").unwrap();
    for (stage, wall) in &report.stages {
        writeln!(out, "{stage}: {}", millis(*wall)).unwrap();
    }
    writeln!(out).unwrap();
    let width = report.tasks.iter().map(|t| t.task.len()).max().unwrap_or(4).max(4);
    writeln!(out, "{:width$}  {:7}  {:>9}  details", "task", "status", "time").unwrap();
    for t in &report.tasks {
        writeln!(out, "{:width$}  {:7}  {:>9}  {}", t.task, t.status.as_str(), millis(t.wall), t.summary).unwrap();
    }
    for note in &report.notes {
        writeln!(out, "note: {note}").unwrap();
    }
    out
}
