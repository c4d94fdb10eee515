//! Structured report emission. Every report is a JSON value with sorted
//! keys, so identical inputs produce byte-identical output.

use crate::algebra::{LinearMap, Report, Violation};
use crate::complexes::{CohomologyReport, LesReport};
use crate::doc::{emit_matrix, emit_scalar, emit_tensor};
use crate::scalar::Scalar;
use serde_json::{Map, Value};

pub fn violation_value(v: &Violation) -> Value {
    let mut o = Map::new();
    o.insert("law".into(), Value::String(v.law.clone()));
    o.insert(
        "at".into(),
        Value::Array(v.at.iter().map(|&i| Value::Number((i as u64).into())).collect()),
    );
    o.insert("lhs".into(), Value::Array(v.lhs.iter().map(emit_scalar).collect()));
    o.insert("rhs".into(), Value::Array(v.rhs.iter().map(emit_scalar).collect()));
    Value::Object(o)
}

pub fn report_value(r: &Report) -> Value {
    let mut o = Map::new();
    o.insert("ok".into(), Value::Bool(r.ok));
    o.insert(
        "violations".into(),
        Value::Array(r.violations.iter().map(violation_value).collect()),
    );
    Value::Object(o)
}

pub fn matrix_value(m: &LinearMap) -> Value {
    emit_matrix(m)
}

pub fn tensor_value(entries: &[Scalar], dims: &[usize]) -> Value {
    emit_tensor(entries, dims)
}

pub fn cohomology_value(c: &CohomologyReport) -> Value {
    let mut o = Map::new();
    o.insert("complex".into(), Value::String(c.kind.name().to_string()));
    o.insert("fixture".into(), Value::String(c.fixture.clone()));
    let rows: Vec<Value> = c
        .degrees
        .iter()
        .map(|d| {
            let mut r = Map::new();
            r.insert("degree".into(), Value::Number((d.degree as u64).into()));
            r.insert("dim".into(), Value::Number((d.dim as u64).into()));
            r.insert("rank".into(), Value::Number((d.rank as u64).into()));
            r.insert("nullity".into(), Value::Number((d.nullity as u64).into()));
            r.insert("betti".into(), Value::Number((d.betti as u64).into()));
            Value::Object(r)
        })
        .collect();
    o.insert("degrees".into(), Value::Array(rows));
    Value::Object(o)
}

pub fn les_value(l: &LesReport) -> Value {
    let mut o = Map::new();
    o.insert("exact".into(), Value::Bool(l.exact));
    o.insert("note".into(), Value::String(l.note.to_string()));
    let nodes: Vec<Value> = l
        .nodes
        .iter()
        .map(|n| {
            let mut r = Map::new();
            let num = |x: usize| Value::Number((x as u64).into());
            r.insert("degree".into(), num(n.degree));
            r.insert("dim_h_rel_prev".into(), num(n.dim_h_rel_prev));
            r.insert("dim_h_cone".into(), num(n.dim_h_cone));
            r.insert("dim_h_hoch".into(), num(n.dim_h_hoch));
            r.insert("dim_h_rel".into(), num(n.dim_h_rel));
            r.insert("rank_incl".into(), num(n.rank_incl));
            r.insert("rank_proj".into(), num(n.rank_proj));
            r.insert("rank_conn".into(), num(n.rank_conn));
            r.insert("rank_incl_next".into(), num(n.rank_incl_next));
            r.insert("exact_at_cone".into(), Value::Bool(n.exact_at_cone));
            r.insert("exact_at_hoch".into(), Value::Bool(n.exact_at_hoch));
            r.insert("exact_at_rel".into(), Value::Bool(n.exact_at_rel));
            Value::Object(r)
        })
        .collect();
    o.insert("nodes".into(), Value::Array(nodes));
    Value::Object(o)
}

/// Canonical textual form of a report: pretty with a trailing newline, or a
/// single compact line for raw mode.
pub fn render(value: &Value, raw: bool) -> String {
    let mut s = if raw {
        serde_json::to_string(value).expect("render")
    } else {
        serde_json::to_string_pretty(value).expect("render")
    };
    s.push('\n');
    s
}
