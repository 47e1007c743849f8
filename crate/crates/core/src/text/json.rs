//! Versioned JSON rendering (`"schema": "starq/1"`). Exact rationals are
//! written as strings so the output is byte-identical across runs.

use serde_json::{json, Map, Value as Json};

use super::print::{format_observable, format_series, format_values};
use crate::coeffs::Observable;
use crate::oper::CommutantReport;
use crate::scalar::{Scalar, Value};
use crate::series::LambdaSeries;

pub const SCHEMA: &str = "starq/1";

fn cf_pair(v: &Value) -> (Json, Json) {
    match v {
        Value::Exact { coeff, pi_pow: 0 } => (json!(coeff.re.to_string()), json!(coeff.im.to_string())),
        _ => {
            let c = v.to_cf();
            (json!(c.re), json!(c.im))
        }
    }
}

/// `{schema, kind, ...fields}` as an ordered object.
pub fn envelope(kind: &str, fields: Json) -> Json {
    let mut m = Map::new();
    m.insert("schema".into(), json!(SCHEMA));
    m.insert("kind".into(), json!(kind));
    if let Json::Object(f) = fields {
        m.extend(f);
    }
    Json::Object(m)
}

/// A λ-scalar: `{trunc, terms: [{e, re, im}]}`.
pub fn series_json<C: Scalar>(s: &LambdaSeries<C>) -> Json {
    let terms: Vec<Json> = s
        .terms()
        .map(|(e, c)| {
            let (re, im) = cf_pair(&c.to_value());
            json!({"e": e, "re": re, "im": im})
        })
        .collect();
    envelope("series", json!({"trunc": s.trunc(), "text": format_series(s), "terms": terms}))
}

/// A functional value; exact values carry their power of π.
pub fn values_json(s: &LambdaSeries<Value>) -> Json {
    let terms: Vec<Json> = s
        .terms()
        .map(|(e, v)| match v {
            Value::Exact { coeff, pi_pow } => json!({
                "e": e, "re": coeff.re.to_string(), "im": coeff.im.to_string(), "pi": pi_pow, "exact": true
            }),
            Value::Float(c) => json!({"e": e, "re": c.re, "im": c.im, "exact": false}),
        })
        .collect();
    let exact = s.terms().all(|(_, v)| v.is_exact());
    envelope(
        "value",
        json!({"trunc": s.trunc(), "text": format_values(s), "exact": exact, "terms": terms}),
    )
}

fn observable_terms<C: Scalar>(f: &Observable<C>) -> Vec<Json> {
    let mut out = Vec::new();
    for (k, part) in f.parts().iter().enumerate() {
        for (e, g) in part.terms() {
            for (gamma, p) in g.blocks() {
                for (m, c) in p.terms() {
                    let (re, im) = cf_pair(&c.to_value());
                    out.push(json!({
                        "component": k + 1,
                        "e": e,
                        "gauss": gamma.to_string(),
                        "mono": m.0.to_vec(),
                        "re": re,
                        "im": im,
                    }));
                }
            }
        }
    }
    out
}

pub fn observable_json<C: Scalar>(f: &Observable<C>) -> Json {
    envelope(
        "observable",
        json!({
            "chart": f.chart().to_string(),
            "vars": f.chart().var_names(),
            "trunc": f.trunc(),
            "text": format_observable(f),
            "terms": observable_terms(f),
        }),
    )
}

/// A GNS vector: `{model, terms}`.
pub fn vector_json<C: Scalar>(model: &str, u: &Observable<C>) -> Json {
    envelope(
        "vector",
        json!({
            "model": model,
            "chart": u.chart().to_string(),
            "trunc": u.trunc(),
            "text": format_observable(u),
            "terms": observable_terms(u),
        }),
    )
}

/// `{dimension, flagged_boundary_rows, basis}`; basis entries list the
/// nonzero matrix entries of each representative solution.
pub fn commutant_json(r: &CommutantReport) -> Json {
    let flagged: Vec<Json> = r
        .flagged_boundary_columns
        .iter()
        .map(|(c, m)| json!({"component": c + 1, "mono": m.0.to_vec()}))
        .collect();
    let basis: Vec<Json> = r
        .basis
        .iter()
        .map(|x| {
            let entries: Vec<Json> = x
                .entries
                .iter()
                .map(|((i, j), s)| json!({"row": i, "col": j, "value": format_series(s)}))
                .collect();
            json!({"size": x.basis.len(), "entries": entries})
        })
        .collect();
    envelope(
        "commutant",
        json!({
            "dimension": r.dimension,
            "per_order": r.per_order,
            "lifts": r.lifts,
            "flagged_boundary_rows": flagged,
            "basis": basis,
        }),
    )
}

/// `{witness, verified_order}`.
pub fn synth_json(witness: &str, verified_order: &str, iterations: usize) -> Json {
    envelope(
        "synth",
        json!({"witness": witness, "verified_order": verified_order, "iterations": iterations}),
    )
}
