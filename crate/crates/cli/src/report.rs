//! Human and machine renderings of results.

use serde_json::{json, Map, Value as Json};

use crate::eval::{Context, Evaluation};
use crate::value::{CertView, Value};

pub const JET_MATRIX_CONVENTION: &str =
    "columns are the coefficients of g o f for the monomials g of degree 1..N; M(f o g) = M(g) M(f)";

pub fn header(ctx: &Context) -> Map<String, Json> {
    let mut m = Map::new();
    m.insert("order".into(), json!(ctx.shape.order));
    m.insert("vars".into(), json!(ctx.vars));
    m.insert(
        "bounds".into(),
        json!({
            "word_bound": ctx.bounds.word_bound,
            "depth": ctx.bounds.depth,
            "element_cap": ctx.bounds.cap,
        }),
    );
    m
}

pub fn document_json(ev: &Evaluation) -> Json {
    let vars = &ev.ctx.vars;
    let mut m = header(&ev.ctx);
    let bindings: Vec<Json> = ev
        .bindings
        .iter()
        .map(|(n, v)| {
            let mut j = v.to_json(vars);
            j.as_object_mut()
                .expect("object")
                .insert("name".into(), json!(n));
            j
        })
        .collect();
    let asserts: Vec<Json> = ev
        .assertions
        .iter()
        .map(|a| json!({ "line": a.line, "statement": a.text, "holds": a.holds }))
        .collect();
    m.insert("bindings".into(), Json::Array(bindings));
    m.insert("assertions".into(), Json::Array(asserts));
    m.insert(
        "status".into(),
        json!(if ev.all_hold() {
            "ok"
        } else {
            "assertion failed"
        }),
    );
    Json::Object(m)
}

fn cert_line(c: &CertView) -> String {
    let mut s = c.cert.verdict.to_string();
    if let (Some(w), Some(o)) = (&c.witness, c.cert.witness_order) {
        s += &format!(
            " (witness {w}, tangency order {})",
            crate::value::tangency_text(o)
        );
    }
    s
}

pub fn value_text(ctx: &Context, v: &Value) -> String {
    match v {
        Value::Cert(c) => {
            let mut s = cert_line(c);
            if let Some(j) = &c.witness_jet {
                s += &format!("\n    witness = {j}");
            }
            for d in &c.cert.detail {
                s += &format!("\n    {d}");
            }
            s
        }
        Value::Equivalence(sides, agree) => {
            let mut s = format!(
                "{}",
                if *agree {
                    "sides agree"
                } else {
                    "sides disagree"
                }
            );
            for (n, c) in sides {
                s += &format!("\n    {n}: {}", cert_line(c));
            }
            s
        }
        _ => ctx.render(v),
    }
}

pub fn document_text(ev: &Evaluation) -> String {
    let mut out = String::new();
    for (n, v) in &ev.bindings {
        out += &format!("{n} : {} = {}\n", v.type_name(), value_text(&ev.ctx, v));
    }
    for a in &ev.assertions {
        out += &format!(
            "line {}: assert {} ... {}\n",
            a.line,
            a.text,
            if a.holds { "ok" } else { "FAILED" }
        );
    }
    out
}

pub fn pretty(j: &Json) -> String {
    let mut s = serde_json::to_string_pretty(j).expect("serializable");
    s.push('\n');
    s
}
