//! JSON shapes shared by the commands. Every integer that may grow past 64
//! bits is written as a decimal string; object keys come out sorted because
//! `serde_json::Map` is a `BTreeMap` here.

use num_bigint::BigInt;
use serde_json::{json, Map, Value};

use logcave::homclass::Witness;
use logcave::milnor::{BoundAudit, MuProfile, Route};
use logcave::{IntPolynomial, Sequence};

pub fn int(x: &BigInt) -> Value {
    Value::String(x.to_string())
}

pub fn ints(xs: &[BigInt]) -> Value {
    Value::Array(xs.iter().map(int).collect())
}

pub fn matrix<T: ToString>(rows: &[Vec<T>]) -> Value {
    rows.iter()
        .map(|r| Value::Array(r.iter().map(|x| Value::String(x.to_string())).collect()))
        .collect()
}

pub fn polynomial(p: &IntPolynomial) -> Value {
    json!({ "coeffs": ints(p.coeffs()), "text": p.to_string() })
}

/// Verdicts on absolute values plus the sign pattern of the raw sequence.
/// A zero polynomial has nothing to check.
pub fn coefficient_verdicts(p: &IntPolynomial, out: &mut Map<String, Value>) {
    match p.coefficient_sequence() {
        Some(seq) => {
            let abs = seq.abs();
            out.insert("log_concave".into(), json!(abs.is_log_concave()));
            out.insert("no_internal_zeros".into(), json!(abs.has_no_internal_zeros()));
            out.insert("unimodal".into(), json!(abs.is_unimodal()));
            out.insert("sign_alternating".into(), json!(seq.is_sign_alternating()));
        }
        None => {
            for key in ["log_concave", "no_internal_zeros", "unimodal", "sign_alternating"] {
                out.insert(key.into(), json!("skipped: zero polynomial"));
            }
        }
    }
}

pub fn sequence_verdicts(seq: &Sequence, out: &mut Map<String, Value>) {
    out.insert("log_concave".into(), json!(seq.is_log_concave()));
    out.insert("no_internal_zeros".into(), json!(seq.has_no_internal_zeros()));
    out.insert("unimodal".into(), json!(seq.is_unimodal()));
}

pub fn route(r: Route) -> &'static str {
    match r {
        Route::Arrangement => "arrangement",
        Route::Monomial => "monomial",
        Route::GenericIsolated => "generic_isolated",
    }
}

pub fn mu_profile(mu: &MuProfile, csm: &[BigInt], euler: &BigInt) -> Map<String, Value> {
    let mut out = Map::new();
    out.insert("ambient_dim".into(), json!(mu.ambient_dim));
    out.insert("route".into(), json!(route(mu.route)));
    out.insert("mu".into(), ints(&mu.values));
    out.insert("csm".into(), ints(csm));
    out.insert("euler_characteristic".into(), int(euler));
    sequence_verdicts(&mu.sequence(), &mut out);
    out
}

pub fn bound_audit(a: &BoundAudit) -> Value {
    let rows: Vec<Value> = a
        .rows
        .iter()
        .map(|r| {
            json!({
                "i": r.i,
                "lower": r.lower.as_ref().map_or(Value::Null, int),
                "mu": int(&r.mu),
                "upper": int(&r.upper),
                "lower_holds": r.lower_holds,
                "upper_holds": r.upper_holds,
            })
        })
        .collect();
    json!({
        "rows": rows,
        "all_hold": a.all_hold(),
        "equality_throughout": a.equality_throughout(),
    })
}

pub fn witness(w: &Witness, verified: Option<bool>) -> Value {
    json!({
        "support": [w.support.0, w.support.1],
        "common_multiple": int(&w.common_multiple),
        "lambda": w.lambda.iter().map(|l| l.to_string()).collect::<Vec<_>>(),
        "multiple": int(&w.multiple),
        "map_exponents": matrix(&w.map_exponents),
        "predicted_degrees": ints(&w.predicted_degrees),
        "class_coefficients": ints(&w.class_coefficients),
        "verified": verified,
    })
}
