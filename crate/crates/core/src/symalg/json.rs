//! Canonical JSON forms. Polynomials serialize as the variable table
//! followed by the term list `[[exponents...], "num/den"]` in ascending
//! exponent order; the BTreeMap storage makes the order deterministic.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::laurent::LaurentObject;
use super::poly::{Monomial, MultiPoly};
use super::scalar::{format_scalar, parse_scalar};
use super::vars::{Variable, VariableTable};
use crate::error::{Error, Result};

/// One polynomial term in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson(pub Monomial, pub String);

pub fn table_to_json(vars: &VariableTable) -> Value {
    serde_json::to_value(vars.variables()).expect("variables serialize")
}

pub fn table_from_json(v: &Value) -> Result<Arc<VariableTable>> {
    let vars: Vec<Variable> =
        serde_json::from_value(v.clone()).map_err(|e| bad(format!("variable table: {e}")))?;
    VariableTable::new(vars)
}

/// Term list only; used where the table is stored once at a higher level.
pub fn terms_to_json(p: &MultiPoly) -> Value {
    Value::Array(
        p.terms()
            .map(|(m, c)| json!([m, format_scalar(c)]))
            .collect(),
    )
}

pub fn terms_from_json(v: &Value, vars: &Arc<VariableTable>) -> Result<MultiPoly> {
    let terms: Vec<TermJson> =
        serde_json::from_value(v.clone()).map_err(|e| bad(format!("term list: {e}")))?;
    let parsed = terms
        .into_iter()
        .map(|TermJson(m, c)| Ok((m, parse_scalar(&c)?)))
        .collect::<Result<Vec<_>>>()?;
    MultiPoly::from_terms(vars, parsed)
}

pub fn poly_to_json(p: &MultiPoly) -> Value {
    json!({
        "variables": table_to_json(p.vars()),
        "terms": terms_to_json(p),
    })
}

pub fn poly_from_json(v: &Value) -> Result<MultiPoly> {
    let vars = table_from_json(field(v, "variables")?)?;
    terms_from_json(field(v, "terms")?, &vars)
}

pub fn laurent_to_json(l: &LaurentObject) -> Value {
    let terms: Vec<Value> = l
        .terms()
        .map(|(e, c)| json!([e, terms_to_json(c)]))
        .collect();
    json!({
        "variables": table_to_json(l.vars()),
        "floor": l.floor(),
        "terms": terms,
    })
}

pub fn laurent_from_json(v: &Value) -> Result<LaurentObject> {
    let vars = table_from_json(field(v, "variables")?)?;
    let floor: Option<i64> = serde_json::from_value(field(v, "floor")?.clone())
        .map_err(|e| bad(format!("floor: {e}")))?;
    let raw: Vec<(i64, Value)> = serde_json::from_value(field(v, "terms")?.clone())
        .map_err(|e| bad(format!("laurent terms: {e}")))?;
    let terms = raw
        .into_iter()
        .map(|(e, t)| Ok((e, terms_from_json(&t, &vars)?)))
        .collect::<Result<Vec<_>>>()?;
    LaurentObject::from_terms(&vars, terms, floor)
}

pub(crate) fn field<'v>(v: &'v Value, key: &str) -> Result<&'v Value> {
    v.get(key).ok_or_else(|| bad(format!("missing field `{key}`")))
}

pub(crate) fn bad(msg: String) -> Error {
    Error::Parse { pos: 0, msg }
}
