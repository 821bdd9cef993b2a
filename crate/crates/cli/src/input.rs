//! Payload readers. Polynomials may be written as expression strings over
//! the scenario's variables or in the canonical JSON form.

use std::sync::Arc;

use nambu_core::forms::DifferentialForm;
use nambu_core::symalg::json::{laurent_from_json, poly_from_json, table_from_json};
use nambu_core::symalg::{parse_poly, parse_scalar, ExactScalar, LaurentObject, MultiPoly, VariableTable};
use serde_json::Value;

use crate::error::{CliError, CliResult};

pub(crate) fn bad<T>(msg: impl Into<String>) -> CliResult<T> {
    Err(CliError::Input(msg.into()))
}

pub(crate) fn get<'v>(input: &'v Value, key: &str) -> Option<&'v Value> {
    input.get(key).filter(|v| !v.is_null())
}

pub(crate) fn require<'v>(input: &'v Value, key: &str) -> CliResult<&'v Value> {
    get(input, key).ok_or_else(|| CliError::Input(format!("input field `{key}` is required")))
}

pub(crate) fn array<'v>(v: &'v Value, what: &str) -> CliResult<&'v Vec<Value>> {
    v.as_array().ok_or_else(|| CliError::Input(format!("{what} must be an array")))
}

/// A list of names (all coordinates) or a canonical variable table.
pub(crate) fn table(v: Option<&Value>, default: &[&str]) -> CliResult<Arc<VariableTable>> {
    match v {
        None => Ok(VariableTable::coordinates(default)?),
        Some(v) => {
            let items = array(v, "variables")?;
            if items.iter().all(Value::is_string) {
                let names: Vec<&str> = items.iter().filter_map(Value::as_str).collect();
                Ok(VariableTable::coordinates(&names)?)
            } else {
                Ok(table_from_json(v)?)
            }
        }
    }
}

pub(crate) fn names(v: &Value, what: &str) -> CliResult<Vec<String>> {
    array(v, what)?
        .iter()
        .map(|s| {
            s.as_str()
                .map(str::to_owned)
                .ok_or_else(|| CliError::Input(format!("{what} must be strings")))
        })
        .collect()
}

pub(crate) fn poly(v: &Value, vars: &Arc<VariableTable>) -> CliResult<MultiPoly> {
    match v {
        Value::String(s) => Ok(parse_poly(s, vars)?),
        Value::Number(_) => Ok(MultiPoly::constant(vars, scalar(v)?)),
        Value::Object(_) => Ok(poly_from_json(v)?.reembed(vars)?),
        _ => bad("a polynomial must be an expression string or a canonical polynomial object"),
    }
}

pub(crate) fn polys(v: &Value, vars: &Arc<VariableTable>, what: &str) -> CliResult<Vec<MultiPoly>> {
    array(v, what)?.iter().map(|p| poly(p, vars)).collect()
}

pub(crate) fn matrix(v: &Value, vars: &Arc<VariableTable>, what: &str) -> CliResult<Vec<Vec<MultiPoly>>> {
    array(v, what)?.iter().map(|row| polys(row, vars, what)).collect()
}

/// Exact scalar from a JSON number or a string such as `"1/3"`.
pub(crate) fn scalar(v: &Value) -> CliResult<ExactScalar> {
    match v {
        Value::Number(n) => Ok(parse_scalar(&n.to_string())?),
        Value::String(s) => Ok(parse_scalar(s)?),
        _ => bad("expected a number or a rational string"),
    }
}

pub(crate) fn floats(v: &Value, what: &str) -> CliResult<Vec<f64>> {
    array(v, what)?
        .iter()
        .map(|x| x.as_f64().ok_or_else(|| CliError::Input(format!("{what} must be numbers"))))
        .collect()
}

/// A series in `lambda`: an expression string (non-negative powers), a list
/// of `[exponent, coefficient]` pairs, or a canonical Laurent object.
pub(crate) fn laurent(v: &Value, vars: &Arc<VariableTable>) -> CliResult<LaurentObject> {
    let lambda = vars.index_of("lambda")?;
    match v {
        Value::String(_) => Ok(LaurentObject::from_poly(&poly(v, vars)?, lambda)),
        Value::Array(items) => {
            let terms = items
                .iter()
                .map(|t| match t.as_array().map(Vec::as_slice) {
                    Some([e, c]) => {
                        let e = e
                            .as_i64()
                            .ok_or_else(|| CliError::Input("series exponents must be integers".into()))?;
                        let c = poly(c, vars)?;
                        if c.depends_on(lambda) {
                            return bad("series coefficients must not contain lambda");
                        }
                        Ok((e, c))
                    }
                    _ => bad("series terms are [exponent, coefficient] pairs"),
                })
                .collect::<CliResult<Vec<_>>>()?;
            Ok(LaurentObject::from_terms(vars, terms, None)?)
        }
        Value::Object(_) => {
            let l = laurent_from_json(v)?;
            Ok(l.map_coeffs(|c| c.reembed(vars))?)
        }
        _ => bad("expected a series"),
    }
}

/// A 1-form on the coordinates of `like`: an array of coefficients in
/// coordinate order, or an object from coordinate name to coefficient.
pub(crate) fn one_form(v: &Value, like: &DifferentialForm) -> CliResult<DifferentialForm> {
    let vars = like.vars();
    let mut acc = DifferentialForm::zero(vars, like.coords().to_vec(), 1)?;
    let mut add = |pos: usize, c: &Value| -> CliResult<()> {
        let term = DifferentialForm::monomial(like, poly(c, vars)?, &[pos])?;
        acc = acc.add(&term)?;
        Ok(())
    };
    match v {
        Value::Array(items) => {
            if items.len() != like.coords().len() {
                return bad(format!("a 1-form needs {} coefficients", like.coords().len()));
            }
            for (pos, c) in items.iter().enumerate() {
                add(pos, c)?;
            }
        }
        Value::Object(map) => {
            for (name, c) in map {
                let idx = vars.index_of(name)?;
                let pos = like
                    .coords()
                    .iter()
                    .position(|&i| i == idx)
                    .ok_or_else(|| CliError::Input(format!("`{name}` is not a form coordinate")))?;
                add(pos, c)?;
            }
        }
        _ => return bad("a 1-form is an array or an object of coefficients"),
    }
    Ok(acc)
}
