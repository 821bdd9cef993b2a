use std::sync::Arc;

use nambu_core::forms::{krichever_closedness, omega3_check, DifferentialForm};
use nambu_core::hierarchy::{
    cross_flow_residual, nambu3, vacuum_solution, volume_constraint_residual, vp_flow_residual,
    vp_table, zero_curvature_residual, DkpState, Verdict, VpTriple,
};
use nambu_core::symalg::{LaurentObject, VariableTable};
use nambu_core::Error;
use serde_json::{json, Map, Value};

use super::Outcome;
use crate::error::{CliError, CliResult};
use crate::input::{array, bad, get, laurent, poly, require, table};
use crate::report::Check;
use crate::scenario::Options;
use crate::Context;

fn labelled(names: [&str; 3], r: [LaurentObject; 3]) -> Vec<(String, LaurentObject)> {
    names.iter().map(|s| s.to_string()).zip(r).collect()
}

fn flow_pairs(opts: &Options) -> CliResult<Vec<(usize, usize)>> {
    let pair = |v: &Value| -> CliResult<(usize, usize)> {
        match v.as_array().map(Vec::as_slice) {
            Some([a, b]) => match (a.as_u64(), b.as_u64()) {
                (Some(a), Some(b)) if a >= 1 && b >= 1 => Ok((a as usize, b as usize)),
                _ => bad("flow indices must be positive integers"),
            },
            _ => bad("a flow pair is [n, m]"),
        }
    };
    let pairs = match opts.raw("flows") {
        None => vec![(1, 2), (1, 3), (2, 3)],
        Some(v) if array(v, "flows")?.iter().all(Value::is_array) => {
            array(v, "flows")?.iter().map(pair).collect::<CliResult<_>>()?
        }
        Some(v) => vec![pair(v)?],
    };
    opts.record("flows", json!(pairs.iter().map(|&(a, b)| [a, b]).collect::<Vec<_>>()));
    Ok(pairs)
}

/// `∂_m B_n − ∂_n B_m + {B_n, B_m}` for each requested flow pair.
pub fn dkp_zc(opts: &Options, ctx: &Context) -> CliResult<Outcome> {
    let depth = opts.usize_in("K", 6, 1, 12)?;
    let pairs = flow_pairs(opts)?;
    let state = DkpState::new(depth, ctx.max_jet(opts)?)?;
    let mut out = Outcome::default();
    for (n, m) in pairs {
        let r = zero_curvature_residual(&state, n, m).map(|r| vec![("B".to_string(), r)]);
        out.checks.push(Check::residuals("zero_curvature", vec![n, m], r)?);
    }
    Ok(out)
}

/// The `t_n` flow of every exactly representable `u_k`.
pub fn flow(input: &Value, opts: &Options, ctx: &Context) -> CliResult<Outcome> {
    let depth = opts.usize_in("K", 6, 1, 12)?;
    let n = opts.usize_in("n", 2, 1, 12)?;
    let vacuum = opts.bool("vacuum", false)?;
    let max_jet = ctx.max_jet(opts)?;
    let state = if vacuum {
        DkpState::vacuum(depth, max_jet)?
    } else {
        DkpState::new(depth, max_jet)?
    };
    let mut out = Outcome::default();
    let flows = match nambu_core::hierarchy::dkp_flow(&state, n) {
        Ok(f) => f,
        Err(e @ (Error::Truncation(_) | Error::JetOrderExceeded { .. } | Error::EmptyWindow)) => {
            out.checks
                .push(Check::new("flow", Verdict::Indeterminate, json!({ "reason": e.to_string() })));
            return Ok(out);
        }
        Err(e) => return Err(e.into()),
    };
    let rendered: Map<String, Value> = flows
        .iter()
        .map(|(k, c)| (format!("u{k}"), Value::String(c.to_string())))
        .collect();
    out.checks.push(Check::new(
        "flow",
        Verdict::Pass,
        json!({ "exact_components": flows.keys().map(|k| format!("u{k}")).collect::<Vec<_>>() }),
    ));
    out.results.insert(format!("t{n}_flow"), Value::Object(rendered));
    if let Some(expected) = get(input, "expected") {
        let map = expected
            .as_object()
            .ok_or_else(|| CliError::Input("`expected` maps u_k names to flows".into()))?;
        for (name, e) in map {
            let k: usize = name
                .strip_prefix('u')
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| CliError::Input(format!("`{name}` is not a u_k name")))?;
            let e = poly(e, state.vars())?;
            let check = match flows.get(&k) {
                Some(f) => Check::poly(format!("expected_{name}"), &(f - &e)),
                None => Check::new(
                    format!("expected_{name}"),
                    Verdict::Indeterminate,
                    json!({ "reason": format!("{name} lies outside the exact window") }),
                ),
            };
            out.checks.push(check);
        }
    }
    Ok(out)
}

/// Evaluates a form-level check, mapping truncation and non-polynomial
/// series to `indeterminate`.
fn form_check(name: &str, f: nambu_core::Result<DifferentialForm>) -> CliResult<Check> {
    match f {
        Ok(f) => Ok(Check::form(name, &f)),
        Err(e @ (Error::Truncation(_) | Error::EmptyWindow | Error::Indeterminate(_) | Error::NotPolynomial(_))) => {
            Ok(Check::new(name, Verdict::Indeterminate, json!({ "reason": e.to_string() })))
        }
        Err(e) => Err(e.into()),
    }
}

fn vp_checks(triple: &VpTriple, depth: usize, out: &mut Outcome) -> CliResult<()> {
    for n in 1..=depth {
        let r = vp_flow_residual(triple, n).map(|r| labelled(["L", "M", "N"], r));
        out.checks.push(Check::residuals("flow", vec![n], r)?);
    }
    let v = volume_constraint_residual(triple).map(|r| vec![("LMN".to_string(), r)]);
    out.checks.push(Check::residuals("volume", vec![], v)?);
    for n in 1..=depth {
        for m in n + 1..=depth {
            let r = cross_flow_residual(triple, n, m).map(|r| labelled(["L", "M", "N"], r));
            out.checks.push(Check::residuals("cross_flow", vec![n, m], r)?);
        }
    }
    match omega3_check(triple) {
        Ok(r) => {
            out.checks.push(Check::form("omega_closed", &r.closedness));
            out.checks.push(Check::form("omega_wedge_square", &r.wedge_square));
            out.checks.push(Check::form("omega_equals_dL_dM_dN", &r.theorem31));
        }
        Err(e) => {
            for name in ["omega_closed", "omega_wedge_square", "omega_equals_dL_dM_dN"] {
                out.checks.push(form_check(name, Err(e.clone()))?);
            }
        }
    }
    out.checks
        .push(form_check("krichever_closed", krichever_closedness(triple))?);
    Ok(())
}

fn triple_json(t: &VpTriple) -> Value {
    json!({ "L": t.l.to_string(), "M": t.m.to_string(), "N": t.n.to_string() })
}

/// Vacuum solution of depth `K`, optionally with `input.perturb` added to N.
pub fn vp_vacuum(input: &Value, opts: &Options) -> CliResult<Outcome> {
    let depth = opts.usize_in("K", 4, 1, 8)?;
    let mut triple = vacuum_solution(depth)?;
    if let Some(p) = get(input, "perturb") {
        let extra = laurent(p, triple.vars())?;
        triple = VpTriple::new(triple.l.clone(), triple.m.clone(), triple.n.add(&extra)?)?;
    }
    let mut out = Outcome::default();
    out.results.insert("triple".into(), triple_json(&triple));
    vp_checks(&triple, depth, &mut out)?;
    Ok(out)
}

/// User-supplied `(L, M, N)` over `lambda, p, q, t1..tK`.
pub fn vp_check(input: &Value, opts: &Options) -> CliResult<Outcome> {
    let depth = opts.usize_in("K", 3, 1, 8)?;
    let vars = vp_table(depth);
    let triple = VpTriple::new(
        laurent(require(input, "L")?, &vars)?,
        laurent(require(input, "M")?, &vars)?,
        laurent(require(input, "N")?, &vars)?,
    )?;
    let mut out = Outcome::default();
    vp_checks(&triple, depth, &mut out)?;
    Ok(out)
}

fn twistor_table(input: &Value, opts: &Options) -> CliResult<Arc<VariableTable>> {
    match get(input, "variables") {
        Some(v) => table(Some(v), &[]),
        None => Ok(vp_table(opts.usize_in("K", 0, 0, 8)?)),
    }
}

/// `{f1, f2, f3} = 1` in `(λ, p, q)`.
pub fn twistor_data(input: &Value, opts: &Options) -> CliResult<Outcome> {
    let vars = twistor_table(input, opts)?;
    let fs = array(require(input, "functions")?, "functions")?;
    if fs.len() != 3 {
        return bad("twistor data has exactly three functions");
    }
    let f: Vec<LaurentObject> = fs.iter().map(|v| laurent(v, &vars)).collect::<CliResult<_>>()?;
    let r = nambu3(&f[0], &f[1], &f[2])
        .and_then(|b| b.sub(&LaurentObject::one(&vars)))
        .map(|r| vec![("f1f2f3".to_string(), r)]);
    let mut out = Outcome::default();
    out.checks.push(Check::residuals("volume", vec![], r)?);
    Ok(out)
}
