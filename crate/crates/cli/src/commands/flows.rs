use nambu_core::flows::{conserved_drift, divergence, integrate, vector_field, Method, NambuSystem, Trajectory};
use nambu_core::nambu::nambu_bracket;
use nambu_core::symalg::{format_scalar, ExactScalar};
use nambu_core::Error;
use serde_json::{json, Value};

use super::Outcome;
use crate::error::{CliError, CliResult};
use crate::input::{array, bad, floats, scalar};
use crate::report::{float, Check};
use crate::scenario::Options;

const MAX_STEPS: f64 = 1e7;

fn exact_triple(opts: &Options, key: &str, default: [i64; 3]) -> CliResult<Option<[ExactScalar; 3]>> {
    let Some(v) = opts.raw(key) else {
        if default == [0; 3] {
            return Ok(None);
        }
        opts.record(key, json!(default));
        return Ok(Some(default.map(|d| ExactScalar::from_integer(d.into()))));
    };
    let items = array(v, key)?;
    if items.len() != 3 {
        return bad(format!("option `{key}` needs three entries"));
    }
    let vals = [scalar(&items[0])?, scalar(&items[1])?, scalar(&items[2])?];
    opts.record(key, json!(vals.iter().map(format_scalar).collect::<Vec<_>>()));
    Ok(Some(vals))
}

fn exact(opts: &Options, key: &str, default: i64) -> CliResult<ExactScalar> {
    let v = match opts.raw(key) {
        Some(v) => scalar(v)?,
        None => ExactScalar::from_integer(default.into()),
    };
    opts.record(key, format_scalar(&v).into());
    Ok(v)
}

/// Rigid body from inertia moments `I` or coefficients `a`, feedback `k`.
pub fn rigid_body(opts: &Options) -> CliResult<Outcome> {
    let k = exact(opts, "k", 1)?;
    let sys = match exact_triple(opts, "a", [0; 3])? {
        Some([a1, a2, a3]) => {
            if opts.raw("I").is_some() {
                return bad("give either `I` or `a`, not both");
            }
            NambuSystem::with_coefficients(a1, a2, a3, k)?
        }
        None => {
            let inertia = exact_triple(opts, "I", [1, 2, 3])?.expect("default present");
            NambuSystem::rigid_body(inertia, k)?
        }
    };
    integration(&sys, opts)
}

pub fn euler_top(opts: &Options) -> CliResult<Outcome> {
    integration(&NambuSystem::euler_top(), opts)
}

fn run(sys: &NambuSystem, initial: &[f64], t_end: f64, dt: f64) -> CliResult<Result<Trajectory, f64>> {
    match integrate(sys, initial, t_end, dt, Method::Rk4) {
        Ok(t) => Ok(Ok(t)),
        Err(Error::NonFinite { t }) => Ok(Err(t)),
        Err(e) => Err(CliError::from(e)),
    }
}

fn max_drift(sys: &NambuSystem, tr: &Trajectory) -> CliResult<f64> {
    Ok(conserved_drift(tr, &sys.hamiltonians())?.into_iter().fold(0.0, f64::max))
}

fn integration(sys: &NambuSystem, opts: &Options) -> CliResult<Outcome> {
    let dt = opts.f64_in("dt", 1e-3, 1e-6, 1.0)?;
    let t_end = opts.f64_in("t_end", 10.0, 0.0, 1e4)?;
    let initial = match opts.raw("initial") {
        Some(v) => floats(v, "initial")?,
        None => vec![1.0, 0.2, 0.1],
    };
    opts.record("initial", json!(initial.iter().map(|&v| float(v)).collect::<Vec<_>>()));
    if t_end / dt > MAX_STEPS {
        return bad(format!("t_end / dt exceeds {MAX_STEPS:e} steps"));
    }
    let tol = opts.f64_in("tol", 1e-8, 0.0, 1.0)?;
    let halving = opts.bool("step_halving", true)?;
    let mut out = Outcome::default();

    let field = vector_field(sys);
    out.checks.push(Check::poly("divergence", &divergence(&field, sys.phase())?));
    let h = sys.hamiltonians();
    for (i, hi) in h.iter().enumerate() {
        let b = sys.specialize(&nambu_bracket(&[hi.clone(), h[0].clone(), h[1].clone()], &sys.space())?);
        out.checks.push(Check::poly(format!("integral_H{}", i + 1), &b));
    }

    match run(sys, &initial, t_end, dt)? {
        Ok(tr) => {
            let drifts = conserved_drift(&tr, &h)?;
            let ok = drifts.iter().all(|&d| d <= tol);
            let named: serde_json::Map<String, Value> = drifts
                .iter()
                .enumerate()
                .map(|(i, &d)| (format!("H{}", i + 1), float(d)))
                .collect();
            out.checks.push(Check::pass_if(
                "drift",
                ok,
                json!({ "max_relative_drift": named, "tolerance": float(tol) }),
            ));
            out.results.insert("samples".into(), tr.len().into());
            let last = tr.states.last().cloned().unwrap_or_default();
            out.results
                .insert("final_state".into(), json!(last.iter().map(|&v| float(v)).collect::<Vec<_>>()));
            out.trajectory = Some(tr);
        }
        Err(t) => out.checks.push(Check::pass_if(
            "drift",
            false,
            json!({ "non_finite_at": float(t), "tolerance": float(tol) }),
        )),
    }

    if halving {
        let coarse = opts.f64_in("halving_dt", 1e-2, 1e-5, 1.0)?;
        let min_ratio = opts.f64_in("min_ratio", 12.0, 1.0, 1e3)?;
        let check = match (run(sys, &initial, t_end, coarse)?, run(sys, &initial, t_end, coarse / 2.0)?) {
            (Ok(a), Ok(b)) => {
                let (da, db) = (max_drift(sys, &a)?, max_drift(sys, &b)?);
                let ratio = if db > 0.0 { Some(da / db) } else { None };
                let ok = match ratio {
                    Some(r) => r >= min_ratio,
                    None => da == 0.0,
                };
                Check::pass_if(
                    "step_halving",
                    ok,
                    json!({
                        "dt": float(coarse),
                        "drift_dt": float(da),
                        "drift_half_dt": float(db),
                        "ratio": ratio.map(float),
                        "min_ratio": float(min_ratio),
                    }),
                )
            }
            (a, b) => Check::pass_if(
                "step_halving",
                false,
                json!({ "non_finite_at": a.err().or(b.err()).map(float) }),
            ),
        };
        out.checks.push(check);
    }
    Ok(out)
}
