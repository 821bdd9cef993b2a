use nambu_core::forms::{
    det_metric3, gindikin_check, hydro_compat_residual, plebanski_pencil, plebanski_pencil_form, plebanski_residual,
    DifferentialForm, FormPencil, Grid, HydroResidual, Solution, PLEBANSKI_COORDS,
};
use nambu_core::sample::random_poly;
use nambu_core::symalg::{parse_poly, MultiPoly, VariableTable};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::Outcome;
use crate::error::{CliError, CliResult};
use crate::input::{array, bad, floats, get, matrix, names, one_form, poly, require, table};
use crate::report::{float, form_summary, Check};
use crate::scenario::Options;
use crate::Context;

fn plebanski_one(omega: &MultiPoly, out: &mut Outcome) -> CliResult<bool> {
    let res = plebanski_residual(omega)?;
    let pen = plebanski_pencil(omega)?;
    out.checks.push(Check::poly("plebanski", &res));
    out.checks.push(Check::pencil("pencil_closed", &pen.closedness));
    out.checks.push(Check::pencil("pencil_wedge_square", &pen.wedge_square));
    out.results
        .insert("lambda2_volume".into(), pen.wedge_square_volume(2).to_string().into());
    Ok(res.is_zero() && pen.is_zero())
}

/// Heavenly-equation residual and pencil conditions for `input.omega`, or
/// for the flat potential plus seeded members of `x xt + y yt + g(x, y)`.
pub fn plebanski(input: &Value, opts: &Options, ctx: &Context) -> CliResult<Outcome> {
    let vars = VariableTable::coordinates(&PLEBANSKI_COORDS)?;
    let mut out = Outcome::default();
    if let Some(o) = get(input, "omega") {
        plebanski_one(&poly(o, &vars)?, &mut out)?;
        return Ok(out);
    }
    let count = opts.usize_in("count", 20, 0, 1000)?;
    let degree = opts.usize_in("degree", 4, 0, 6)? as u32;
    let seed = ctx.seed(opts)?;
    let flat = parse_poly("x*xt + y*yt", &vars)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    for i in 0..=count {
        let omega = if i == 0 {
            flat.clone()
        } else {
            &flat + &random_poly(&mut rng, &vars, &[0, 1], degree, 5, 6)
        };
        let res = plebanski_residual(&omega)?;
        let pen = plebanski_pencil(&omega)?;
        if !(res.is_zero() && pen.is_zero()) {
            failures.push(json!({ "omega": omega.to_string(), "residual": res.to_string() }));
        }
    }
    out.checks.push(Check::pass_if(
        "plebanski_family",
        failures.is_empty(),
        json!({ "potentials": count + 1, "failures": failures }),
    ));
    Ok(out)
}

fn read_pencil(input: &Value) -> CliResult<FormPencil> {
    if let Some(p) = get(input, "pencil") {
        return Ok(FormPencil::from_json(p)?);
    }
    if let Some(o) = get(input, "plebanski") {
        let vars = VariableTable::coordinates(&PLEBANSKI_COORDS)?;
        return Ok(plebanski_pencil_form(&poly(o, &vars)?)?);
    }
    let vars = table(Some(require(input, "variables")?), &[])?;
    let coords = names(require(input, "coordinates")?, "coordinates")?;
    let params = names(require(input, "params")?, "params")?;
    let degree = require(input, "degree")?
        .as_u64()
        .ok_or_else(|| CliError::Input("`degree` must be a non-negative integer".into()))? as usize;
    let mut form = DifferentialForm::zero_named(&vars, &coords, degree)?;
    for term in array(require(input, "terms")?, "terms")? {
        let Some([pos, c]) = term.as_array().map(Vec::as_slice) else {
            return bad("form terms are [[positions], coefficient] pairs");
        };
        let pos: Vec<usize> = serde_json::from_value(pos.clone())
            .map_err(|e| CliError::Input(format!("term positions: {e}")))?;
        form = form.add(&DifferentialForm::monomial(&form, poly(c, &vars)?, &pos)?)?;
    }
    Ok(FormPencil::new(form, &params)?)
}

/// Rank conditions `(Ω)^{l+1} = 0`, `(Ω)^l ≠ 0`, `dΩ = 0` on a 2-form pencil.
pub fn pencil(input: &Value, opts: &Options) -> CliResult<Outcome> {
    let l = opts.usize_in("l", 1, 1, 8)?;
    let p = read_pencil(input)?;
    let r = gindikin_check(&p, l)?;
    let mut out = Outcome::default();
    out.checks.push(Check::pencil("power_l_plus_1", &r.power_l_plus_1));
    let witness = r
        .witness
        .as_ref()
        .map(|(tau, f)| json!({ "tau": tau, "form": form_summary(f) }));
    out.checks
        .push(Check::pass_if("power_l_nonzero", witness.is_some(), json!({ "witness": witness })));
    out.checks.push(Check::pencil("closed", &r.closedness));
    Ok(out)
}

/// Symmetric determinant metric of a 3×3 frame of 1-forms.
pub fn metric3(input: &Value) -> CliResult<Outcome> {
    let vars = table(get(input, "variables"), &["x", "y", "z"])?;
    let coords = match get(input, "coordinates") {
        Some(c) => names(c, "coordinates")?,
        None => vars.variables().iter().map(|v| v.name.clone()).collect(),
    };
    let like = DifferentialForm::zero_named(&vars, &coords, 1)?;
    let rows = array(require(input, "frame")?, "frame")?;
    if rows.len() != 3 {
        return bad("the frame has three rows");
    }
    let mut frame: Vec<[DifferentialForm; 3]> = Vec::with_capacity(3);
    for row in rows {
        let cells = array(row, "frame row")?;
        if cells.len() != 3 {
            return bad("each frame row has three 1-forms");
        }
        frame.push([one_form(&cells[0], &like)?, one_form(&cells[1], &like)?, one_form(&cells[2], &like)?]);
    }
    let frame: [[DifferentialForm; 3]; 3] = frame.try_into().expect("three rows");
    let g = det_metric3(&frame)?;
    let terms: Vec<Value> = g
        .terms()
        .map(|(k, c)| {
            let names: Vec<&str> = k.iter().map(|&i| vars.name(like.coords()[i])).collect();
            json!({ "basis": names.join("."), "coefficient": c.to_string() })
        })
        .collect();
    let mut out = Outcome::default();
    out.checks.push(Check::pass_if(
        "metric_nonzero",
        !g.is_zero(),
        json!({ "terms": terms.len() }),
    ));
    out.results.insert("metric".into(), Value::Array(terms));
    Ok(out)
}

fn solution(v: &Value, opts: &Options) -> CliResult<Solution> {
    let xt = VariableTable::coordinates(&["x", "t"])?;
    if let Some(p) = get(v, "polynomial") {
        return Ok(Solution::Polynomial(poly(p, &xt)?));
    }
    if let Some(g) = get(v, "grid") {
        let x = floats(require(g, "x")?, "grid x")?;
        let t = floats(require(g, "t")?, "grid t")?;
        let u = array(require(g, "u")?, "grid u")?
            .iter()
            .map(|row| floats(row, "grid u"))
            .collect::<CliResult<Vec<_>>>()?;
        return Ok(Solution::Grid(Grid::new(x, t, u)?));
    }
    let q = require(v, "quotient")?;
    let num = poly(require(q, "num")?, &xt)?.compile();
    let den = match get(q, "den") {
        Some(d) => poly(d, &xt)?,
        None => MultiPoly::one(&xt),
    }
    .compile();
    let range = |key: &str, default: [f64; 2]| -> CliResult<(f64, f64)> {
        let r = match opts.raw(key) {
            Some(v) => floats(v, key)?,
            None => default.to_vec(),
        };
        match r.as_slice() {
            [a, b] if a < b => {
                opts.record(key, json!([float(*a), float(*b)]));
                Ok((*a, *b))
            }
            _ => bad(format!("option `{key}` is an increasing pair")),
        }
    };
    let xr = range("x_range", [-1.0, 1.0])?;
    let tr = range("t_range", [0.0, 0.1])?;
    let nx = opts.usize_in("nx", 200, 3, 5000)?;
    let nt = opts.usize_in("nt", 200, 3, 5000)?;
    Ok(Solution::Grid(Grid::sample(xr, tr, nx, nt, |x, t| {
        num.eval(&[x, t]) / den.eval(&[x, t])
    })?))
}

/// `A_t − B_x` along a solution, plus the commutator `AB − BA`.
pub fn hydro(input: &Value, opts: &Options) -> CliResult<Outcome> {
    let vars = table(get(input, "variables"), &["u"])?;
    let a = matrix(require(input, "A")?, &vars, "A")?;
    let b = matrix(require(input, "B")?, &vars, "B")?;
    let sol = solution(require(input, "solution")?, opts)?;
    let tol = opts.f64_in("tol", 1e-6, 0.0, 1.0)?;
    let res = hydro_compat_residual(&a, &b, &sol)?;
    let mut out = Outcome::default();
    match res {
        HydroResidual::Polynomial { compat, commutator } => {
            let render = |m: &Vec<Vec<MultiPoly>>| -> Value {
                json!(m.iter().map(|r| r.iter().map(|p| p.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>())
            };
            let zero = |m: &Vec<Vec<MultiPoly>>| m.iter().flatten().all(MultiPoly::is_zero);
            out.checks
                .push(Check::pass_if("compatibility", zero(&compat), json!({ "residual": render(&compat) })));
            out.checks.push(Check::pass_if(
                "commutator",
                zero(&commutator),
                json!({ "residual": render(&commutator) }),
            ));
        }
        HydroResidual::Grid {
            compat_max,
            commutator_max,
            interior_points,
        } => {
            let detail = |v: f64| json!({ "max_abs": float(v), "tolerance": float(tol), "interior_points": interior_points });
            out.checks
                .push(Check::pass_if("compatibility", compat_max <= tol, detail(compat_max)));
            out.checks
                .push(Check::pass_if("commutator", commutator_max <= tol, detail(commutator_max)));
        }
    }
    Ok(out)
}
