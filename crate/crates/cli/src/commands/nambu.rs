use nambu_core::flows::{divergence, vector_field, NambuSystem};
use nambu_core::hierarchy::Verdict;
use nambu_core::nambu::{
    algebraic_constraint_residual, differential_constraint_residual, fundamental_identity_residual,
    is_decomposable_oracle, nambu_bracket, BracketSpace, NambuTensor,
};
use nambu_core::sample::{canonical_nondecomposable, decomposability_tensors, random_poly};
use nambu_core::symalg::{parse_poly, VariableTable};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::Outcome;
use crate::error::CliResult;
use crate::input::{get, names, poly, polys, table};
use crate::report::Check;
use crate::scenario::Options;
use crate::Context;

fn space_of(input: &Value, default: &[&str]) -> CliResult<BracketSpace> {
    let vars = table(get(input, "variables"), default)?;
    let coords = match get(input, "coords") {
        Some(c) => names(c, "coords")?,
        None => vars.variables().iter().map(|v| v.name.clone()).collect(),
    };
    Ok(BracketSpace::new(&vars, &coords)?)
}

/// `{f1, …, fn}` for supplied functions, or the rigid-body identities when
/// no functions are given.
pub fn bracket(input: &Value, _opts: &Options) -> CliResult<Outcome> {
    let mut out = Outcome::default();
    let Some(fs) = get(input, "functions") else {
        let sys = NambuSystem::rigid_body_symbolic();
        let field = vector_field(&sys);
        let expected = ["a1*m2*m3", "a2*m1*m3", "(a3 - k)*m1*m2"];
        for (i, (f, e)) in field.iter().zip(expected).enumerate() {
            let e = parse_poly(e, sys.vars())?;
            out.results.insert(format!("m{}_dot", i + 1), f.to_string().into());
            out.checks.push(Check::poly(format!("rigid_body_m{}", i + 1), &(f - &e)));
        }
        out.checks
            .push(Check::poly("divergence", &divergence(&field, sys.phase())?));
        let h = sys.hamiltonians();
        for (i, hi) in h.iter().enumerate() {
            let b = sys.specialize(&nambu_bracket(&[hi.clone(), h[0].clone(), h[1].clone()], &sys.space())?);
            out.checks.push(Check::poly(format!("integral_H{}", i + 1), &b));
        }
        return Ok(out);
    };
    let space = space_of(input, &["x", "y", "z"])?;
    let fs = polys(fs, space.vars(), "functions")?;
    let value = nambu_bracket(&fs, &space)?;
    out.results.insert("bracket".into(), value.to_string().into());
    match get(input, "expected") {
        Some(e) => out
            .checks
            .push(Check::poly("matches_expected", &(&value - &poly(e, space.vars())?))),
        None => out.checks.push(Check::new("bracket", Verdict::Pass, json!({ "value": value.to_string() }))),
    }
    Ok(out)
}

/// Fundamental identity on supplied `2n − 1` functions, or on a seeded
/// random sweep over `(x, y, z)`.
pub fn fi_check(input: &Value, opts: &Options, ctx: &Context) -> CliResult<Outcome> {
    let mut out = Outcome::default();
    if let Some(fs) = get(input, "functions") {
        let space = space_of(input, &["x", "y", "z"])?;
        let fs = polys(fs, space.vars(), "functions")?;
        out.checks
            .push(Check::poly("fundamental_identity", &fundamental_identity_residual(&fs, &space)?));
        return Ok(out);
    }
    let count = opts.usize_in("count", 100, 1, 10_000)?;
    let degree = opts.usize_in("degree", 2, 0, 4)? as u32;
    let max_terms = opts.usize_in("terms", 4, 1, 12)?;
    let seed = ctx.seed(opts)?;
    let vars = VariableTable::coordinates(&["x", "y", "z"])?;
    let space = BracketSpace::new(&vars, &["x", "y", "z"])?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut nonzero = Vec::new();
    for i in 0..count {
        let fs: Vec<_> = (0..5)
            .map(|_| random_poly(&mut rng, &vars, &[0, 1, 2], degree, max_terms, 5))
            .collect();
        let r = fundamental_identity_residual(&fs, &space)?;
        if !r.is_zero() {
            nonzero.push(json!({ "instance": i, "residual": r.to_string() }));
        }
    }
    out.checks.push(Check::pass_if(
        "fundamental_identity",
        nonzero.is_empty(),
        json!({ "instances": count, "nonzero": nonzero }),
    ));
    Ok(out)
}

fn tensor_checks(eta: &NambuTensor, out: &mut Outcome) -> CliResult<()> {
    let alg = algebraic_constraint_residual(eta);
    let alg_zero = alg.values().all(|p| p.is_zero());
    let first_alg = alg
        .iter()
        .find(|(_, p)| !p.is_zero())
        .map(|((i, j), p)| json!({ "i": i, "j": j, "residual": p.to_string() }));
    out.checks.push(Check::pass_if(
        "algebraic_constraint",
        alg_zero,
        json!({ "witness": first_alg }),
    ));
    let diff = differential_constraint_residual(eta);
    let first_diff = diff
        .iter()
        .find(|(_, p)| !p.is_zero())
        .map(|((i, j), p)| json!({ "i": i, "j": j, "residual": p.to_string() }));
    out.checks.push(Check::pass_if(
        "differential_constraint",
        first_diff.is_none(),
        json!({ "witness": first_diff }),
    ));
    if eta.is_constant() {
        let oracle = is_decomposable_oracle(eta)?;
        out.results.insert("decomposable".into(), oracle.into());
        out.checks.push(Check::pass_if(
            "oracle_agreement",
            oracle == alg_zero,
            json!({ "oracle": oracle, "constraint": alg_zero }),
        ));
    }
    Ok(())
}

/// Constraint residuals of a supplied tensor, or the seeded agreement sweep
/// between the algebraic constraint and the decomposability oracle.
pub fn decompose(input: &Value, opts: &Options, ctx: &Context) -> CliResult<Outcome> {
    let mut out = Outcome::default();
    if let Some(t) = get(input, "tensor") {
        tensor_checks(&NambuTensor::from_json(t)?, &mut out)?;
        return Ok(out);
    }
    let count = opts.usize_in("count", 200, 1, 10_000)?;
    let dim = opts.usize_in("dimension", 6, 3, 8)?;
    let seed = ctx.seed(opts)?;
    let names: Vec<String> = (1..=dim).map(|i| format!("e{i}")).collect();
    let vars = VariableTable::coordinates(&names)?;
    let mut tensors = decomposability_tensors(&mut ChaCha8Rng::seed_from_u64(seed), &vars, count);
    if dim == 6 {
        tensors.push(canonical_nondecomposable(&vars));
    }
    let (mut decomposable, mut disagree) = (0usize, Vec::new());
    for (i, eta) in tensors.iter().enumerate() {
        let oracle = is_decomposable_oracle(eta)?;
        let constraint = algebraic_constraint_residual(eta).values().all(|p| p.is_zero());
        decomposable += usize::from(oracle);
        if oracle != constraint {
            disagree.push(json!({ "instance": i, "oracle": oracle, "constraint": constraint }));
        }
    }
    out.checks.push(Check::pass_if(
        "oracle_agreement",
        disagree.is_empty(),
        json!({ "tensors": tensors.len(), "decomposable": decomposable, "disagreements": disagree }),
    ));
    Ok(out)
}
