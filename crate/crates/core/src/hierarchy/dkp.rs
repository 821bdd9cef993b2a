use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::symalg::{LaurentObject, MultiPoly, VarKind, Variable, VariableTable};

/// Truncated Lax series `L = λ + Σ_{n=1}^{K} u_{n+1} λ^{-n}`.
///
/// The table is `x, t1..tK`, then the jets `u_k^(0..=max_jet)` for
/// `k = 2..=K+1`, then `v_i^(0..=max_jet)` for the Orlov corrections.
/// `L` is exact down to `λ^{-K}`.
#[derive(Debug, Clone)]
pub struct DkpState {
    depth: usize,
    max_jet: u32,
    vars: Arc<VariableTable>,
    lax: LaurentObject,
}

impl DkpState {
    pub fn new(depth: usize, max_jet: u32) -> Result<Self> {
        if depth == 0 {
            return Err(Error::Invalid("truncation depth must be at least 1".into()));
        }
        let mut table = vec![Variable::coordinate("x")];
        table.extend((1..=depth).map(|n| Variable::time(format!("t{n}"))));
        for k in 2..=depth + 1 {
            table.extend((0..=max_jet).map(|j| Variable::jet(format!("u{k}"), j)));
        }
        for i in 1..=depth {
            table.extend((0..=max_jet).map(|j| Variable::jet(format!("v{i}"), j)));
        }
        let vars = VariableTable::new(table)?;
        let terms = std::iter::once((1, MultiPoly::one(&vars))).chain((1..=depth).map(|n| {
            let u = vars.jet(&format!("u{}", n + 1), 0).expect("declared above");
            (-(n as i64), MultiPoly::var_index(&vars, u))
        }));
        let lax = LaurentObject::from_terms(&vars, terms, Some(-(depth as i64)))?;
        Ok(Self {
            depth,
            max_jet,
            vars,
            lax,
        })
    }

    /// `L = λ` exactly (every `u_k = 0`).
    pub fn vacuum(depth: usize, max_jet: u32) -> Result<Self> {
        let mut s = Self::new(depth, max_jet)?;
        s.lax = LaurentObject::lambda_power(&s.vars, 1);
        Ok(s)
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn max_jet(&self) -> u32 {
        self.max_jet
    }

    pub fn vars(&self) -> &Arc<VariableTable> {
        &self.vars
    }

    pub fn lax(&self) -> &LaurentObject {
        &self.lax
    }

    /// Symbol `u_k^(j)`.
    pub fn u(&self, k: usize, j: u32) -> Result<MultiPoly> {
        let idx = self
            .vars
            .jet(&format!("u{k}"), j)
            .ok_or_else(|| Error::UnknownVariable(format!("u{k} (order {j})")))?;
        Ok(MultiPoly::var_index(&self.vars, idx))
    }

    /// `B_n = (L^n)_{≥0}`; fails if the projection is not fully exact.
    pub fn b(&self, n: usize) -> Result<LaurentObject> {
        if n == 0 {
            return Err(Error::Invalid("flow index must be at least 1".into()));
        }
        let b = self.lax.pow(n as u32)?.project_nonneg();
        if !b.is_complete() {
            return Err(Error::Truncation(format!(
                "B_{n} needs depth at least {}, have {}",
                n - 1,
                self.depth
            )));
        }
        Ok(b)
    }
}

/// `{f, g} = ∂_λ f · D_x g − D_x f · ∂_λ g`.
pub fn poisson2(f: &LaurentObject, g: &LaurentObject) -> Result<LaurentObject> {
    let a = f.deriv_lambda().mul(&g.total_x_derivative()?)?;
    let b = f.total_x_derivative()?.mul(&g.deriv_lambda())?;
    a.sub(&b)
}

/// `∂u_k/∂t_n` read off `{B_n, L}` at `λ^{1-k}`, for every `k` whose
/// coefficient is exact. Higher `k` are absent from the map.
pub fn dkp_flow(state: &DkpState, n: usize) -> Result<BTreeMap<usize, MultiPoly>> {
    let rhs = poisson2(&state.b(n)?, &state.lax)?;
    let mut out = BTreeMap::new();
    for k in 2..=state.depth + 1 {
        match rhs.coeff(1 - k as i64) {
            Ok(c) => {
                out.insert(k, c);
            }
            Err(Error::Indeterminate(_)) => break,
            Err(e) => return Err(e),
        }
    }
    if out.is_empty() {
        return Err(Error::Truncation(format!(
            "depth {} leaves no exact coefficient for flow t{n}",
            state.depth
        )));
    }
    Ok(out)
}

/// Time derivative of a jet polynomial along a flow, by the chain rule
/// `∂_t c = Σ ∂c/∂u_k^(j) · D_x^j(∂_t u_k)`. Symbols other than `u` jets
/// are treated as constant in time.
fn time_derivative(c: &MultiPoly, flow: &BTreeMap<usize, MultiPoly>, cache: &mut BTreeMap<(usize, u32), MultiPoly>) -> Result<MultiPoly> {
    let vars = c.vars().clone();
    let mut acc = MultiPoly::zero(&vars);
    for v in 0..vars.len() {
        if !c.depends_on(v) {
            continue;
        }
        let VarKind::Jet { base, order } = &vars.get(v).kind else {
            continue;
        };
        let Some(k) = base.strip_prefix('u').and_then(|s| s.parse::<usize>().ok()) else {
            continue;
        };
        let dt = match cache.get(&(k, *order)) {
            Some(d) => d.clone(),
            None => {
                let mut d = flow
                    .get(&k)
                    .ok_or_else(|| Error::Truncation(format!("flow of u{k} is outside the window")))?
                    .clone();
                for _ in 0..*order {
                    d = d.total_x_derivative()?;
                }
                cache.insert((k, *order), d.clone());
                d
            }
        };
        acc = acc.checked_add(&c.partial(v).checked_mul(&dt)?)?;
    }
    Ok(acc)
}

fn series_time_derivative(s: &LaurentObject, flow: &BTreeMap<usize, MultiPoly>) -> Result<LaurentObject> {
    let mut cache = BTreeMap::new();
    let mut out = LaurentObject::zero(s.vars());
    for (e, c) in s.terms() {
        let d = time_derivative(c, flow, &mut cache)?;
        out = out.add(&LaurentObject::monomial(d, e))?;
    }
    Ok(match s.floor() {
        Some(f) => out.truncate_below(f),
        None => out,
    })
}

/// `∂B_n/∂t_m − ∂B_m/∂t_n + {B_n, B_m}` with the time derivatives expanded
/// through the dKP flows.
pub fn zero_curvature_residual(state: &DkpState, n: usize, m: usize) -> Result<LaurentObject> {
    if n == m {
        state.b(n)?;
        return Ok(LaurentObject::zero(&state.vars));
    }
    let bn = state.b(n)?;
    let bm = state.b(m)?;
    let dm_bn = series_time_derivative(&bn, &dkp_flow(state, m)?)?;
    let dn_bm = series_time_derivative(&bm, &dkp_flow(state, n)?)?;
    dm_bn.sub(&dn_bm)?.add(&poisson2(&bn, &bm)?)
}

/// Times and corrections for the Orlov series. Entries may be symbols or
/// numbers; missing entries are zero.
#[derive(Debug, Clone)]
pub struct OrlovData {
    pub times: Vec<MultiPoly>,
    pub corrections: Vec<MultiPoly>,
}

impl OrlovData {
    /// `t1..tK` and `v1..vK` as the state's own symbols.
    pub fn symbolic(state: &DkpState) -> Self {
        let vars = &state.vars;
        let sym = |name: String| MultiPoly::var(vars, &name).expect("declared in DkpState::new");
        Self {
            times: (1..=state.depth).map(|n| sym(format!("t{n}"))).collect(),
            corrections: (1..=state.depth).map(|i| sym(format!("v{i}"))).collect(),
        }
    }

    pub fn zero() -> Self {
        Self {
            times: Vec::new(),
            corrections: Vec::new(),
        }
    }
}

/// `M = Σ n t_n L^{n−1} + x + Σ v_i L^{−i−1}`.
pub fn orlov_m(state: &DkpState, data: &OrlovData) -> Result<LaurentObject> {
    if data.times.len() > state.depth || data.corrections.len() > state.depth {
        return Err(Error::Truncation(format!(
            "Orlov data longer than depth {}",
            state.depth
        )));
    }
    let vars = &state.vars;
    let x = MultiPoly::var(vars, "x")?;
    let mut m = LaurentObject::constant(x);
    let mut power = LaurentObject::one(vars);
    for (i, t) in data.times.iter().enumerate() {
        if i > 0 {
            power = power.mul(&state.lax)?;
        }
        m = m.add(&power.scale_poly(&t.scale_int(i as i64 + 1))?)?;
    }
    if data.corrections.iter().any(|v| !v.is_zero()) {
        let inv = state.lax.inverse(-(state.depth as i64) - 2)?;
        let mut power = inv.clone();
        for v in &data.corrections {
            power = power.mul(&inv)?;
            m = m.add(&power.scale_poly(v)?)?;
        }
    }
    Ok(m)
}
