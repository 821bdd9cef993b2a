use std::sync::Arc;

use crate::error::{Error, Result};
use crate::symalg::{ExactScalar, LaurentObject, MultiPoly, Variable, VariableTable};

/// Table `lambda, p, q, t1..tK`. Series coefficients never contain
/// `lambda`; the slot exists so series can be turned into polynomials for
/// form computations.
pub fn vp_table(depth: usize) -> Arc<VariableTable> {
    let mut vars = vec![
        Variable::coordinate("lambda"),
        Variable::coordinate("p"),
        Variable::coordinate("q"),
    ];
    vars.extend((1..=depth).map(|n| Variable::time(format!("t{n}"))));
    VariableTable::new(vars).expect("distinct names")
}

/// Candidate solution `(L, M, N)` with explicit `t_n` dependence.
#[derive(Debug, Clone)]
pub struct VpTriple {
    pub l: LaurentObject,
    pub m: LaurentObject,
    pub n: LaurentObject,
}

impl VpTriple {
    pub fn new(l: LaurentObject, m: LaurentObject, n: LaurentObject) -> Result<Self> {
        if l.vars() != m.vars() || l.vars() != n.vars() {
            return Err(Error::TableMismatch);
        }
        for name in ["lambda", "p", "q"] {
            l.vars().index_of(name)?;
        }
        Ok(Self { l, m, n })
    }

    pub fn vars(&self) -> &Arc<VariableTable> {
        self.l.vars()
    }

    pub fn components(&self) -> [&LaurentObject; 3] {
        [&self.l, &self.m, &self.n]
    }

    fn time(&self, n: usize) -> Result<usize> {
        self.vars().index_of(&format!("t{n}"))
    }

    /// `(B_{1n}, B_{2n}) = ((L^n)_{≥0}, (M^n)_{≥0})`, λ⁰ included.
    pub fn generators(&self, n: usize) -> Result<(LaurentObject, LaurentObject)> {
        let b1 = self.l.pow(n as u32)?.project_nonneg();
        let b2 = self.m.pow(n as u32)?.project_nonneg();
        Ok((b1, b2))
    }
}

/// Jacobian 3-bracket in `(λ, p, q)`.
pub fn nambu3(f: &LaurentObject, g: &LaurentObject, h: &LaurentObject) -> Result<LaurentObject> {
    let vars = f.vars();
    if vars != g.vars() || vars != h.vars() {
        return Err(Error::TableMismatch);
    }
    let p = vars.index_of("p")?;
    let q = vars.index_of("q")?;
    let row = |s: &LaurentObject| [s.deriv_lambda(), s.partial(p), s.partial(q)];
    let [a, b, c] = [row(f), row(g), row(h)];
    let minor = |i: usize, j: usize| -> Result<LaurentObject> { b[i].mul(&c[j])?.sub(&b[j].mul(&c[i])?) };
    a[0].mul(&minor(1, 2)?)?
        .sub(&a[1].mul(&minor(0, 2)?)?)?
        .add(&a[2].mul(&minor(0, 1)?)?)
}

fn flow_bracket(b1: &LaurentObject, b2: &LaurentObject, x: &LaurentObject) -> Result<LaurentObject> {
    nambu3(b1, b2, x)
}

/// `∂X/∂t_n − {B_{1n}, B_{2n}, X}` for `X = L, M, N`.
pub fn vp_flow_residual(triple: &VpTriple, n: usize) -> Result<[LaurentObject; 3]> {
    if n == 0 {
        return Err(Error::Invalid("flow index must be at least 1".into()));
    }
    let t = triple.time(n)?;
    let (b1, b2) = triple.generators(n)?;
    let res = |x: &LaurentObject| x.partial(t).sub(&flow_bracket(&b1, &b2, x)?);
    Ok([res(&triple.l)?, res(&triple.m)?, res(&triple.n)?])
}

/// `{L, M, N} − 1`.
pub fn volume_constraint_residual(triple: &VpTriple) -> Result<LaurentObject> {
    nambu3(&triple.l, &triple.m, &triple.n)?.sub(&LaurentObject::one(triple.vars()))
}

/// `L = λ`, `M = p`, `N = q + t1 + Σ_{n=2}^{K} n² t_n λ^{n−1} p^{n−1}`.
pub fn vacuum_solution(depth: usize) -> Result<VpTriple> {
    if depth == 0 {
        return Err(Error::Invalid("depth must be at least 1".into()));
    }
    let vars = vp_table(depth);
    let v = |name: &str| MultiPoly::var(&vars, name).expect("in vp_table");
    let l = LaurentObject::lambda_power(&vars, 1);
    let m = LaurentObject::constant(v("p"));
    let mut n = LaurentObject::constant(&v("q") + &v("t1"));
    for k in 2..=depth {
        let c = (&v(&format!("t{k}")) * &v("p").pow(k as u32 - 1)).scale_int((k * k) as i64);
        n = n.add(&LaurentObject::monomial(c, k as i64 - 1))?;
    }
    VpTriple::new(l, m, n)
}

/// Mixed-partials residual `D_n(F_m X) − D_m(F_n X)` where
/// `F_n X = {B_{1n}, B_{2n}, X}` and every time derivative is replaced by
/// its flow:
///
/// `D_n(F_m X) = {(m L^{m−1} F_n L)_{≥0}, B_{2m}, X}
///             + {B_{1m}, (m M^{m−1} F_n M)_{≥0}, X} + {B_{1m}, B_{2m}, F_n X}`.
pub fn cross_flow_residual(triple: &VpTriple, n: usize, m: usize) -> Result<[LaurentObject; 3]> {
    if n == 0 || m == 0 {
        return Err(Error::Invalid("flow index must be at least 1".into()));
    }
    let zero = || LaurentObject::zero(triple.vars());
    if n == m {
        return Ok([zero(), zero(), zero()]);
    }
    let gn = triple.generators(n)?;
    let gm = triple.generators(m)?;
    let flow = |g: &(LaurentObject, LaurentObject), x: &LaurentObject| flow_bracket(&g.0, &g.1, x);
    let fl = |g: &(LaurentObject, LaurentObject)| -> Result<[LaurentObject; 3]> {
        Ok([flow(g, &triple.l)?, flow(g, &triple.m)?, flow(g, &triple.n)?])
    };
    let (fn_, fm) = (fl(&gn)?, fl(&gm)?);
    // D_a(F_b X) with generators of b differentiated along flow a.
    let mixed = |a_flows: &[LaurentObject; 3], b: usize, gb: &(LaurentObject, LaurentObject), x: &LaurentObject, a_x: &LaurentObject| -> Result<LaurentObject> {
        let lp = triple.l.pow(b as u32 - 1)?;
        let mp = triple.m.pow(b as u32 - 1)?;
        let bi = ExactScalar::from_integer((b as i64).into());
        let db1 = lp.mul(&a_flows[0])?.scale(&bi).project_nonneg();
        let db2 = mp.mul(&a_flows[1])?.scale(&bi).project_nonneg();
        nambu3(&db1, &gb.1, x)?
            .add(&nambu3(&gb.0, &db2, x)?)?
            .add(&nambu3(&gb.0, &gb.1, a_x)?)
    };
    let xs = triple.components();
    let mut out = [zero(), zero(), zero()];
    for i in 0..3 {
        let lhs = mixed(&fn_, m, &gm, xs[i], &fn_[i])?;
        let rhs = mixed(&fm, n, &gn, xs[i], &fm[i])?;
        out[i] = lhs.sub(&rhs)?;
    }
    Ok(out)
}

/// Substitutes `t_n ↦ t_n + c` in every coefficient.
pub fn shift_time(triple: &VpTriple, n: usize, c: &ExactScalar) -> Result<VpTriple> {
    let vars = triple.vars().clone();
    let t = triple.time(n)?;
    let image = &MultiPoly::var_index(&vars, t) + &MultiPoly::constant(&vars, c.clone());
    let sub = |s: &LaurentObject| s.map_coeffs(|p| p.substitute(t, &image));
    VpTriple::new(sub(&triple.l)?, sub(&triple.m)?, sub(&triple.n)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(vars: &Arc<VariableTable>, s: &str) -> MultiPoly {
        crate::symalg::parse_poly(s, vars).unwrap()
    }

    #[test]
    fn bracket_basics() {
        let vars = vp_table(2);
        let l = LaurentObject::lambda_power(&vars, 1);
        let p = LaurentObject::constant(poly(&vars, "p"));
        let q = LaurentObject::constant(poly(&vars, "q"));
        assert_eq!(nambu3(&l, &p, &q).unwrap(), LaurentObject::one(&vars));
        assert_eq!(nambu3(&p, &l, &q).unwrap(), LaurentObject::one(&vars).neg());
    }

    #[test]
    fn generator_bracket_with_n() {
        let vars = vp_table(3);
        for n in 1..=3i64 {
            let ln = LaurentObject::lambda_power(&vars, n);
            let pn = LaurentObject::constant(poly(&vars, &format!("p^{n}")));
            let c = poly(&vars, &format!("7*t1*p^{}", n - 1));
            let nn = LaurentObject::constant(poly(&vars, "q")).add(&LaurentObject::monomial(c, n - 1)).unwrap();
            let got = nambu3(&ln, &pn, &nn).unwrap();
            let want = LaurentObject::monomial(poly(&vars, &format!("{}*p^{}", n * n, n - 1)), n - 1);
            assert_eq!(got, want);
        }
    }

    #[test]
    fn vacuum_is_exact_solution() {
        for depth in 1..=4 {
            let v = vacuum_solution(depth).unwrap();
            assert!(volume_constraint_residual(&v).unwrap().is_zero());
            for n in 1..=depth {
                for r in vp_flow_residual(&v, n).unwrap() {
                    assert!(r.is_zero() && r.is_complete(), "K={depth} n={n}: {r}");
                }
            }
        }
    }

    #[test]
    fn vacuum_k2_shape() {
        let v = vacuum_solution(2).unwrap();
        assert_eq!(v.n.coeff(0).unwrap(), poly(v.vars(), "q + t1"));
        assert_eq!(v.n.coeff(1).unwrap(), poly(v.vars(), "4*t2*p"));
        let v1 = vacuum_solution(1).unwrap();
        assert_eq!(v1.n.nonzero_exponents(), vec![0]);
    }

    #[test]
    fn naive_constant_triple_is_not_a_solution() {
        let vars = vp_table(2);
        let t = VpTriple::new(
            LaurentObject::lambda_power(&vars, 1),
            LaurentObject::constant(poly(&vars, "p")),
            LaurentObject::constant(poly(&vars, "q")),
        )
        .unwrap();
        let [rl, rm, rn] = vp_flow_residual(&t, 2).unwrap();
        assert!(rl.is_zero() && rm.is_zero());
        assert_eq!(rn, LaurentObject::monomial(poly(&vars, "-4*p"), 1));
        assert!(volume_constraint_residual(&t).unwrap().is_zero());
    }

    #[test]
    fn scaled_triple_breaks_volume() {
        let vars = vp_table(1);
        let t = VpTriple::new(
            LaurentObject::lambda_power(&vars, 1),
            LaurentObject::constant(poly(&vars, "p")),
            LaurentObject::constant(poly(&vars, "2*q")),
        )
        .unwrap();
        assert_eq!(volume_constraint_residual(&t).unwrap(), LaurentObject::one(&vars));
    }

    #[test]
    fn cross_flows_on_vacuum() {
        let v = vacuum_solution(3).unwrap();
        for (n, m) in [(2, 3), (1, 2), (1, 3), (2, 2)] {
            for r in cross_flow_residual(&v, n, m).unwrap() {
                assert!(r.is_zero(), "({n},{m}): {r}");
            }
        }
    }

    #[test]
    fn cross_flows_detect_negative_powers() {
        // Not a solution: L and N carry negative powers, so the projections truncate.
        let vars = vp_table(3);
        let l = LaurentObject::lambda_power(&vars, 1)
            .add(&LaurentObject::monomial(poly(&vars, "p*q + t2"), -1))
            .unwrap();
        let m = LaurentObject::constant(poly(&vars, "p + q^2"))
            .add(&LaurentObject::monomial(poly(&vars, "t1*q"), 1))
            .unwrap();
        let n = LaurentObject::constant(poly(&vars, "q + p^2*t3"))
            .add(&LaurentObject::monomial(poly(&vars, "q*t1"), -2))
            .unwrap();
        let t = VpTriple::new(l, m, n).unwrap();
        let r = cross_flow_residual(&t, 1, 2).unwrap();
        assert!(r.iter().any(|x| !x.is_zero()));
    }

    #[test]
    fn time_shift_invariance() {
        let v = vacuum_solution(3).unwrap();
        let c = ExactScalar::new(5.into(), 3.into());
        for n in 1..=3 {
            let s = shift_time(&v, n, &c).unwrap();
            assert!(volume_constraint_residual(&s).unwrap().is_zero());
            for k in 1..=3 {
                assert!(vp_flow_residual(&s, k).unwrap().iter().all(LaurentObject::is_zero));
            }
        }
    }

    #[test]
    fn missing_time_is_an_error() {
        let v = vacuum_solution(2).unwrap();
        assert!(matches!(vp_flow_residual(&v, 3), Err(Error::UnknownVariable(_))));
    }
}
