use crate::error::{Error, Result};
use crate::symalg::{CompiledPoly, MultiPoly};

/// Sampled scalar field `u[it][ix]` on a tensor grid.
#[derive(Debug, Clone)]
pub struct Grid {
    pub x: Vec<f64>,
    pub t: Vec<f64>,
    pub u: Vec<Vec<f64>>,
}

impl Grid {
    /// Uniform `nx × nt` grid over closed intervals, sampling `f(x, t)`.
    pub fn sample<F: Fn(f64, f64) -> f64>(x: (f64, f64), t: (f64, f64), nx: usize, nt: usize, f: F) -> Result<Self> {
        if nx < 3 || nt < 3 {
            return Err(Error::Dimension("grids need at least 3 points per axis".into()));
        }
        let axis = |(a, b): (f64, f64), n: usize| -> Vec<f64> {
            (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
        };
        let xs = axis(x, nx);
        let ts = axis(t, nt);
        let u = ts.iter().map(|&tv| xs.iter().map(|&xv| f(xv, tv)).collect()).collect();
        Self::new(xs, ts, u)
    }

    pub fn new(x: Vec<f64>, t: Vec<f64>, u: Vec<Vec<f64>>) -> Result<Self> {
        let increasing = |v: &[f64]| v.windows(2).all(|w| w[0] < w[1]);
        if x.len() < 3 || t.len() < 3 || !increasing(&x) || !increasing(&t) {
            return Err(Error::Dimension("grid axes must be strictly increasing with at least 3 points".into()));
        }
        if u.len() != t.len() || u.iter().any(|row| row.len() != x.len()) {
            return Err(Error::Dimension(format!(
                "grid values must be {} rows of {} samples",
                t.len(),
                x.len()
            )));
        }
        if u.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::Invalid("grid values must be finite".into()));
        }
        Ok(Self { x, t, u })
    }
}

/// A solution `u(x, t)`: an exact polynomial over a table with `x` and `t`,
/// or samples on a grid.
#[derive(Debug, Clone)]
pub enum Solution {
    Polynomial(MultiPoly),
    Grid(Grid),
}

#[derive(Debug, Clone)]
pub enum HydroResidual {
    Polynomial {
        compat: Vec<Vec<MultiPoly>>,
        commutator: Vec<Vec<MultiPoly>>,
    },
    Grid {
        compat_max: f64,
        commutator_max: f64,
        interior_points: usize,
    },
}

impl HydroResidual {
    /// Exact zero in polynomial mode; `≤ tol` on the grid.
    pub fn within(&self, tol: f64) -> bool {
        match self {
            Self::Polynomial { compat, commutator } => {
                compat.iter().chain(commutator).flatten().all(MultiPoly::is_zero)
            }
            Self::Grid {
                compat_max,
                commutator_max,
                ..
            } => *compat_max <= tol && *commutator_max <= tol,
        }
    }
}

type Matrix = [Vec<MultiPoly>];

fn check_square(a: &Matrix, b: &Matrix) -> Result<usize> {
    let n = a.len();
    if n == 0 || b.len() != n || a.iter().chain(b).any(|r| r.len() != n) {
        return Err(Error::Dimension("A and B must be square matrices of equal size".into()));
    }
    let vars = a[0][0].vars();
    if a.iter().chain(b).flatten().any(|p| p.vars() != vars) {
        return Err(Error::TableMismatch);
    }
    vars.index_of("u")?;
    Ok(n)
}

fn commutator(a: &Matrix, b: &Matrix) -> Vec<Vec<MultiPoly>> {
    let n = a.len();
    let vars = a[0][0].vars();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut acc = MultiPoly::zero(vars);
                    for k in 0..n {
                        acc = &acc + &(&(&a[i][k] * &b[k][j]) - &(&b[i][k] * &a[k][j]));
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

/// `A_t − B_x` along `u(x, t)` by the chain rule, plus `AB − BA`.
///
/// Polynomial mode composes exactly. Grid mode uses central differences for
/// `u_t`, `u_x` on interior points and reports max-abs values.
pub fn hydro_compat_residual(a: &Matrix, b: &Matrix, sol: &Solution) -> Result<HydroResidual> {
    let n = check_square(a, b)?;
    let ring = a[0][0].vars().clone();
    let u = ring.index_of("u")?;
    let comm = commutator(a, b);
    match sol {
        Solution::Polynomial(us) => {
            let target = us.vars().clone();
            let x = target.index_of("x")?;
            let t = target.index_of("t")?;
            let images = ring
                .variables()
                .iter()
                .enumerate()
                .map(|(i, v)| {
                    if i == u {
                        Ok(us.clone())
                    } else {
                        MultiPoly::var(&target, &v.name)
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            let along = |p: &MultiPoly| p.compose(&target, &images);
            let mut compat = vec![Vec::with_capacity(n); n];
            for i in 0..n {
                for j in 0..n {
                    let at = along(&a[i][j])?.partial(t);
                    let bx = along(&b[i][j])?.partial(x);
                    compat[i].push(at.checked_sub(&bx)?);
                }
            }
            let commutator = comm
                .iter()
                .map(|row| row.iter().map(along).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()?;
            Ok(HydroResidual::Polynomial { compat, commutator })
        }
        Solution::Grid(g) => {
            for p in a.iter().chain(b).chain(&comm).flatten() {
                if (0..ring.len()).any(|v| v != u && p.depends_on(v)) {
                    return Err(Error::Invalid("grid mode needs A and B to depend on u only".into()));
                }
            }
            let compile = |m: &Matrix, f: &dyn Fn(&MultiPoly) -> MultiPoly| -> Vec<CompiledPoly> {
                m.iter().flatten().map(|p| f(p).compile()).collect()
            };
            let da = compile(a, &|p| p.partial(u));
            let db = compile(b, &|p| p.partial(u));
            let cm = compile(&comm, &|p| p.clone());
            let mut point = vec![0.0; ring.len()];
            let (mut compat_max, mut commutator_max) = (0.0f64, 0.0f64);
            let mut count = 0;
            for it in 1..g.t.len() - 1 {
                for ix in 1..g.x.len() - 1 {
                    let ut = (g.u[it + 1][ix] - g.u[it - 1][ix]) / (g.t[it + 1] - g.t[it - 1]);
                    let ux = (g.u[it][ix + 1] - g.u[it][ix - 1]) / (g.x[ix + 1] - g.x[ix - 1]);
                    point[u] = g.u[it][ix];
                    for (pa, pb) in da.iter().zip(&db) {
                        compat_max = compat_max.max((pa.eval(&point) * ut - pb.eval(&point) * ux).abs());
                    }
                    for c in &cm {
                        commutator_max = commutator_max.max(c.eval(&point).abs());
                    }
                    count += 1;
                }
            }
            Ok(HydroResidual::Grid {
                compat_max,
                commutator_max,
                interior_points: count,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symalg::{parse_poly, VariableTable};
    use std::sync::Arc;

    fn ring() -> Arc<VariableTable> {
        VariableTable::coordinates(&["u"]).unwrap()
    }

    fn m(s: &str) -> Vec<Vec<MultiPoly>> {
        vec![vec![parse_poly(s, &ring()).unwrap()]]
    }

    fn xt() -> Arc<VariableTable> {
        VariableTable::coordinates(&["x", "t"]).unwrap()
    }

    #[test]
    fn equal_matrices_along_translation() {
        let r = ring();
        let u = MultiPoly::var(&r, "u").unwrap();
        let a = vec![vec![u.clone(), u.pow(2)], vec![MultiPoly::one(&r), u.pow(3)]];
        let sol = Solution::Polynomial(parse_poly("x + t", &xt()).unwrap());
        let res = hydro_compat_residual(&a, &a, &sol).unwrap();
        assert!(res.within(0.0));
    }

    #[test]
    fn burgers_hopf_on_grid() {
        let g = Grid::sample((-1.0, 1.0), (0.0, 0.1), 200, 200, |x, t| x / (1.0 + t)).unwrap();
        let res = hydro_compat_residual(&m("u"), &m("-1/2*u^2"), &Solution::Grid(g)).unwrap();
        let HydroResidual::Grid {
            compat_max,
            interior_points,
            ..
        } = res
        else {
            unreachable!()
        };
        assert_eq!(interior_points, 198 * 198);
        assert!(compat_max <= 1e-6, "{compat_max}");
    }

    #[test]
    fn non_solution_control() {
        let g = Grid::sample((-1.0, 1.0), (0.0, 0.1), 200, 200, |x, t| x + t).unwrap();
        let res = hydro_compat_residual(&m("u"), &m("-1/2*u^2"), &Solution::Grid(g)).unwrap();
        assert!(!res.within(1e-2));

        let sol = Solution::Polynomial(parse_poly("x + 2*t", &xt()).unwrap());
        let HydroResidual::Polynomial { compat, .. } = hydro_compat_residual(&m("u"), &m("u"), &sol).unwrap() else {
            unreachable!()
        };
        assert_eq!(compat[0][0], MultiPoly::one(&xt()));
    }

    #[test]
    fn polynomial_burgers_solution() {
        // u = x/(1+t) is not polynomial; u = c is, and u_t + u u_x = 0 for u = 2.
        let sol = Solution::Polynomial(parse_poly("2 + 0*x", &xt()).unwrap());
        assert!(hydro_compat_residual(&m("u"), &m("-1/2*u^2"), &sol).unwrap().within(0.0));
    }

    #[test]
    fn commutator_of_non_commuting_pair() {
        let r = ring();
        let u = MultiPoly::var(&r, "u").unwrap();
        let z = MultiPoly::zero(&r);
        let a = vec![vec![z.clone(), u.clone()], vec![z.clone(), z.clone()]];
        let b = vec![vec![z.clone(), z.clone()], vec![u.clone(), z.clone()]];
        let sol = Solution::Polynomial(parse_poly("x", &xt()).unwrap());
        let HydroResidual::Polynomial { commutator, .. } = hydro_compat_residual(&a, &b, &sol).unwrap() else {
            unreachable!()
        };
        assert_eq!(commutator[0][0], parse_poly("x^2", &xt()).unwrap());
        assert_eq!(commutator[1][1], parse_poly("-x^2", &xt()).unwrap());
    }

    #[test]
    fn dimension_mismatch() {
        let a = m("u");
        let r = ring();
        let b = vec![vec![MultiPoly::one(&r); 2]; 2];
        let sol = Solution::Polynomial(parse_poly("x", &xt()).unwrap());
        assert!(matches!(hydro_compat_residual(&a, &b, &sol), Err(Error::Dimension(_))));
    }
}
