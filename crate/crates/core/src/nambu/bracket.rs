use std::sync::Arc;

use crate::error::{Error, Result};
use crate::symalg::{MultiPoly, VariableTable};

/// Ordered coordinates `(x1,…,xn)` defining the Jacobian bracket of order n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BracketSpace {
    vars: Arc<VariableTable>,
    coords: Vec<usize>,
}

impl BracketSpace {
    pub fn new<S: AsRef<str>>(vars: &Arc<VariableTable>, coords: &[S]) -> Result<Self> {
        let idx = coords
            .iter()
            .map(|c| vars.index_of(c.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Self::from_indices(vars, idx)
    }

    pub fn from_indices(vars: &Arc<VariableTable>, coords: Vec<usize>) -> Result<Self> {
        for (k, c) in coords.iter().enumerate() {
            if *c >= vars.len() {
                return Err(Error::Dimension(format!("coordinate index {c} out of range")));
            }
            if coords[..k].contains(c) {
                return Err(Error::DuplicateVariable(vars.name(*c).to_string()));
            }
        }
        if coords.is_empty() {
            return Err(Error::Invalid("bracket needs at least one coordinate".into()));
        }
        Ok(Self {
            vars: vars.clone(),
            coords,
        })
    }

    pub fn order(&self) -> usize {
        self.coords.len()
    }

    pub fn vars(&self) -> &Arc<VariableTable> {
        &self.vars
    }

    pub fn coords(&self) -> &[usize] {
        &self.coords
    }
}

/// Determinant by cofactor expansion along the first row. Brackets here are
/// of order ≤ 6, where this is cheaper than fraction-free elimination over
/// polynomials.
pub fn det(m: &[Vec<MultiPoly>]) -> MultiPoly {
    let n = m.len();
    assert!(n > 0 && m.iter().all(|r| r.len() == n), "square matrix");
    let cols: Vec<usize> = (0..n).collect();
    det_rec(m, 0, &cols)
}

fn det_rec(m: &[Vec<MultiPoly>], row: usize, cols: &[usize]) -> MultiPoly {
    if cols.len() == 1 {
        return m[row][cols[0]].clone();
    }
    let mut acc = MultiPoly::zero(m[0][0].vars());
    for (k, &c) in cols.iter().enumerate() {
        let entry = &m[row][c];
        if entry.is_zero() {
            continue;
        }
        let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let minor = det_rec(m, row + 1, &rest);
        let term = entry * &minor;
        acc = if k % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    acc
}

fn check_args(fs: &[MultiPoly], space: &BracketSpace, expected: usize) -> Result<()> {
    if fs.len() != expected {
        return Err(Error::Arity {
            expected,
            got: fs.len(),
        });
    }
    if fs.iter().any(|f| f.vars() != space.vars()) {
        return Err(Error::TableMismatch);
    }
    Ok(())
}

/// `{f1,…,fn} = det(∂f_i/∂x_j)`.
pub fn nambu_bracket(fs: &[MultiPoly], space: &BracketSpace) -> Result<MultiPoly> {
    check_args(fs, space, space.order())?;
    let jac: Vec<Vec<MultiPoly>> = fs
        .iter()
        .map(|f| space.coords.iter().map(|&x| f.partial(x)).collect())
        .collect();
    Ok(det(&jac))
}

/// Left side minus right side of the fundamental identity
///
/// `Σ_k {f_n,…,{f_1,…,f_{n-1},f_{n+k}},…,f_{2n-1}} = {f_1,…,f_{n-1},{f_n,…,f_{2n-1}}}`
///
/// for `2n−1` arguments.
pub fn fundamental_identity_residual(fs: &[MultiPoly], space: &BracketSpace) -> Result<MultiPoly> {
    let n = space.order();
    check_args(fs, space, 2 * n - 1)?;
    let (head, tail) = fs.split_at(n - 1);
    let inner = |g: &MultiPoly| -> Result<MultiPoly> {
        let mut args = head.to_vec();
        args.push(g.clone());
        nambu_bracket(&args, space)
    };
    let mut lhs = MultiPoly::zero(space.vars());
    for k in 0..n {
        let mut args = tail.to_vec();
        args[k] = inner(&tail[k])?;
        lhs = &lhs + &nambu_bracket(&args, space)?;
    }
    let rhs = inner(&nambu_bracket(tail, space)?)?;
    Ok(&lhs - &rhs)
}
