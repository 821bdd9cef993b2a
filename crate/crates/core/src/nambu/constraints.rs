//! Component form of the fundamental identity for a Nambu tensor.
//!
//! The algebraic part is the quadratic expression
//!
//! ```text
//! S_ij = η_{i1…in} η_{j1…jn}
//!      + Σ_{k=2..n} η_{jn, i2…in with i_k → i1} η_{j1…j(n-1) i_k}
//!      − η_{jn i2…in} η_{j1…j(n-1) i1}
//! ```
//!
//! symmetrized as `S_ij + P(S)_ij` where P swaps `i1` and `j1`. The middle
//! sum is generated from the printed pattern "replace `i_k` by `i1` in the
//! first factor, move `i_k` to the end of the second"; for n = 3 this is
//! pinned against a hand expansion in the tests, larger n follow the same
//! extrapolated pattern.

use std::collections::BTreeMap;

use num_traits::{ToPrimitive, Zero};

use super::tensor::{all_tuples, NambuTensor};
use crate::symalg::{ExactScalar, MultiPoly};

/// `(i, j)` multi-index pair, 0-based.
pub type IndexPair = (Vec<usize>, Vec<usize>);

trait Coeff: Clone {
    fn mul(&self, other: &Self) -> Self;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
}

impl Coeff for MultiPoly {
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
}

impl Coeff for ExactScalar {
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
}

// Integer tensors with entries below 2^40 cannot overflow i128 in S.
impl Coeff for i128 {
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
}

struct Dense<C> {
    values: Vec<C>,
    dim: usize,
}

impl<C: Coeff> Dense<C> {
    fn at(&self, idx: &[usize]) -> &C {
        let flat = idx.iter().fold(0, |acc, &i| acc * self.dim + i);
        &self.values[flat]
    }

    fn s(&self, i: &[usize], j: &[usize]) -> C {
        let n = i.len();
        let jn = j[n - 1];
        let j_head = &j[..n - 1];
        let mut first = Vec::with_capacity(n);
        let mut second = Vec::with_capacity(n);
        let mut acc = self.at(i).mul(self.at(j));
        for k in 1..n {
            first.clear();
            first.push(jn);
            first.extend(i[1..].iter().enumerate().map(|(p, &v)| if p + 1 == k { i[0] } else { v }));
            second.clear();
            second.extend_from_slice(j_head);
            second.push(i[k]);
            acc = acc.add(&self.at(&first).mul(self.at(&second)));
        }
        first.clear();
        first.push(jn);
        first.extend_from_slice(&i[1..]);
        second.clear();
        second.extend_from_slice(j_head);
        second.push(i[0]);
        acc.sub(&self.at(&first).mul(self.at(&second)))
    }

    fn symmetrized(&self, i: &[usize], j: &[usize]) -> C {
        let mut pi = i.to_vec();
        let mut pj = j.to_vec();
        std::mem::swap(&mut pi[0], &mut pj[0]);
        self.s(i, j).add(&self.s(&pi, &pj))
    }
}

enum Backend {
    Int(Dense<i128>),
    Rational(Dense<ExactScalar>),
    Poly(Dense<MultiPoly>),
}

fn backend(eta: &NambuTensor) -> Backend {
    let dense = eta.dense();
    let dim = eta.dim();
    if eta.is_constant() {
        let scalars: Vec<ExactScalar> = dense
            .iter()
            .map(|p| p.constant_value().expect("constant tensor"))
            .collect();
        let small_ints: Option<Vec<i128>> = scalars
            .iter()
            .map(|q| {
                if !q.is_integer() {
                    return None;
                }
                q.to_integer().to_i64().filter(|v| v.unsigned_abs() < 1 << 40).map(i128::from)
            })
            .collect();
        return match small_ints {
            Some(values) => Backend::Int(Dense { values, dim }),
            None => Backend::Rational(Dense {
                values: scalars,
                dim,
            }),
        };
    }
    Backend::Poly(Dense { values: dense, dim })
}

/// Unsymmetrized `S_ij` for one index pair (0-based indices).
pub fn plucker_s(eta: &NambuTensor, i: &[usize], j: &[usize]) -> MultiPoly {
    let dense = Dense {
        values: eta.dense(),
        dim: eta.dim(),
    };
    dense.s(i, j)
}

/// `S_ij + P(S)_ij` over all `N^n × N^n` index pairs. Only nonzero
/// residuals are returned, so an empty map means the constraint holds.
pub fn algebraic_constraint_residual(eta: &NambuTensor) -> BTreeMap<IndexPair, MultiPoly> {
    let tuples = all_tuples(eta.dim(), eta.order());
    let vars = eta.vars().clone();
    let mut out = BTreeMap::new();
    let backend = backend(eta);
    for i in &tuples {
        for j in &tuples {
            let value = match &backend {
                Backend::Int(d) => {
                    let v = d.symmetrized(i, j);
                    (v != 0).then(|| MultiPoly::constant(&vars, ExactScalar::from_integer(v.into())))
                }
                Backend::Rational(d) => {
                    let v = d.symmetrized(i, j);
                    (!Zero::is_zero(&v)).then(|| MultiPoly::constant(&vars, v))
                }
                Backend::Poly(d) => Some(d.symmetrized(i, j)).filter(|v| !v.is_zero()),
            };
            if let Some(v) = value {
                out.insert((i.clone(), j.clone()), v);
            }
        }
    }
    out
}

/// Early-exit form of [`algebraic_constraint_residual`].
pub fn satisfies_algebraic_constraint(eta: &NambuTensor) -> bool {
    let tuples = all_tuples(eta.dim(), eta.order());
    let backend = backend(eta);
    tuples.iter().all(|i| {
        tuples.iter().all(|j| match &backend {
            Backend::Int(d) => d.symmetrized(i, j) == 0,
            Backend::Rational(d) => Zero::is_zero(&d.symmetrized(i, j)),
            Backend::Poly(d) => d.symmetrized(i, j).is_zero(),
        })
    })
}

/// Left minus right side of the differential constraint
///
/// ```text
/// Σ_l ( η_{l i2…in} ∂_l η_{j1…jn} + Σ_{k=2..n} η_{jn, i2…in with i_k → l} ∂_l η_{j1…j(n-1) i_k} )
///   − Σ_l η_{j1…j(n-1) l} ∂_l η_{jn i2…in}
/// ```
///
/// keyed by `(i2…in, j1…jn)`; only nonzero entries are returned.
pub fn differential_constraint_residual(eta: &NambuTensor) -> BTreeMap<IndexPair, MultiPoly> {
    let dim = eta.dim();
    let n = eta.order();
    let eta_d = Dense {
        values: eta.dense(),
        dim,
    };
    let grads: Vec<Dense<MultiPoly>> = eta
        .coords()
        .iter()
        .map(|&x| Dense {
            values: eta_d.values.iter().map(|p| p.partial(x)).collect(),
            dim,
        })
        .collect();
    let vars = eta.vars().clone();
    let mut out = BTreeMap::new();
    let mut first = Vec::with_capacity(n);
    let mut second = Vec::with_capacity(n);
    for irest in all_tuples(dim, n - 1) {
        for j in all_tuples(dim, n) {
            let jn = j[n - 1];
            let j_head = &j[..n - 1];
            let mut acc = MultiPoly::zero(&vars);
            for (l, dl) in grads.iter().enumerate() {
                first.clear();
                first.push(l);
                first.extend_from_slice(&irest);
                acc = &acc + &(eta_d.at(&first) * dl.at(&j));
                for k in 0..n - 1 {
                    first.clear();
                    first.push(jn);
                    first.extend(irest.iter().enumerate().map(|(p, &v)| if p == k { l } else { v }));
                    second.clear();
                    second.extend_from_slice(j_head);
                    second.push(irest[k]);
                    acc = &acc + &(eta_d.at(&first) * dl.at(&second));
                }
                first.clear();
                first.extend_from_slice(j_head);
                first.push(l);
                second.clear();
                second.push(jn);
                second.extend_from_slice(&irest);
                acc = &acc - &(eta_d.at(&first) * dl.at(&second));
            }
            if !acc.is_zero() {
                out.insert((irest.clone(), j.clone()), acc);
            }
        }
    }
    out
}
