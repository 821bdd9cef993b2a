use std::collections::BTreeMap;
use std::sync::Arc;

use serde_json::{json, Value};

use super::bracket::det;
use crate::error::{Error, Result};
use crate::symalg::json::{field, table_from_json, table_to_json, terms_from_json, terms_to_json};
use crate::symalg::{MultiPoly, VariableTable};

/// Totally antisymmetric order-n tensor on N coordinates.
///
/// Only strictly increasing index tuples are stored; every other component
/// is recovered by the sign of the sorting permutation, or is zero when an
/// index repeats. Indices are 0-based positions in the coordinate list
/// (the JSON form is 1-based).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NambuTensor {
    vars: Arc<VariableTable>,
    coords: Vec<usize>,
    order: usize,
    entries: BTreeMap<Vec<usize>, MultiPoly>,
}

/// Sorts `idx` in place and returns the permutation sign, or `None` if an
/// index repeats.
pub(crate) fn sort_with_sign(idx: &mut [usize]) -> Option<i64> {
    let mut sign = 1;
    for i in 1..idx.len() {
        let mut j = i;
        while j > 0 && idx[j - 1] > idx[j] {
            idx.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    if idx.windows(2).any(|w| w[0] == w[1]) {
        None
    } else {
        Some(sign)
    }
}

/// All strictly increasing `k`-tuples drawn from `0..n`.
pub(crate) fn increasing_tuples(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// All `k`-tuples over `0..n` in lexicographic order.
pub(crate) fn all_tuples(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..n).map(move |i| {
                    let mut t2 = t.clone();
                    t2.push(i);
                    t2
                })
            })
            .collect();
    }
    out
}

impl NambuTensor {
    pub fn zero(vars: &Arc<VariableTable>, coords: Vec<usize>, order: usize) -> Result<Self> {
        if order == 0 || order > coords.len() {
            return Err(Error::Dimension(format!(
                "order {order} must lie in 1..={}",
                coords.len()
            )));
        }
        if coords.iter().any(|&c| c >= vars.len()) {
            return Err(Error::Dimension("coordinate outside the table".into()));
        }
        Ok(Self {
            vars: vars.clone(),
            coords,
            order,
            entries: BTreeMap::new(),
        })
    }

    /// Tensor on every variable of `vars` taken as a coordinate.
    pub fn zero_on_table(vars: &Arc<VariableTable>, order: usize) -> Result<Self> {
        Self::zero(vars, (0..vars.len()).collect(), order)
    }

    /// `ρ·ε`, the top-degree tensor with `η_{1…N} = ρ`.
    pub fn levi_civita(vars: &Arc<VariableTable>, coords: Vec<usize>, rho: MultiPoly) -> Result<Self> {
        let n = coords.len();
        let mut t = Self::zero(vars, coords, n)?;
        t.set(&(0..n).collect::<Vec<_>>(), rho)?;
        Ok(t)
    }

    /// `v1 ∧ … ∧ vn` for vectors given by their components.
    pub fn wedge_of(vars: &Arc<VariableTable>, coords: Vec<usize>, vectors: &[Vec<MultiPoly>]) -> Result<Self> {
        let dim = coords.len();
        let mut t = Self::zero(vars, coords, vectors.len())?;
        if vectors.iter().any(|v| v.len() != dim) {
            return Err(Error::Dimension("vector length differs from N".into()));
        }
        for idx in increasing_tuples(dim, vectors.len()) {
            let m: Vec<Vec<MultiPoly>> = vectors
                .iter()
                .map(|v| idx.iter().map(|&i| v[i].clone()).collect())
                .collect();
            t.set(&idx, det(&m))?;
        }
        Ok(t)
    }

    pub fn vars(&self) -> &Arc<VariableTable> {
        &self.vars
    }

    pub fn coords(&self) -> &[usize] {
        &self.coords
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Vec<usize>, &MultiPoly)> {
        self.entries.iter()
    }

    /// Sets the component at `idx` (any order); the antisymmetric partners
    /// follow automatically.
    pub fn set(&mut self, idx: &[usize], value: MultiPoly) -> Result<()> {
        if idx.len() != self.order {
            return Err(Error::Arity {
                expected: self.order,
                got: idx.len(),
            });
        }
        if idx.iter().any(|&i| i >= self.dim()) {
            return Err(Error::Dimension(format!("index {idx:?} out of range")));
        }
        if value.vars() != &self.vars {
            return Err(Error::TableMismatch);
        }
        let mut sorted = idx.to_vec();
        match sort_with_sign(&mut sorted) {
            None if value.is_zero() => Ok(()),
            None => Err(Error::Invalid(format!(
                "component {idx:?} has a repeated index and must vanish"
            ))),
            Some(sign) => {
                let v = value.scale_int(sign);
                if v.is_zero() {
                    self.entries.remove(&sorted);
                } else {
                    self.entries.insert(sorted, v);
                }
                Ok(())
            }
        }
    }

    /// Component for an arbitrary index tuple.
    pub fn get(&self, idx: &[usize]) -> MultiPoly {
        let mut sorted = idx.to_vec();
        match sort_with_sign(&mut sorted) {
            None => MultiPoly::zero(&self.vars),
            Some(sign) => self
                .entries
                .get(&sorted)
                .map(|v| v.scale_int(sign))
                .unwrap_or_else(|| MultiPoly::zero(&self.vars)),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.coords != other.coords || self.order != other.order || self.vars != other.vars {
            return Err(Error::Dimension("tensors live on different spaces".into()));
        }
        let mut out = self.clone();
        for (idx, v) in &other.entries {
            let sum = &out.get(idx) + v;
            out.set(idx, sum)?;
        }
        Ok(out)
    }

    pub fn is_constant(&self) -> bool {
        self.entries.values().all(MultiPoly::is_constant)
    }

    /// Dense array over all `N^n` index tuples (lexicographic), used by
    /// the constraint evaluators.
    pub(crate) fn dense(&self) -> Vec<MultiPoly> {
        all_tuples(self.dim(), self.order)
            .iter()
            .map(|t| self.get(t))
            .collect()
    }

    /// Canonical JSON: `{n, N, variables, coordinates, terms: [[i1…in], poly]}`
    /// with 1-based indices.
    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .entries
            .iter()
            .map(|(idx, v)| {
                let one_based: Vec<usize> = idx.iter().map(|i| i + 1).collect();
                json!([one_based, terms_to_json(v)])
            })
            .collect();
        json!({
            "n": self.order,
            "N": self.dim(),
            "variables": table_to_json(&self.vars),
            "coordinates": self.coords.iter().map(|&c| self.vars.name(c)).collect::<Vec<_>>(),
            "terms": terms,
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let vars = table_from_json(field(v, "variables")?)?;
        let n: usize = serde_json::from_value(field(v, "n")?.clone())
            .map_err(|e| Error::Invalid(format!("n: {e}")))?;
        let dim: usize = serde_json::from_value(field(v, "N")?.clone())
            .map_err(|e| Error::Invalid(format!("N: {e}")))?;
        let coords = match v.get("coordinates") {
            Some(c) => {
                let names: Vec<String> = serde_json::from_value(c.clone())
                    .map_err(|e| Error::Invalid(format!("coordinates: {e}")))?;
                names
                    .iter()
                    .map(|n| vars.index_of(n))
                    .collect::<Result<Vec<_>>>()?
            }
            None => (0..dim).collect(),
        };
        if coords.len() != dim {
            return Err(Error::Dimension(format!("N = {dim} but {} coordinates", coords.len())));
        }
        let mut t = Self::zero(&vars, coords, n)?;
        let raw: Vec<(Vec<usize>, Value)> = serde_json::from_value(field(v, "terms")?.clone())
            .map_err(|e| Error::Invalid(format!("terms: {e}")))?;
        for (idx, poly) in raw {
            if idx.iter().any(|&i| i == 0 || i > dim) {
                return Err(Error::Dimension(format!("index {idx:?} outside 1..={dim}")));
            }
            let zero_based: Vec<usize> = idx.iter().map(|i| i - 1).collect();
            let value = terms_from_json(&poly, &vars)?;
            let sum = &t.get(&zero_based) + &value;
            t.set(&zero_based, sum)?;
        }
        Ok(t)
    }
}

/// `η(df1,…,dfn) = Σ_{i1<…<in} η_{i1…in} det(∂f_a/∂x_{i_b})`, which equals
/// the full antisymmetric contraction `Σ η_{i1…in} ∂_{i1}f1 ⋯ ∂_{in}fn`.
pub fn tensor_bracket(eta: &NambuTensor, fs: &[MultiPoly]) -> Result<MultiPoly> {
    if fs.len() != eta.order {
        return Err(Error::Arity {
            expected: eta.order,
            got: fs.len(),
        });
    }
    if fs.iter().any(|f| f.vars() != &eta.vars) {
        return Err(Error::Dimension(
            "functions must live over the tensor's coordinate table".into(),
        ));
    }
    let grads: Vec<Vec<MultiPoly>> = fs
        .iter()
        .map(|f| eta.coords.iter().map(|&x| f.partial(x)).collect())
        .collect();
    let mut acc = MultiPoly::zero(&eta.vars);
    for (idx, coeff) in &eta.entries {
        let m: Vec<Vec<MultiPoly>> = grads
            .iter()
            .map(|g| idx.iter().map(|&i| g[i].clone()).collect())
            .collect();
        acc = &acc + &(coeff * &det(&m));
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symalg::parse_poly;

    #[test]
    fn antisymmetric_access() {
        let t = VariableTable::coordinates(&["x1", "x2", "x3"]).unwrap();
        let mut eta = NambuTensor::zero_on_table(&t, 2).unwrap();
        eta.set(&[1, 0], MultiPoly::integer(&t, 5)).unwrap();
        assert_eq!(eta.get(&[0, 1]), MultiPoly::integer(&t, -5));
        assert_eq!(eta.get(&[1, 0]), MultiPoly::integer(&t, 5));
        assert!(eta.get(&[1, 1]).is_zero());
        assert!(eta.set(&[2, 2], MultiPoly::one(&t)).is_err());
    }

    #[test]
    fn order_must_fit_dimension() {
        let t = VariableTable::coordinates(&["x1", "x2"]).unwrap();
        assert!(NambuTensor::zero_on_table(&t, 3).is_err());
        assert!(NambuTensor::zero_on_table(&t, 0).is_err());
    }

    #[test]
    fn levi_civita_recovers_jacobian() {
        let t = VariableTable::coordinates(&["x", "y", "z"]).unwrap();
        let eps = NambuTensor::levi_civita(&t, vec![0, 1, 2], MultiPoly::one(&t)).unwrap();
        let fs = ["x", "y", "z"].map(|e| parse_poly(e, &t).unwrap());
        assert_eq!(tensor_bracket(&eps, &fs).unwrap(), MultiPoly::one(&t));
    }

    #[test]
    fn contraction_missing_support_vanishes() {
        let names: Vec<String> = (1..=6).map(|i| format!("x{i}")).collect();
        let t = VariableTable::coordinates(&names).unwrap();
        let mut eta = NambuTensor::zero_on_table(&t, 3).unwrap();
        eta.set(&[0, 1, 2], MultiPoly::one(&t)).unwrap();
        let fs = ["x4", "x5", "x6"].map(|e| parse_poly(e, &t).unwrap());
        assert!(tensor_bracket(&eta, &fs).unwrap().is_zero());
    }

    #[test]
    fn json_is_one_based_and_round_trips() {
        let t = VariableTable::coordinates(&["x", "y", "z"]).unwrap();
        let eps = NambuTensor::levi_civita(&t, vec![0, 1, 2], MultiPoly::var(&t, "x").unwrap()).unwrap();
        let v = eps.to_json();
        assert_eq!(v["terms"][0][0], json!([1, 2, 3]));
        assert_eq!(v["N"], json!(3));
        assert_eq!(NambuTensor::from_json(&v).unwrap(), eps);
    }

    #[test]
    fn sign_of_sorting() {
        let mut v = vec![2, 0, 1];
        assert_eq!(sort_with_sign(&mut v), Some(1));
        let mut w = vec![1, 0, 2];
        assert_eq!(sort_with_sign(&mut w), Some(-1));
        let mut r = vec![1, 1];
        assert_eq!(sort_with_sign(&mut r), None);
    }
}
