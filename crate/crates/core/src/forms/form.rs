use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::nambu::tensor::sort_with_sign;
use crate::symalg::json::{bad, field, table_from_json, table_to_json, terms_from_json, terms_to_json};
use crate::symalg::{MultiPoly, VariableTable};

/// Differential form of fixed degree over a chosen subset of table
/// variables. Other table variables are parameters: `d` does not see them.
///
/// Keys are strictly increasing positions into `coords`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DifferentialForm {
    vars: Arc<VariableTable>,
    coords: Vec<usize>,
    degree: usize,
    terms: BTreeMap<Vec<usize>, MultiPoly>,
}

impl DifferentialForm {
    pub fn zero(vars: &Arc<VariableTable>, coords: Vec<usize>, degree: usize) -> Result<Self> {
        let mut seen = coords.clone();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != coords.len() || coords.iter().any(|&c| c >= vars.len()) {
            return Err(Error::Dimension("form coordinates must be distinct table indices".into()));
        }
        Ok(Self {
            vars: vars.clone(),
            coords,
            degree,
            terms: BTreeMap::new(),
        })
    }

    /// Zero form over the named coordinates.
    pub fn zero_named<S: AsRef<str>>(vars: &Arc<VariableTable>, coords: &[S], degree: usize) -> Result<Self> {
        let coords = coords
            .iter()
            .map(|c| vars.index_of(c.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Self::zero(vars, coords, degree)
    }

    fn empty_like(&self, degree: usize) -> Self {
        Self {
            vars: self.vars.clone(),
            coords: self.coords.clone(),
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// 0-form `f` on the space of `like`.
    pub fn function(like: &Self, f: MultiPoly) -> Result<Self> {
        if f.vars() != &like.vars {
            return Err(Error::TableMismatch);
        }
        let mut out = like.empty_like(0);
        out.add_term(Vec::new(), f);
        Ok(out)
    }

    /// `coeff · dx_{p1} ∧ … ∧ dx_{pk}` for positions in any order.
    pub fn monomial(like: &Self, coeff: MultiPoly, positions: &[usize]) -> Result<Self> {
        if coeff.vars() != &like.vars {
            return Err(Error::TableMismatch);
        }
        if positions.iter().any(|&p| p >= like.coords.len()) {
            return Err(Error::Dimension("position outside the coordinate list".into()));
        }
        let mut out = like.empty_like(positions.len());
        let mut idx = positions.to_vec();
        if let Some(sign) = sort_with_sign(&mut idx) {
            out.add_term(idx, coeff.scale_int(sign));
        }
        Ok(out)
    }

    /// `dx` for the coordinate named `name`.
    pub fn basis(like: &Self, name: &str) -> Result<Self> {
        let v = like.vars.index_of(name)?;
        let pos = like
            .coords
            .iter()
            .position(|&c| c == v)
            .ok_or_else(|| Error::Invalid(format!("`{name}` is not a form coordinate")))?;
        Self::monomial(like, MultiPoly::one(&like.vars), &[pos])
    }

    /// `d f` for a function.
    pub fn differential(like: &Self, f: &MultiPoly) -> Result<Self> {
        Self::function(like, f.clone())?.ext_d()
    }

    pub fn vars(&self) -> &Arc<VariableTable> {
        &self.vars
    }

    pub fn coords(&self) -> &[usize] {
        &self.coords
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &MultiPoly)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, positions: &[usize]) -> MultiPoly {
        self.terms
            .get(positions)
            .cloned()
            .unwrap_or_else(|| MultiPoly::zero(&self.vars))
    }

    fn add_term(&mut self, key: Vec<usize>, c: MultiPoly) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&key) {
            Some(slot) => {
                *slot = &*slot + &c;
                if slot.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    fn check_space(&self, other: &Self) -> Result<()> {
        if self.vars != other.vars || self.coords != other.coords {
            return Err(Error::TableMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_space(other)?;
        if self.degree != other.degree && !self.is_zero() && !other.is_zero() {
            return Err(Error::Dimension(format!(
                "cannot add forms of degree {} and {}",
                self.degree, other.degree
            )));
        }
        let mut out = if self.is_zero() { other.clone() } else { self.clone() };
        let rest = if self.is_zero() { self } else { other };
        for (k, c) in &rest.terms {
            out.add_term(k.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|c| Ok(-c)).expect("negation is infallible")
    }

    /// Multiplies by a function.
    pub fn scale_poly(&self, f: &MultiPoly) -> Result<Self> {
        self.map_coeffs(|c| c.checked_mul(f))
    }

    pub fn map_coeffs<F>(&self, f: F) -> Result<Self>
    where
        F: Fn(&MultiPoly) -> Result<MultiPoly>,
    {
        let mut out = self.empty_like(self.degree);
        for (k, c) in &self.terms {
            out.add_term(k.clone(), f(c)?);
        }
        Ok(out)
    }

    pub fn wedge(&self, other: &Self) -> Result<Self> {
        self.check_space(other)?;
        let mut out = self.empty_like(self.degree + other.degree);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let mut idx: Vec<usize> = a.iter().chain(b).copied().collect();
                if let Some(sign) = sort_with_sign(&mut idx) {
                    out.add_term(idx, (ca * cb).scale_int(sign));
                }
            }
        }
        Ok(out)
    }

    /// `k`-fold wedge power; `power(0)` is the constant 0-form 1.
    pub fn power(&self, k: usize) -> Result<Self> {
        let mut acc = Self::function(self, MultiPoly::one(&self.vars))?;
        for _ in 0..k {
            acc = acc.wedge(self)?;
        }
        Ok(acc)
    }

    pub fn ext_d(&self) -> Result<Self> {
        let mut out = self.empty_like(self.degree + 1);
        for (idx, c) in &self.terms {
            for (j, &v) in self.coords.iter().enumerate() {
                if idx.contains(&j) {
                    continue;
                }
                let dc = c.partial(v);
                if dc.is_zero() {
                    continue;
                }
                let before = idx.iter().filter(|&&i| i < j).count();
                let mut key = idx.clone();
                key.insert(before, j);
                out.add_term(key, if before % 2 == 0 { dc } else { -dc });
            }
        }
        Ok(out)
    }

    /// `{"variables", "coordinates", "degree", "terms": [[[positions], termlist]]}`
    /// with 0-based positions into `coordinates`.
    pub fn to_json(&self) -> Value {
        json!({
            "variables": table_to_json(&self.vars),
            "coordinates": self.coords.iter().map(|&c| self.vars.name(c)).collect::<Vec<_>>(),
            "degree": self.degree,
            "terms": self.terms.iter().map(|(k, c)| json!([k, terms_to_json(c)])).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let vars = table_from_json(field(v, "variables")?)?;
        let coords: Vec<String> = serde_json::from_value(field(v, "coordinates")?.clone())
            .map_err(|e| bad(format!("coordinates: {e}")))?;
        let degree: usize = serde_json::from_value(field(v, "degree")?.clone())
            .map_err(|e| bad(format!("degree: {e}")))?;
        let mut out = Self::zero_named(&vars, &coords, degree)?;
        let terms = field(v, "terms")?
            .as_array()
            .ok_or_else(|| bad("terms must be an array".into()))?;
        for t in terms {
            let pair = t
                .as_array()
                .filter(|p| p.len() == 2)
                .ok_or_else(|| bad("each term is [positions, coefficient]".into()))?;
            let pos: Vec<usize> = serde_json::from_value(pair[0].clone())
                .map_err(|e| bad(format!("positions: {e}")))?;
            if pos.len() != degree {
                return Err(bad(format!("term {pos:?} does not have degree {degree}")));
            }
            let c = terms_from_json(&pair[1], &vars)?;
            out = out.add(&Self::monomial(&out, c, &pos)?)?;
        }
        Ok(out)
    }
}

impl fmt::Display for DifferentialForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (k, c)) in self.terms.iter().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            let basis: Vec<String> = k.iter().map(|&i| format!("d{}", self.vars.name(self.coords[i]))).collect();
            if basis.is_empty() {
                write!(f, "({c})")?;
            } else {
                write!(f, "({c}) {}", basis.join("^"))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symalg::parse_poly;

    fn space(names: &[&str]) -> DifferentialForm {
        let vars = VariableTable::coordinates(names).unwrap();
        DifferentialForm::zero_named(&vars, names, 0).unwrap()
    }

    fn p(s: &DifferentialForm, e: &str) -> MultiPoly {
        parse_poly(e, s.vars()).unwrap()
    }

    #[test]
    fn wedge_examples() {
        let s = space(&["x", "y"]);
        let dx = DifferentialForm::basis(&s, "x").unwrap();
        let dy = DifferentialForm::basis(&s, "y").unwrap();
        assert_eq!(dx.wedge(&dy).unwrap(), dy.wedge(&dx).unwrap().neg());
        let a = dy.scale_poly(&p(&s, "x")).unwrap();
        let b = dx.scale_poly(&p(&s, "y")).unwrap();
        let w = a.wedge(&b).unwrap();
        assert_eq!(w.degree(), 2);
        assert_eq!(w.coefficient(&[0, 1]), p(&s, "-x*y"));
    }

    #[test]
    fn repeated_three_form_squares_to_zero() {
        let s = space(&["lambda", "p", "q"]);
        let vol = DifferentialForm::monomial(&s, MultiPoly::one(s.vars()), &[0, 1, 2]).unwrap();
        let sq = vol.wedge(&vol).unwrap();
        assert!(sq.is_zero());
        assert_eq!(sq.degree(), 6);
    }

    #[test]
    fn exterior_derivative_examples() {
        let s = space(&["x", "y"]);
        let x_dy = DifferentialForm::monomial(&s, p(&s, "x"), &[1]).unwrap();
        let dxdy = DifferentialForm::monomial(&s, MultiPoly::one(s.vars()), &[0, 1]).unwrap();
        assert_eq!(x_dy.ext_d().unwrap(), dxdy);
        let dx = DifferentialForm::basis(&s, "x").unwrap();
        assert!(dx.ext_d().unwrap().is_zero());
    }

    #[test]
    fn parameters_are_invisible_to_d() {
        let vars = VariableTable::coordinates(&["x", "y", "lambda"]).unwrap();
        let s = DifferentialForm::zero_named(&vars, &["x", "y"], 0).unwrap();
        let f = parse_poly("lambda^2*x", &vars).unwrap();
        let df = DifferentialForm::differential(&s, &f).unwrap();
        assert_eq!(df.num_terms(), 1);
        assert_eq!(df.coefficient(&[0]), parse_poly("lambda^2", &vars).unwrap());
    }

    #[test]
    fn json_roundtrip() {
        let s = space(&["x", "y", "z"]);
        let f = DifferentialForm::monomial(&s, p(&s, "x*z - 1/3"), &[2, 0])
            .unwrap()
            .add(&DifferentialForm::monomial(&s, p(&s, "y"), &[1, 2]).unwrap())
            .unwrap();
        let back = DifferentialForm::from_json(&f.to_json()).unwrap();
        assert_eq!(back, f);
        assert_eq!(f.coefficient(&[0, 2]), p(&s, "-x*z + 1/3"));
    }

    #[test]
    fn degree_mismatch_on_add() {
        let s = space(&["x", "y"]);
        let dx = DifferentialForm::basis(&s, "x").unwrap();
        let one = DifferentialForm::function(&s, MultiPoly::one(s.vars())).unwrap();
        assert!(dx.add(&one).is_err());
    }
}
