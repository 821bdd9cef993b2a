use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use super::scalar::{int, to_f64, ExactScalar};
use super::vars::{VarKind, VariableTable};
use crate::error::{Error, Result};

/// Exponent vector, one entry per variable of the owning table.
pub type Monomial = Vec<u32>;

/// Sparse multivariate polynomial with exact rational coefficients.
///
/// Zero coefficients are never stored, so structural equality is
/// mathematical equality once the tables agree.
#[derive(Clone, Debug)]
pub struct MultiPoly {
    vars: Arc<VariableTable>,
    terms: BTreeMap<Monomial, ExactScalar>,
}

impl PartialEq for MultiPoly {
    fn eq(&self, other: &Self) -> bool {
        VariableTable::same(&self.vars, &other.vars) && self.terms == other.terms
    }
}

impl Eq for MultiPoly {}

impl MultiPoly {
    pub fn zero(vars: &Arc<VariableTable>) -> Self {
        Self {
            vars: vars.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(vars: &Arc<VariableTable>) -> Self {
        Self::constant(vars, ExactScalar::one())
    }

    pub fn constant(vars: &Arc<VariableTable>, c: ExactScalar) -> Self {
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            p.terms.insert(vec![0; vars.len()], c);
        }
        p
    }

    pub fn integer(vars: &Arc<VariableTable>, c: i64) -> Self {
        Self::constant(vars, int(c))
    }

    /// The polynomial consisting of the single variable at `index`.
    pub fn var_index(vars: &Arc<VariableTable>, index: usize) -> Self {
        let mut exps = vec![0; vars.len()];
        exps[index] = 1;
        Self::monomial(vars, exps, ExactScalar::one())
    }

    pub fn var(vars: &Arc<VariableTable>, name: &str) -> Result<Self> {
        Ok(Self::var_index(vars, vars.index_of(name)?))
    }

    pub fn monomial(vars: &Arc<VariableTable>, exps: Monomial, c: ExactScalar) -> Self {
        assert_eq!(exps.len(), vars.len(), "exponent length must match table");
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    /// Builds a polynomial from raw terms, merging duplicates and pruning
    /// zeros.
    pub fn from_terms<I>(vars: &Arc<VariableTable>, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Monomial, ExactScalar)>,
    {
        let mut p = Self::zero(vars);
        for (m, c) in terms {
            if m.len() != vars.len() {
                return Err(Error::Dimension(format!(
                    "monomial has {} exponents, table has {} variables",
                    m.len(),
                    vars.len()
                )));
            }
            p.add_term(m, c);
        }
        Ok(p)
    }

    pub fn vars(&self) -> &Arc<VariableTable> {
        &self.vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &ExactScalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True for polynomials of degree ≤ 0 (including zero).
    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.iter().all(|&e| e == 0))
    }

    pub fn constant_value(&self) -> Option<ExactScalar> {
        if !self.is_constant() {
            return None;
        }
        Some(self.terms.values().next().cloned().unwrap_or_else(ExactScalar::zero))
    }

    pub fn coefficient(&self, exps: &[u32]) -> ExactScalar {
        self.terms.get(exps).cloned().unwrap_or_else(ExactScalar::zero)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.iter().sum()).max()
    }

    pub fn depends_on(&self, var: usize) -> bool {
        self.terms.keys().any(|m| m[var] > 0)
    }

    fn add_term(&mut self, m: Monomial, c: ExactScalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    fn check_table(&self, other: &Self) -> Result<()> {
        if VariableTable::same(&self.vars, &other.vars) {
            Ok(())
        } else {
            Err(Error::TableMismatch)
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_table(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_table(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_table(other)?;
        let mut out = Self::zero(&self.vars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m: Monomial = ma.iter().zip(mb).map(|(a, b)| a + b).collect();
                out.add_term(m, ca * cb);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &ExactScalar) -> Self {
        if c.is_zero() {
            return Self::zero(&self.vars);
        }
        Self {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn scale_int(&self, c: i64) -> Self {
        self.scale(&int(c))
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(&self.vars);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Formal partial derivative. Jet symbols are independent variables
    /// here; use [`MultiPoly::total_x_derivative`] for the chain rule in x.
    pub fn partial(&self, var: usize) -> Self {
        let mut out = Self::zero(&self.vars);
        for (m, c) in &self.terms {
            let e = m[var];
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2[var] -= 1;
            out.add_term(m2, c * int(e as i64));
        }
        out
    }

    pub fn partial_by_name(&self, name: &str) -> Result<Self> {
        Ok(self.partial(self.vars.index_of(name)?))
    }

    /// Total x-derivative `D_x` on the jet ring: `u^(j) ↦ u^(j+1)`, the
    /// coordinate named `x` maps to 1, everything else is x-independent.
    pub fn total_x_derivative(&self) -> Result<Self> {
        let table = self.vars.clone();
        let x = table
            .find("x")
            .filter(|&i| table.get(i).kind == VarKind::Coordinate);
        let mut out = Self::zero(&table);
        for (m, c) in &self.terms {
            for (v, &e) in m.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let coeff = c * int(e as i64);
                if Some(v) == x {
                    let mut m2 = m.clone();
                    m2[v] -= 1;
                    out.add_term(m2, coeff);
                } else if let VarKind::Jet { base, order } = &table.get(v).kind {
                    let next = table.jet(base, order + 1).ok_or_else(|| {
                        Error::JetOrderExceeded {
                            base: base.clone(),
                            order: order + 1,
                            max: table.max_jet_order(base).unwrap_or(0),
                        }
                    })?;
                    let mut m2 = m.clone();
                    m2[v] -= 1;
                    m2[next] += 1;
                    out.add_term(m2, coeff);
                }
            }
        }
        Ok(out)
    }

    /// Replaces variable `var` by `image` (same table).
    pub fn substitute(&self, var: usize, image: &Self) -> Result<Self> {
        self.check_table(image)?;
        let mut powers: Vec<Self> = vec![Self::one(&self.vars)];
        let mut out = Self::zero(&self.vars);
        for (m, c) in &self.terms {
            let e = m[var] as usize;
            while powers.len() <= e {
                let next = &powers[powers.len() - 1] * image;
                powers.push(next);
            }
            let mut rest = m.clone();
            rest[var] = 0;
            let head = Self::monomial(&self.vars, rest, c.clone());
            out = &out + &(&head * &powers[e]);
        }
        Ok(out)
    }

    /// Simultaneous substitution of every variable: variable `i` becomes
    /// `images[i]`, all images living over `target`.
    pub fn compose(&self, target: &Arc<VariableTable>, images: &[Self]) -> Result<Self> {
        if images.len() != self.vars.len() {
            return Err(Error::Arity {
                expected: self.vars.len(),
                got: images.len(),
            });
        }
        if images.iter().any(|p| !VariableTable::same(&p.vars, target)) {
            return Err(Error::TableMismatch);
        }
        let mut cache: BTreeMap<(usize, u32), Self> = BTreeMap::new();
        let mut out = Self::zero(target);
        for (m, c) in &self.terms {
            let mut term = Self::constant(target, c.clone());
            for (v, &e) in m.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let p = cache
                    .entry((v, e))
                    .or_insert_with(|| images[v].pow(e))
                    .clone();
                term = &term * &p;
            }
            out = &out + &term;
        }
        Ok(out)
    }

    /// Moves the polynomial onto another table, matching variables by name.
    /// Fails if a variable the polynomial actually uses is absent.
    pub fn reembed(&self, target: &Arc<VariableTable>) -> Result<Self> {
        let mut map = Vec::with_capacity(self.vars.len());
        for v in self.vars.variables() {
            map.push(target.find(&v.name));
        }
        let mut out = Self::zero(target);
        for (m, c) in &self.terms {
            let mut m2 = vec![0; target.len()];
            for (v, &e) in m.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let j = map[v].ok_or_else(|| Error::UnknownVariable(self.vars.name(v).into()))?;
                m2[j] += e;
            }
            out.add_term(m2, c.clone());
        }
        Ok(out)
    }

    /// Cancels common powers of `var` and `reciprocal`, i.e. rewrites the
    /// polynomial modulo `var * reciprocal = 1`.
    pub fn reduce_reciprocal(&self, var: usize, reciprocal: usize) -> Self {
        let mut out = Self::zero(&self.vars);
        for (m, c) in &self.terms {
            let k = m[var].min(m[reciprocal]);
            let mut m2 = m.clone();
            m2[var] -= k;
            m2[reciprocal] -= k;
            out.add_term(m2, c.clone());
        }
        out
    }

    /// Groups terms by the exponents of `split_vars`; those exponents are
    /// zeroed in the returned coefficient polynomials.
    pub fn split_by(&self, split_vars: &[usize]) -> BTreeMap<Vec<u32>, Self> {
        let mut out: BTreeMap<Vec<u32>, Self> = BTreeMap::new();
        for (m, c) in &self.terms {
            let key: Vec<u32> = split_vars.iter().map(|&v| m[v]).collect();
            let mut rest = m.clone();
            for &v in split_vars {
                rest[v] = 0;
            }
            out.entry(key)
                .or_insert_with(|| Self::zero(&self.vars))
                .add_term(rest, c.clone());
        }
        out
    }

    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(m, c)| {
                let mut t = to_f64(c);
                for (v, &e) in m.iter().enumerate() {
                    if e > 0 {
                        t *= point[v].powi(e as i32);
                    }
                }
                t
            })
            .sum()
    }

    /// Exact evaluation at a rational point.
    pub fn eval_exact(&self, point: &[ExactScalar]) -> ExactScalar {
        let mut acc = ExactScalar::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, &e) in m.iter().enumerate() {
                if e > 0 {
                    t *= num_traits::pow(point[v].clone(), e as usize);
                }
            }
            acc += t;
        }
        acc
    }

    pub fn compile(&self) -> CompiledPoly {
        CompiledPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let factors = m
                        .iter()
                        .enumerate()
                        .filter(|(_, &e)| e > 0)
                        .map(|(v, &e)| (v, e as i32))
                        .collect();
                    (to_f64(c), factors)
                })
                .collect(),
        }
    }
}

/// Flattened polynomial for repeated floating-point evaluation.
#[derive(Clone, Debug)]
pub struct CompiledPoly {
    terms: Vec<(f64, Vec<(usize, i32)>)>,
}

impl CompiledPoly {
    pub fn eval(&self, point: &[f64]) -> f64 {
        let mut acc = 0.0;
        for (c, factors) in &self.terms {
            let mut t = *c;
            for &(v, e) in factors {
                t *= if e == 1 { point[v] } else { point[v].powi(e) };
            }
            acc += t;
        }
        acc
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait<&MultiPoly> for &MultiPoly {
            type Output = MultiPoly;
            /// Panics if the operands live over different tables; use the
            /// `checked_*` form to get an error instead.
            fn $method(self, rhs: &MultiPoly) -> MultiPoly {
                self.$checked(rhs).expect("variable table mismatch")
            }
        }
        impl $trait<MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: MultiPoly) -> MultiPoly {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $method(self, rhs: &MultiPoly) -> MultiPoly {
                (&self).$method(rhs)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -&self
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            let mag = c.abs();
            if k == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if negative { '-' } else { '+' })?;
            }
            let factors: Vec<String> = m
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(v, &e)| {
                    let name = self.vars.name(v);
                    if e == 1 {
                        name.to_string()
                    } else {
                        format!("{name}^{e}")
                    }
                })
                .collect();
            if factors.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{mag}*{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::super::scalar::ratio;
    use super::super::vars::Variable;
    use super::*;

    fn xyz() -> Arc<VariableTable> {
        VariableTable::coordinates(&["x", "y", "z"]).unwrap()
    }

    #[test]
    fn difference_of_squares() {
        let t = xyz();
        let x = MultiPoly::var(&t, "x").unwrap();
        let y = MultiPoly::var(&t, "y").unwrap();
        let lhs = (&x + &y) * (&x - &y);
        assert_eq!(lhs, x.pow(2) - y.pow(2));
    }

    #[test]
    fn annihilator_and_inverse() {
        let t = xyz();
        let x = MultiPoly::var(&t, "x").unwrap();
        let y = MultiPoly::var(&t, "y").unwrap();
        assert!((&x * &MultiPoly::zero(&t)).is_zero());
        let a = x.pow(2) * &y;
        assert!((&a + &(-&a)).is_zero());
    }

    #[test]
    fn partials() {
        let t = xyz();
        let x = MultiPoly::var(&t, "x").unwrap();
        let y = MultiPoly::var(&t, "y").unwrap();
        let a = x.pow(2) * &y;
        assert_eq!(a.partial(0), (&x * &y).scale_int(2));
        assert!(a.partial(2).is_zero());
        assert!(a.partial_by_name("w").is_err());
    }

    #[test]
    fn table_mismatch_is_an_error() {
        let a = MultiPoly::var(&xyz(), "x").unwrap();
        let b = MultiPoly::var(&VariableTable::coordinates(&["x"]).unwrap(), "x").unwrap();
        assert_eq!(a.checked_add(&b), Err(Error::TableMismatch));
        assert_eq!(a.checked_mul(&b), Err(Error::TableMismatch));
    }

    #[test]
    fn tables_compare_structurally() {
        let a = MultiPoly::var(&xyz(), "x").unwrap();
        let b = MultiPoly::var(&xyz(), "x").unwrap();
        assert_eq!(a, b);
    }

    fn jet_table() -> Arc<VariableTable> {
        VariableTable::new(vec![
            Variable::coordinate("x"),
            Variable::jet("u2", 0),
            Variable::jet("u2", 1),
            Variable::jet("u3", 0),
            Variable::jet("u3", 1),
        ])
        .unwrap()
    }

    #[test]
    fn total_derivative_on_jets() {
        let t = jet_table();
        let v = |n: &str| MultiPoly::var(&t, n).unwrap();
        assert_eq!(v("u2").total_x_derivative().unwrap(), v("u2_x"));
        assert_eq!(
            (v("u2") * v("u3")).total_x_derivative().unwrap(),
            v("u2_x") * v("u3") + v("u2") * v("u3_x")
        );
        assert_eq!(
            (v("x") * v("u2")).total_x_derivative().unwrap(),
            v("u2") + v("x") * v("u2_x")
        );
        let err = v("u2_x").total_x_derivative().unwrap_err();
        assert_eq!(
            err,
            Error::JetOrderExceeded {
                base: "u2".into(),
                order: 2,
                max: 1
            }
        );
    }

    #[test]
    fn rigid_body_partial_with_symbolic_constant() {
        let t = VariableTable::coordinates(&["m1", "a2"]).unwrap();
        let m1 = MultiPoly::var(&t, "m1").unwrap();
        let a2 = MultiPoly::var(&t, "a2").unwrap();
        let h = (&a2 * &m1.pow(2)).scale(&ratio(1, 2));
        assert_eq!(h.partial(0), a2 * m1);
    }

    #[test]
    fn substitution_and_reciprocal() {
        let t = VariableTable::coordinates(&["a", "r", "x"]).unwrap();
        let a = MultiPoly::var(&t, "a").unwrap();
        let r = MultiPoly::var(&t, "r").unwrap();
        let x = MultiPoly::var(&t, "x").unwrap();
        let p = a.pow(2) * &r * &x;
        assert_eq!(p.reduce_reciprocal(0, 1), &a * &x);
        let shifted = x.pow(2).substitute(2, &(&x + &MultiPoly::integer(&t, 1))).unwrap();
        assert_eq!(shifted, x.pow(2) + x.scale_int(2) + MultiPoly::integer(&t, 1));
    }

    #[test]
    fn display_is_readable() {
        let t = xyz();
        let x = MultiPoly::var(&t, "x").unwrap();
        let y = MultiPoly::var(&t, "y").unwrap();
        let p = x.pow(2).scale(&ratio(1, 2)) - y.scale_int(3) + MultiPoly::integer(&t, 1);
        assert_eq!(p.to_string(), "1/2*x^2 - 3*y + 1");
    }
}
