use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use super::poly::MultiPoly;
use super::scalar::{int, ExactScalar};
use super::vars::VariableTable;
use crate::error::{Error, Result};

/// Finite Laurent expansion in the spectral parameter λ with polynomial
/// coefficients.
///
/// A series is either *complete* (a Laurent polynomial, exact in every
/// degree) or *truncated at a floor*: every coefficient of `λ^e` with
/// `e >= floor` is exact and everything below is unknown. Arithmetic
/// recomputes the floor so a reported coefficient is never polluted by a
/// dropped term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentObject {
    vars: Arc<VariableTable>,
    terms: BTreeMap<i64, MultiPoly>,
    floor: Option<i64>,
}

impl LaurentObject {
    pub fn zero(vars: &Arc<VariableTable>) -> Self {
        Self {
            vars: vars.clone(),
            terms: BTreeMap::new(),
            floor: None,
        }
    }

    pub fn one(vars: &Arc<VariableTable>) -> Self {
        Self::constant(MultiPoly::one(vars))
    }

    /// Degree-zero series with coefficient `c`.
    pub fn constant(c: MultiPoly) -> Self {
        Self::monomial(c, 0)
    }

    pub fn monomial(c: MultiPoly, exponent: i64) -> Self {
        let mut out = Self::zero(c.vars());
        if !c.is_zero() {
            out.terms.insert(exponent, c);
        }
        out
    }

    pub fn lambda_power(vars: &Arc<VariableTable>, exponent: i64) -> Self {
        Self::monomial(MultiPoly::one(vars), exponent)
    }

    /// Builds a series from `(exponent, coefficient)` pairs. Terms below a
    /// declared `floor` are rejected since they would be unknown by
    /// definition.
    pub fn from_terms<I>(vars: &Arc<VariableTable>, terms: I, floor: Option<i64>) -> Result<Self>
    where
        I: IntoIterator<Item = (i64, MultiPoly)>,
    {
        let mut out = Self {
            vars: vars.clone(),
            terms: BTreeMap::new(),
            floor,
        };
        for (e, c) in terms {
            if !VariableTable::same(c.vars(), vars) {
                return Err(Error::TableMismatch);
            }
            if floor.is_some_and(|f| e < f) {
                return Err(Error::Indeterminate(e));
            }
            out.add_coeff(e, c);
        }
        Ok(out)
    }

    /// Reads `poly` as a series in the variable `lambda`; the resulting
    /// coefficients no longer mention that variable.
    pub fn from_poly(poly: &MultiPoly, lambda: usize) -> Self {
        let mut out = Self::zero(poly.vars());
        for (k, c) in poly.split_by(&[lambda]) {
            out.add_coeff(k[0] as i64, c);
        }
        out
    }

    fn add_coeff(&mut self, e: i64, c: MultiPoly) {
        if c.is_zero() {
            return;
        }
        let slot = self
            .terms
            .entry(e)
            .or_insert_with(|| MultiPoly::zero(&self.vars));
        *slot = &*slot + &c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn vars(&self) -> &Arc<VariableTable> {
        &self.vars
    }

    /// Lowest exact exponent, `None` for a complete Laurent polynomial.
    pub fn floor(&self) -> Option<i64> {
        self.floor
    }

    pub fn is_complete(&self) -> bool {
        self.floor.is_none()
    }

    /// Upper bound on the true degree: the top stored exponent, or just
    /// below the floor when nothing exact is nonzero. `None` only for the
    /// complete zero series.
    pub fn reach(&self) -> Option<i64> {
        match self.terms.keys().next_back() {
            Some(&e) => Some(e),
            None => self.floor.map(|f| f - 1),
        }
    }

    /// `(floor, reach)`: the exponents `floor..=reach` are exactly known.
    pub fn window(&self) -> (Option<i64>, Option<i64>) {
        (self.floor, self.reach())
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &MultiPoly)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn coeff(&self, e: i64) -> Result<MultiPoly> {
        if self.floor.is_some_and(|f| e < f) {
            return Err(Error::Indeterminate(e));
        }
        Ok(self
            .terms
            .get(&e)
            .cloned()
            .unwrap_or_else(|| MultiPoly::zero(&self.vars)))
    }

    /// True when every exact coefficient vanishes. A truncated series can be
    /// "zero" only in this within-window sense.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn check_table(&self, other: &Self) -> Result<()> {
        if VariableTable::same(&self.vars, &other.vars) {
            Ok(())
        } else {
            Err(Error::TableMismatch)
        }
    }

    /// Declares everything below `floor` unknown and drops those terms.
    pub fn truncate_below(&self, floor: i64) -> Self {
        let floor = self.floor.max(Some(floor));
        Self {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| floor.is_none_or(|f| **e >= f))
                .map(|(e, c)| (*e, c.clone()))
                .collect(),
            floor,
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_table(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_coeff(*e, c.clone());
        }
        out.floor = self.floor.max(other.floor);
        Ok(out.truncate_below_current())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    fn truncate_below_current(self) -> Self {
        match self.floor {
            Some(f) => self.truncate_below(f),
            None => self,
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
            floor: self.floor,
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_table(other)?;
        let (ra, rb) = match (self.reach(), other.reach()) {
            (Some(a), Some(b)) => (a, b),
            _ => return Ok(Self::zero(&self.vars)),
        };
        // An unknown coefficient a_i (i < floor_a) meets b_j only for
        // j <= reach_b, so products at e >= floor_a + reach_b are exact.
        let floor = self
            .floor
            .map(|f| f + rb)
            .max(other.floor.map(|f| f + ra));
        if floor.is_some_and(|f| f > ra + rb) {
            return Err(Error::EmptyWindow);
        }
        let mut out = Self {
            vars: self.vars.clone(),
            terms: BTreeMap::new(),
            floor,
        };
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea + eb;
                if floor.is_some_and(|f| e < f) {
                    continue;
                }
                out.add_coeff(e, ca * cb);
            }
        }
        Ok(out)
    }

    /// `k`-fold product; identical (window included) to repeated `mul`.
    pub fn pow(&self, k: u32) -> Result<Self> {
        let mut acc = Self::one(&self.vars);
        for _ in 0..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Multiplies every coefficient by a polynomial.
    pub fn scale_poly(&self, p: &MultiPoly) -> Result<Self> {
        self.map_coeffs(|c| c.checked_mul(p))
    }

    pub fn scale(&self, q: &ExactScalar) -> Self {
        let mut out = self.clone();
        out.terms = self
            .terms
            .iter()
            .map(|(e, c)| (*e, c.scale(q)))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        out
    }

    /// Applies `f` to every exact coefficient; the floor is unchanged.
    pub fn map_coeffs<F>(&self, f: F) -> Result<Self>
    where
        F: Fn(&MultiPoly) -> Result<MultiPoly>,
    {
        let mut out = Self {
            vars: self.vars.clone(),
            terms: BTreeMap::new(),
            floor: self.floor,
        };
        for (e, c) in &self.terms {
            out.add_coeff(*e, f(c)?);
        }
        Ok(out)
    }

    /// Derivative in λ. The floor drops by one: `λ^{f-1}` only receives
    /// contributions from `λ^f`.
    pub fn deriv_lambda(&self) -> Self {
        let mut out = Self {
            vars: self.vars.clone(),
            terms: BTreeMap::new(),
            floor: self.floor.map(|f| f - 1),
        };
        for (e, c) in &self.terms {
            if *e != 0 {
                out.add_coeff(e - 1, c.scale(&int(*e)));
            }
        }
        out
    }

    /// Coefficientwise partial derivative in a table variable.
    pub fn partial(&self, var: usize) -> Self {
        self.map_coeffs(|c| Ok(c.partial(var)))
            .expect("partial derivative is infallible")
    }

    pub fn total_x_derivative(&self) -> Result<Self> {
        self.map_coeffs(|c| c.total_x_derivative())
    }

    /// Keeps the exponents `>= 0`, the λ⁰ term included. The result is a
    /// Laurent polynomial; it is complete unless the floor was positive.
    pub fn project_nonneg(&self) -> Self {
        Self {
            vars: self.vars.clone(),
            terms: self
                .terms
                .range(0..)
                .map(|(e, c)| (*e, c.clone()))
                .collect(),
            floor: self.floor.filter(|&f| f > 0),
        }
    }

    /// Multiplicative inverse of a series whose leading coefficient is a
    /// nonzero constant, computed down to `floor` (or as far as the input's
    /// own truncation allows, whichever is higher).
    pub fn inverse(&self, floor: i64) -> Result<Self> {
        let (&d, lead) = self
            .terms
            .iter()
            .next_back()
            .ok_or_else(|| Error::Invalid("inverse of zero series".into()))?;
        let c = lead
            .constant_value()
            .filter(|c| !c.is_zero())
            .ok_or_else(|| Error::Invalid("leading coefficient must be a nonzero constant".into()))?;
        let inv_c = c.recip();
        let mut target = floor;
        if let Some(f) = self.floor {
            target = target.max(f - 2 * d);
        }
        let top = -d;
        if target > top {
            return Err(Error::EmptyWindow);
        }
        let depth = (top - target) as usize;
        let mut b: Vec<MultiPoly> = Vec::with_capacity(depth + 1);
        b.push(MultiPoly::constant(&self.vars, inv_c.clone()));
        for k in 1..=depth {
            let mut acc = MultiPoly::zero(&self.vars);
            for j in 1..=k {
                let a = self.coeff(d - j as i64)?;
                if a.is_zero() {
                    continue;
                }
                acc = &acc + &(&a * &b[k - j]);
            }
            b.push(acc.scale(&(-inv_c.clone())));
        }
        let terms = b
            .into_iter()
            .enumerate()
            .map(|(k, c)| (top - k as i64, c));
        let complete_inverse = self.floor.is_none() && self.terms.len() == 1;
        Self::from_terms(
            &self.vars,
            terms,
            if complete_inverse { None } else { Some(target) },
        )
    }

    /// Converts a complete series with no negative powers into a polynomial
    /// in the table variable `lambda`.
    pub fn to_poly(&self, lambda: usize) -> Result<MultiPoly> {
        if let Some(f) = self.floor {
            return Err(Error::NotPolynomial(format!(
                "coefficients below lambda^{f} are unknown"
            )));
        }
        let mut out = MultiPoly::zero(&self.vars);
        for (e, c) in &self.terms {
            if *e < 0 {
                return Err(Error::NotPolynomial(format!("contains lambda^{e}")));
            }
            if c.depends_on(lambda) {
                return Err(Error::Invalid(
                    "coefficient depends on the spectral variable".into(),
                ));
            }
            let mut exps = vec![0; self.vars.len()];
            exps[lambda] = *e as u32;
            out = &out + &(c * &MultiPoly::monomial(&self.vars, exps, ExactScalar::one()));
        }
        Ok(out)
    }

    /// Exponents whose exact coefficient is nonzero, highest first.
    pub fn nonzero_exponents(&self) -> Vec<i64> {
        self.terms.keys().rev().copied().collect()
    }
}

impl fmt::Display for LaurentObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match *e {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})*lambda")?,
                _ => write!(f, "({c})*lambda^{e}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        if let Some(fl) = self.floor {
            write!(f, " + [unknown below lambda^{fl}]")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::super::vars::Variable;
    use super::*;

    fn table() -> Arc<VariableTable> {
        VariableTable::new(vec![
            Variable::jet("u2", 0),
            Variable::jet("u3", 0),
            Variable::jet("u4", 0),
        ])
        .unwrap()
    }

    fn u(t: &Arc<VariableTable>, n: &str) -> MultiPoly {
        MultiPoly::var(t, n).unwrap()
    }

    #[test]
    fn square_of_two_term_series() {
        let t = table();
        let l = LaurentObject::from_terms(
            &t,
            [(1, MultiPoly::one(&t)), (-1, u(&t, "u2"))],
            None,
        )
        .unwrap();
        let sq = l.pow(2).unwrap();
        let expected = LaurentObject::from_terms(
            &t,
            [
                (2, MultiPoly::one(&t)),
                (0, u(&t, "u2").scale_int(2)),
                (-2, u(&t, "u2").pow(2)),
            ],
            None,
        )
        .unwrap();
        assert_eq!(sq, expected);
    }

    #[test]
    fn lambda_times_inverse() {
        let t = table();
        let p = LaurentObject::lambda_power(&t, 1)
            .mul(&LaurentObject::lambda_power(&t, -1))
            .unwrap();
        assert_eq!(p, LaurentObject::one(&t));
    }

    /// L = λ + u2 λ⁻¹ + u3 λ⁻² + u4 λ⁻³ known down to λ⁻³.
    fn truncated_l(t: &Arc<VariableTable>) -> LaurentObject {
        LaurentObject::from_terms(
            t,
            [
                (1, MultiPoly::one(t)),
                (-1, u(t, "u2")),
                (-2, u(t, "u3")),
                (-3, u(t, "u4")),
            ],
            Some(-3),
        )
        .unwrap()
    }

    #[test]
    fn truncated_square_has_tracked_window() {
        let t = table();
        let sq = truncated_l(&t).pow(2).unwrap();
        // Unknown u5 λ⁻⁴ pairs with λ, so only exponents ≥ -2 survive.
        assert_eq!(sq.floor(), Some(-2));
        assert_eq!(sq.coeff(2).unwrap(), MultiPoly::one(&t));
        assert_eq!(sq.coeff(0).unwrap(), u(&t, "u2").scale_int(2));
        assert_eq!(sq.coeff(-1).unwrap(), u(&t, "u3").scale_int(2));
        assert_eq!(
            sq.coeff(-2).unwrap(),
            u(&t, "u2").pow(2) + u(&t, "u4").scale_int(2)
        );
        assert_eq!(sq.coeff(-3), Err(Error::Indeterminate(-3)));
    }

    #[test]
    fn projection_keeps_constant_term() {
        let t = table();
        let sq = truncated_l(&t).pow(2).unwrap();
        let b2 = sq.project_nonneg();
        assert!(b2.is_complete());
        let expected = LaurentObject::from_terms(
            &t,
            [(2, MultiPoly::one(&t)), (0, u(&t, "u2").scale_int(2))],
            None,
        )
        .unwrap();
        assert_eq!(b2, expected);
        let lam = LaurentObject::lambda_power(&t, 1);
        assert_eq!(lam.project_nonneg(), lam);
        let neg = LaurentObject::monomial(u(&t, "u2"), -1);
        assert!(neg.project_nonneg().is_zero());
    }

    #[test]
    fn empty_window_is_reported() {
        let t = table();
        let unknown = LaurentObject::from_terms(&t, std::iter::empty(), Some(0)).unwrap();
        let lam = LaurentObject::lambda_power(&t, 1);
        assert_eq!(unknown.mul(&lam), Err(Error::EmptyWindow));
    }

    #[test]
    fn inverse_of_lax_series() {
        let t = table();
        let l = truncated_l(&t);
        let inv = l.inverse(-10).unwrap();
        // floor of the inverse: -3 - 2 = -5
        assert_eq!(inv.floor(), Some(-5));
        let prod = l.mul(&inv).unwrap();
        for e in prod.floor().unwrap()..=0 {
            let expected = if e == 0 {
                MultiPoly::one(&t)
            } else {
                MultiPoly::zero(&t)
            };
            assert_eq!(prod.coeff(e).unwrap(), expected, "exponent {e}");
        }
    }

    #[test]
    fn lambda_derivative_lowers_floor() {
        let t = table();
        let d = truncated_l(&t).deriv_lambda();
        assert_eq!(d.floor(), Some(-4));
        assert_eq!(d.coeff(0).unwrap(), MultiPoly::one(&t));
        assert_eq!(d.coeff(-2).unwrap(), -u(&t, "u2"));
        assert_eq!(d.coeff(-4).unwrap(), u(&t, "u4").scale_int(-3));
    }
}
