use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::symalg::LaurentObject;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Indeterminate,
}

impl Verdict {
    /// `Fail` dominates `Indeterminate`, which dominates `Pass`.
    pub fn combine(self, other: Self) -> Self {
        use Verdict::*;
        match (self, other) {
            (Fail, _) | (_, Fail) => Fail,
            (Indeterminate, _) | (_, Indeterminate) => Indeterminate,
            _ => Pass,
        }
    }
}

/// Exact exponent range `floor..=reach`; a missing floor means complete.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    pub floor: Option<i64>,
    pub reach: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoefficientEntry {
    pub component: String,
    pub exponent: i64,
    pub coefficient: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub check: String,
    pub flow_indices: Vec<usize>,
    pub window: Window,
    pub nonzero_coefficients: Vec<CoefficientEntry>,
    pub verdict: Verdict,
}

impl ResidualReport {
    /// Builds a report from labelled residual series. Truncation failures
    /// become `indeterminate`; other errors propagate.
    pub fn from_residuals(
        check: &str,
        flow_indices: Vec<usize>,
        residuals: Result<Vec<(String, LaurentObject)>>,
    ) -> Result<Self> {
        let residuals = match residuals {
            Ok(r) => r,
            Err(Error::EmptyWindow | Error::Truncation(_) | Error::Indeterminate(_)) => {
                return Ok(Self {
                    check: check.into(),
                    flow_indices,
                    window: Window { floor: None, reach: None },
                    nonzero_coefficients: Vec::new(),
                    verdict: Verdict::Indeterminate,
                })
            }
            Err(e) => return Err(e),
        };
        let mut floor: Option<i64> = None;
        let mut reach: Option<i64> = None;
        let mut entries = Vec::new();
        let mut empty_window = false;
        for (label, r) in &residuals {
            floor = floor.max(r.floor());
            reach = reach.max(r.reach());
            if let (Some(f), Some(top)) = (r.floor(), r.reach()) {
                empty_window |= f > top;
            }
            for e in r.nonzero_exponents() {
                entries.push(CoefficientEntry {
                    component: label.clone(),
                    exponent: e,
                    coefficient: r.coeff(e).expect("exact exponent").to_string(),
                });
            }
        }
        let verdict = if !entries.is_empty() {
            Verdict::Fail
        } else if empty_window {
            Verdict::Indeterminate
        } else {
            Verdict::Pass
        };
        Ok(Self {
            check: check.into(),
            flow_indices,
            window: Window { floor, reach },
            nonzero_coefficients: entries,
            verdict,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symalg::{MultiPoly, VariableTable};

    #[test]
    fn verdicts() {
        let vars = VariableTable::coordinates(&["x"]).unwrap();
        let zero = LaurentObject::zero(&vars);
        let r = ResidualReport::from_residuals("z", vec![1], Ok(vec![("L".into(), zero)])).unwrap();
        assert_eq!(r.verdict, Verdict::Pass);

        let x = LaurentObject::monomial(MultiPoly::var(&vars, "x").unwrap(), -1);
        let r = ResidualReport::from_residuals("x", vec![], Ok(vec![("N".into(), x)])).unwrap();
        assert_eq!(r.verdict, Verdict::Fail);
        assert_eq!(r.nonzero_coefficients[0].exponent, -1);
        assert_eq!(r.nonzero_coefficients[0].coefficient, "x");

        let blank = LaurentObject::zero(&vars).truncate_below(3);
        let r = ResidualReport::from_residuals("b", vec![], Ok(vec![("L".into(), blank)])).unwrap();
        assert_eq!(r.verdict, Verdict::Indeterminate);

        let r = ResidualReport::from_residuals("e", vec![], Err(Error::EmptyWindow)).unwrap();
        assert_eq!(r.verdict, Verdict::Indeterminate);
    }

    #[test]
    fn verdict_json_shape() {
        let r = ResidualReport {
            check: "volume".into(),
            flow_indices: vec![],
            window: Window { floor: None, reach: Some(0) },
            nonzero_coefficients: vec![],
            verdict: Verdict::Pass,
        };
        assert_eq!(
            serde_json::to_string(&r).unwrap(),
            r#"{"check":"volume","flow_indices":[],"window":{"floor":null,"reach":0},"nonzero_coefficients":[],"verdict":"pass"}"#
        );
    }
}
