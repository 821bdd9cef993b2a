use std::time::Duration;

use nambu_core::flows::Trajectory;
use nambu_core::forms::{DifferentialForm, FormPencil};
use nambu_core::hierarchy::{ResidualReport, Verdict};
use nambu_core::symalg::{LaurentObject, MultiPoly};
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::error::CliResult;
use crate::scenario::{Command, Scenario};

/// Finite floats as JSON numbers with 17 significant digits; non-finite
/// values as strings.
pub fn float(v: f64) -> Value {
    if v.is_finite() {
        Value::Number(format!("{v:.16e}").parse().expect("formatted float is a JSON number"))
    } else {
        Value::String(v.to_string())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub verdict: Verdict,
    pub details: Value,
}

impl Check {
    pub fn new(name: impl Into<String>, verdict: Verdict, details: Value) -> Self {
        Self {
            name: name.into(),
            verdict,
            details,
        }
    }

    pub fn pass_if(name: impl Into<String>, ok: bool, details: Value) -> Self {
        Self::new(name, if ok { Verdict::Pass } else { Verdict::Fail }, details)
    }

    /// Exact polynomial residual; passes iff zero.
    pub fn poly(name: impl Into<String>, residual: &MultiPoly) -> Self {
        Self::pass_if(name, residual.is_zero(), json!({ "residual": residual.to_string() }))
    }

    /// Residual series, reported over the exact window. Truncation-type
    /// failures become `indeterminate`.
    pub fn residuals(
        name: &str,
        flow_indices: Vec<usize>,
        residuals: nambu_core::Result<Vec<(String, LaurentObject)>>,
    ) -> CliResult<Self> {
        let residuals = residuals.map_err(|e| match e {
            nambu_core::Error::JetOrderExceeded { .. } => nambu_core::Error::Truncation(e.to_string()),
            other => other,
        });
        let mut r = ResidualReport::from_residuals(name, flow_indices, residuals)?;
        r.nonzero_coefficients
            .sort_by(|a, b| (&a.component, a.exponent).cmp(&(&b.component, b.exponent)));
        let label = if r.flow_indices.is_empty() {
            r.check.clone()
        } else {
            let idx: Vec<String> = r.flow_indices.iter().map(usize::to_string).collect();
            format!("{}({})", r.check, idx.join(","))
        };
        Ok(Self::new(label, r.verdict, serde_json::to_value(&r).expect("report serializes")))
    }

    /// Form residual; passes iff the form is zero. Nonzero terms are listed
    /// with coordinate names.
    pub fn form(name: impl Into<String>, f: &DifferentialForm) -> Self {
        Self::pass_if(name, f.is_zero(), form_summary(f))
    }

    pub fn pencil(name: impl Into<String>, p: &FormPencil) -> Self {
        let members: Vec<Value> = p
            .members()
            .iter()
            .map(|(tau, f)| json!({ "tau": tau, "form": form_summary(f) }))
            .collect();
        Self::pass_if(name, p.is_zero(), json!({ "nonzero_members": members }))
    }
}

pub fn form_summary(f: &DifferentialForm) -> Value {
    let vars = f.vars();
    let terms: Vec<Value> = f
        .terms()
        .map(|(pos, c)| {
            let names: Vec<&str> = pos.iter().map(|&i| vars.name(f.coords()[i])).collect();
            json!({ "basis": names.join("^"), "coefficient": c.to_string() })
        })
        .collect();
    json!({ "degree": f.degree(), "nonzero_terms": terms })
}

/// Outcome of one scenario. Timing and the trajectory are kept out of the
/// serialized form so emitted files are byte-deterministic.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: Command,
    pub scenario: Scenario,
    pub resolved_options: Map<String, Value>,
    pub verdict: Verdict,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Map::is_empty")]
    pub results: Map<String, Value>,
    #[serde(skip)]
    pub trajectory: Option<Trajectory>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        match self.verdict {
            Verdict::Pass => 0,
            Verdict::Fail => 1,
            Verdict::Indeterminate => 3,
        }
    }
}

/// Aggregate exit status: bad input dominates, then failure, then
/// indeterminate.
pub fn exit_code(outcomes: &[CliResult<Report>]) -> i32 {
    if outcomes.iter().any(Result::is_err) {
        return 2;
    }
    let codes: Vec<i32> = outcomes.iter().flatten().map(Report::exit_code).collect();
    if codes.contains(&1) {
        1
    } else if codes.contains(&3) {
        3
    } else {
        0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::CliError;

    #[test]
    fn floats_keep_seventeen_digits() {
        assert_eq!(float(0.1).to_string(), "1.0000000000000001e-1");
        assert_eq!(float(1e-8).to_string(), "1.0000000000000000e-8");
        assert_eq!(float(f64::INFINITY), Value::String("inf".into()));
    }

    #[test]
    fn exit_code_precedence() {
        let report = |verdict| Report {
            command: Command::Bracket,
            scenario: Scenario::new(Command::Bracket),
            resolved_options: Map::new(),
            verdict,
            checks: Vec::new(),
            results: Map::new(),
            trajectory: None,
            elapsed: Duration::ZERO,
        };
        assert_eq!(exit_code(&[Ok(report(Verdict::Pass))]), 0);
        assert_eq!(exit_code(&[Ok(report(Verdict::Indeterminate)), Ok(report(Verdict::Pass))]), 3);
        assert_eq!(exit_code(&[Ok(report(Verdict::Indeterminate)), Ok(report(Verdict::Fail))]), 1);
        assert_eq!(exit_code(&[Ok(report(Verdict::Fail)), Err(CliError::Input("x".into()))]), 2);
    }
}
