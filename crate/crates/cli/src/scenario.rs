use std::cell::RefCell;
use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Bracket,
    FiCheck,
    Decompose,
    RigidBody,
    EulerTop,
    DkpZc,
    DkpFlow,
    VpVacuum,
    VpCheck,
    Plebanski,
    Pencil,
    Metric3,
    Hydro,
    TwistorData,
}

impl Command {
    pub const ALL: [Command; 14] = [
        Command::Bracket,
        Command::FiCheck,
        Command::Decompose,
        Command::RigidBody,
        Command::EulerTop,
        Command::DkpZc,
        Command::DkpFlow,
        Command::VpVacuum,
        Command::VpCheck,
        Command::Plebanski,
        Command::Pencil,
        Command::Metric3,
        Command::Hydro,
        Command::TwistorData,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Bracket => "bracket",
            Command::FiCheck => "fi-check",
            Command::Decompose => "decompose",
            Command::RigidBody => "rigid-body",
            Command::EulerTop => "euler-top",
            Command::DkpZc => "dkp-zc",
            Command::DkpFlow => "dkp-flow",
            Command::VpVacuum => "vp-vacuum",
            Command::VpCheck => "vp-check",
            Command::Plebanski => "plebanski",
            Command::Pencil => "pencil",
            Command::Metric3 => "metric3",
            Command::Hydro => "hydro",
            Command::TwistorData => "twistor-data",
        }
    }
}

/// One unit of work: a command, its input payload and its options.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub command: Command,
    #[serde(default, skip_serializing_if = "Value::is_null")]
    pub input: Value,
    #[serde(default, skip_serializing_if = "Map::is_empty")]
    pub options: Map<String, Value>,
}

impl Scenario {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            input: Value::Null,
            options: Map::new(),
        }
    }

    pub fn with_option(mut self, key: &str, value: Value) -> Self {
        self.options.insert(key.into(), value);
        self
    }

    pub fn with_input(mut self, input: Value) -> Self {
        self.input = input;
        self
    }
}

/// Scenario files hold one scenario or a batch array.
pub fn parse_scenarios(text: &str) -> CliResult<Vec<Scenario>> {
    let v: Value = serde_json::from_str(text).map_err(|e| CliError::Input(format!("scenario JSON: {e}")))?;
    let list = match v {
        Value::Array(items) => items,
        other => vec![other],
    };
    if list.is_empty() {
        return Err(CliError::Input("empty scenario batch".into()));
    }
    list.into_iter()
        .map(|s| serde_json::from_value(s).map_err(|e| CliError::Input(format!("scenario: {e}"))))
        .collect()
}

/// Options with defaults; every value read is recorded so the report can
/// echo the resolved settings, and unread keys are rejected.
pub(crate) struct Options<'a> {
    raw: &'a Map<String, Value>,
    seen: RefCell<BTreeSet<String>>,
    resolved: RefCell<Map<String, Value>>,
}

impl<'a> Options<'a> {
    pub fn new(raw: &'a Map<String, Value>) -> Self {
        Self {
            raw,
            seen: RefCell::new(BTreeSet::new()),
            resolved: RefCell::new(Map::new()),
        }
    }

    fn get(&self, key: &str) -> Option<&'a Value> {
        self.seen.borrow_mut().insert(key.into());
        self.raw.get(key)
    }

    pub fn record(&self, key: &str, v: Value) {
        self.resolved.borrow_mut().insert(key.into(), v);
    }

    pub fn raw(&self, key: &str) -> Option<&'a Value> {
        self.get(key)
    }

    pub fn usize_in(&self, key: &str, default: usize, lo: usize, hi: usize) -> CliResult<usize> {
        let v = match self.get(key) {
            None => default,
            Some(v) => v
                .as_u64()
                .ok_or_else(|| CliError::Input(format!("option `{key}` must be a non-negative integer")))?
                as usize,
        };
        if v < lo || v > hi {
            return Err(CliError::Input(format!("option `{key}` = {v} outside [{lo}, {hi}]")));
        }
        self.record(key, v.into());
        Ok(v)
    }

    pub fn f64_in(&self, key: &str, default: f64, lo: f64, hi: f64) -> CliResult<f64> {
        let v = match self.get(key) {
            None => default,
            Some(v) => v
                .as_f64()
                .ok_or_else(|| CliError::Input(format!("option `{key}` must be a number")))?,
        };
        if !(lo..=hi).contains(&v) {
            return Err(CliError::Input(format!("option `{key}` = {v} outside [{lo}, {hi}]")));
        }
        self.record(key, crate::report::float(v));
        Ok(v)
    }

    pub fn bool(&self, key: &str, default: bool) -> CliResult<bool> {
        let v = match self.get(key) {
            None => default,
            Some(v) => v
                .as_bool()
                .ok_or_else(|| CliError::Input(format!("option `{key}` must be a boolean")))?,
        };
        self.record(key, v.into());
        Ok(v)
    }

    pub fn resolved(&self) -> Map<String, Value> {
        self.resolved.borrow().clone()
    }

    pub fn finish(&self) -> CliResult<()> {
        let seen = self.seen.borrow();
        let unknown: Vec<&String> = self.raw.keys().filter(|k| !seen.contains(*k)).collect();
        if unknown.is_empty() {
            Ok(())
        } else {
            Err(CliError::Input(format!("unknown options {unknown:?}")))
        }
    }
}
