use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Role of a variable. Jets are formal x-derivatives `base^(order)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum VarKind {
    Coordinate,
    Time,
    Jet { base: String, order: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Variable {
    pub name: String,
    #[serde(flatten)]
    pub kind: VarKind,
}

impl Variable {
    pub fn coordinate(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            kind: VarKind::Coordinate,
        }
    }

    pub fn time(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            kind: VarKind::Time,
        }
    }

    /// Jet symbol for the `order`-th x-derivative of `base`. Order 0 is named
    /// after the base itself, higher orders append `_x`, `_xx`, ...
    pub fn jet(base: impl Into<String>, order: u32) -> Self {
        let base = base.into();
        let name = jet_name(&base, order);
        Self {
            name,
            kind: VarKind::Jet { base, order },
        }
    }
}

pub(crate) fn jet_name(base: &str, order: u32) -> String {
    if order == 0 {
        base.to_string()
    } else {
        format!("{base}_{}", "x".repeat(order as usize))
    }
}

/// Ordered list of distinct variables. Polynomials index exponents by
/// position in this table, so two polynomials can only be combined when
/// their tables agree.
#[derive(Debug, Clone)]
pub struct VariableTable {
    vars: Vec<Variable>,
    index: HashMap<String, usize>,
    jets: HashMap<(String, u32), usize>,
}

impl PartialEq for VariableTable {
    fn eq(&self, other: &Self) -> bool {
        self.vars == other.vars
    }
}

impl Eq for VariableTable {}

impl VariableTable {
    pub fn new(vars: Vec<Variable>) -> Result<Arc<Self>> {
        let mut index = HashMap::with_capacity(vars.len());
        let mut jets = HashMap::new();
        for (i, v) in vars.iter().enumerate() {
            if index.insert(v.name.clone(), i).is_some() {
                return Err(Error::DuplicateVariable(v.name.clone()));
            }
            if let VarKind::Jet { base, order } = &v.kind {
                jets.insert((base.clone(), *order), i);
            }
        }
        Ok(Arc::new(Self { vars, index, jets }))
    }

    /// Table of plain coordinates, in order.
    pub fn coordinates<S: AsRef<str>>(names: &[S]) -> Result<Arc<Self>> {
        Self::new(
            names
                .iter()
                .map(|n| Variable::coordinate(n.as_ref()))
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn variables(&self) -> &[Variable] {
        &self.vars
    }

    pub fn get(&self, i: usize) -> &Variable {
        &self.vars[i]
    }

    pub fn name(&self, i: usize) -> &str {
        &self.vars[i].name
    }

    pub fn find(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.find(name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    pub fn jet(&self, base: &str, order: u32) -> Option<usize> {
        self.jets.get(&(base.to_string(), order)).copied()
    }

    /// Highest jet order present for `base`, if the family exists at all.
    pub fn max_jet_order(&self, base: &str) -> Option<u32> {
        self.vars
            .iter()
            .filter_map(|v| match &v.kind {
                VarKind::Jet { base: b, order } if b == base => Some(*order),
                _ => None,
            })
            .max()
    }

    pub(crate) fn same(a: &Arc<Self>, b: &Arc<Self>) -> bool {
        Arc::ptr_eq(a, b) || **a == **b
    }
}
