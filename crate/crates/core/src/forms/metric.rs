use std::collections::BTreeMap;
use std::sync::Arc;

use serde_json::{json, Value};

use super::form::DifferentialForm;
use crate::error::{Error, Result};
use crate::symalg::json::{table_to_json, terms_to_json};
use crate::symalg::{MultiPoly, VariableTable};

/// Symmetric tensor of 1-forms; keys are sorted multisets of coordinate
/// positions and `dx·dy` denotes the unnormalized symmetric product.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetricForm {
    vars: Arc<VariableTable>,
    coords: Vec<usize>,
    rank: usize,
    terms: BTreeMap<Vec<usize>, MultiPoly>,
}

impl SymmetricForm {
    /// Symmetric product of 1-forms on a common space.
    pub fn product(factors: &[&DifferentialForm]) -> Result<Self> {
        let first = factors
            .first()
            .ok_or_else(|| Error::Invalid("empty symmetric product".into()))?;
        let mut acc: BTreeMap<Vec<usize>, MultiPoly> = BTreeMap::new();
        acc.insert(Vec::new(), MultiPoly::one(first.vars()));
        for f in factors {
            if f.degree() != 1 {
                return Err(Error::Dimension(format!("metric entries must be 1-forms, got degree {}", f.degree())));
            }
            if f.vars() != first.vars() || f.coords() != first.coords() {
                return Err(Error::TableMismatch);
            }
            let mut next: BTreeMap<Vec<usize>, MultiPoly> = BTreeMap::new();
            for (k, c) in &acc {
                for (idx, fc) in f.terms() {
                    let mut key = k.clone();
                    key.push(idx[0]);
                    key.sort_unstable();
                    let slot = next.entry(key).or_insert_with(|| MultiPoly::zero(first.vars()));
                    *slot = &*slot + &(c * fc);
                }
            }
            next.retain(|_, c| !c.is_zero());
            acc = next;
        }
        Ok(Self {
            vars: first.vars().clone(),
            coords: first.coords().to_vec(),
            rank: factors.len(),
            terms: acc,
        })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, multiset: &[usize]) -> MultiPoly {
        let mut k = multiset.to_vec();
        k.sort_unstable();
        self.terms.get(&k).cloned().unwrap_or_else(|| MultiPoly::zero(&self.vars))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &MultiPoly)> {
        self.terms.iter()
    }

    fn combine(&self, other: &Self, sign: i64) -> Result<Self> {
        if self.vars != other.vars || self.coords != other.coords || self.rank != other.rank {
            return Err(Error::TableMismatch);
        }
        let mut out = self.clone();
        for (k, c) in &other.terms {
            let slot = out.terms.entry(k.clone()).or_insert_with(|| MultiPoly::zero(&self.vars));
            *slot = &*slot + &c.scale_int(sign);
        }
        out.terms.retain(|_, c| !c.is_zero());
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.combine(other, 1)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.combine(other, -1)
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -&*c;
        }
        out
    }

    /// `{"variables", "coordinates", "rank", "terms": [[[positions], termlist]]}`.
    pub fn to_json(&self) -> Value {
        json!({
            "variables": table_to_json(&self.vars),
            "coordinates": self.coords.iter().map(|&c| self.vars.name(c)).collect::<Vec<_>>(),
            "rank": self.rank,
            "terms": self.terms.iter().map(|(k, c)| json!([k, terms_to_json(c)])).collect::<Vec<_>>(),
        })
    }
}

/// `g = e¹¹e²²e³³ − e¹¹e³²e²³ + e¹²e³¹e²³ − e¹²e²¹e³³ + e¹³e²¹e³² − e¹³e³¹e²²`
/// with symmetric products; `frame[i][j]` is `e^{(i+1)(j+1)}`.
pub fn det_metric3(frame: &[[DifferentialForm; 3]; 3]) -> Result<SymmetricForm> {
    let e = |i: usize, j: usize| &frame[i - 1][j - 1];
    let term = |a: (usize, usize), b: (usize, usize), c: (usize, usize)| {
        SymmetricForm::product(&[e(a.0, a.1), e(b.0, b.1), e(c.0, c.1)])
    };
    term((1, 1), (2, 2), (3, 3))?
        .sub(&term((1, 1), (3, 2), (2, 3))?)?
        .add(&term((1, 2), (3, 1), (2, 3))?)?
        .sub(&term((1, 2), (2, 1), (3, 3))?)?
        .add(&term((1, 3), (2, 1), (3, 2))?)?
        .sub(&term((1, 3), (3, 1), (2, 2))?)
}
