#![allow(dead_code)]

use std::sync::Arc;

use nambu_core::symalg::{ExactScalar, MultiPoly, VariableTable};
use proptest::prelude::*;

/// Polynomials over `vars` with total degree at most `max_degree`.
pub fn poly(vars: Arc<VariableTable>, max_degree: u32, max_terms: usize) -> impl Strategy<Value = MultiPoly> {
    let n = vars.len();
    let term = (prop::collection::vec(0..=max_degree, n), -6i64..=6, 1i64..=3);
    prop::collection::vec(term, 0..=max_terms).prop_map(move |terms| {
        let kept = terms.into_iter().filter_map(|(exps, num, den)| {
            (exps.iter().sum::<u32>() <= max_degree)
                .then(|| (exps, ExactScalar::new(num.into(), den.into())))
        });
        MultiPoly::from_terms(&vars, kept.collect::<Vec<_>>()).unwrap()
    })
}

pub fn xyz() -> Arc<VariableTable> {
    VariableTable::coordinates(&["x", "y", "z"]).unwrap()
}
