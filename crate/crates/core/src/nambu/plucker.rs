use num_traits::Zero;

use super::tensor::{increasing_tuples, sort_with_sign, NambuTensor};
use crate::error::{Error, Result};
use crate::symalg::ExactScalar;

/// Decides whether a constant polyvector is decomposable,
/// `η = v1 ∧ … ∧ vn`, without factoring it.
///
/// Criterion: η is decomposable iff `(ι_α η) ∧ η = 0` for every
/// `α ∈ Λ^{n-1} V*`. It suffices to run α over the basis covectors
/// `e^J`, J an increasing (n−1)-tuple; `ι_{e^J} η` is the vector with
/// components `η_{J k}`.
pub fn is_decomposable_oracle(eta: &NambuTensor) -> Result<bool> {
    if let Some((idx, _)) = eta.entries().find(|(_, v)| !v.is_constant()) {
        return Err(Error::NonConstant(idx.clone()));
    }
    let dim = eta.dim();
    let n = eta.order();
    let value = |idx: &[usize]| -> ExactScalar {
        let mut sorted = idx.to_vec();
        match sort_with_sign(&mut sorted) {
            None => ExactScalar::zero(),
            Some(sign) => {
                let v = eta.get(&sorted).constant_value().unwrap_or_else(ExactScalar::zero);
                if sign < 0 {
                    -v
                } else {
                    v
                }
            }
        }
    };
    if n == dim {
        return Ok(true);
    }
    let wedge_targets = increasing_tuples(dim, n + 1);
    for contraction in increasing_tuples(dim, n - 1) {
        let vector: Vec<ExactScalar> = (0..dim)
            .map(|k| {
                let mut idx = contraction.clone();
                idx.push(k);
                value(&idx)
            })
            .collect();
        if vector.iter().all(Zero::is_zero) {
            continue;
        }
        // (v ∧ η)_K = Σ_m (−1)^m v_{K_m} η_{K \ K_m}
        for target in &wedge_targets {
            let mut acc = ExactScalar::zero();
            for m in 0..target.len() {
                let v = &vector[target[m]];
                if v.is_zero() {
                    continue;
                }
                let rest: Vec<usize> = target
                    .iter()
                    .enumerate()
                    .filter(|&(p, _)| p != m)
                    .map(|(_, &x)| x)
                    .collect();
                let term = v * value(&rest);
                if m % 2 == 0 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            if !acc.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symalg::{MultiPoly, VariableTable};

    #[test]
    fn canonical_examples() {
        let names: Vec<String> = (1..=6).map(|i| format!("x{i}")).collect();
        let t = VariableTable::coordinates(&names).unwrap();
        let mut eta = NambuTensor::zero_on_table(&t, 3).unwrap();
        eta.set(&[0, 1, 2], MultiPoly::one(&t)).unwrap();
        assert!(is_decomposable_oracle(&eta).unwrap());
        eta.set(&[3, 4, 5], MultiPoly::one(&t)).unwrap();
        assert!(!is_decomposable_oracle(&eta).unwrap());
    }

    #[test]
    fn rejects_non_constant_entries() {
        let t = VariableTable::coordinates(&["x", "y", "z", "w"]).unwrap();
        let mut eta = NambuTensor::zero_on_table(&t, 2).unwrap();
        eta.set(&[0, 1], MultiPoly::var(&t, "x").unwrap()).unwrap();
        assert_eq!(is_decomposable_oracle(&eta), Err(Error::NonConstant(vec![0, 1])));
    }

    #[test]
    fn bivector_rank_test() {
        // e1∧e2 + e3∧e4 has rank 4, so it is not decomposable.
        let t = VariableTable::coordinates(&["a", "b", "c", "d"]).unwrap();
        let mut eta = NambuTensor::zero_on_table(&t, 2).unwrap();
        eta.set(&[0, 1], MultiPoly::one(&t)).unwrap();
        assert!(is_decomposable_oracle(&eta).unwrap());
        eta.set(&[2, 3], MultiPoly::one(&t)).unwrap();
        assert!(!is_decomposable_oracle(&eta).unwrap());
    }
}
