//! Seeded random inputs for property sweeps.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::nambu::NambuTensor;
use crate::symalg::{ExactScalar, MultiPoly, VariableTable};

/// Integer-coefficient polynomial in `coords` of total degree at most
/// `max_degree`, with up to `max_terms` terms and coefficients in
/// `[-bound, bound]`.
pub fn random_poly<R: Rng>(
    rng: &mut R,
    vars: &Arc<VariableTable>,
    coords: &[usize],
    max_degree: u32,
    max_terms: usize,
    bound: i64,
) -> MultiPoly {
    let count = rng.gen_range(1..=max_terms);
    let terms = (0..count).map(|_| {
        let mut exps = vec![0u32; vars.len()];
        let degree = rng.gen_range(0..=max_degree);
        for _ in 0..degree {
            exps[*coords.choose(rng).expect("nonempty coordinates")] += 1;
        }
        (exps, ExactScalar::from_integer(rng.gen_range(-bound..=bound).into()))
    });
    MultiPoly::from_terms(vars, terms.collect::<Vec<_>>()).expect("monomials sized to the table")
}

fn constant(vars: &Arc<VariableTable>, v: i64) -> MultiPoly {
    MultiPoly::integer(vars, v)
}

/// `e1∧e2∧e3 + e4∧e5∧e6` on a 6-dimensional table.
pub fn canonical_nondecomposable(vars: &Arc<VariableTable>) -> NambuTensor {
    let mut t = NambuTensor::zero_on_table(vars, 3).expect("dimension 6");
    t.set(&[0, 1, 2], constant(vars, 1)).expect("valid index");
    t.set(&[3, 4, 5], constant(vars, 1)).expect("valid index");
    t
}

/// Constant order-3 tensors in dimension `vars.len()` with integer entries
/// in `[-3, 3]`, drawn from three families in turn: dense generic entries,
/// wedges of three `{-1, 0, 1}` vectors (rejected unless nonzero with all
/// entries in range), and two-block sums `a·e_I + b·e_J`.
pub fn decomposability_tensors<R: Rng>(rng: &mut R, vars: &Arc<VariableTable>, count: usize) -> Vec<NambuTensor> {
    let dim = vars.len();
    let triples: Vec<[usize; 3]> = (0..dim)
        .flat_map(|i| (i + 1..dim).flat_map(move |j| (j + 1..dim).map(move |k| [i, j, k])))
        .collect();
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let mut t = NambuTensor::zero_on_table(vars, 3).expect("dimension at least 3");
        match out.len() % 3 {
            0 => {
                for idx in &triples {
                    let v = rng.gen_range(-3..=3);
                    if v != 0 {
                        t.set(idx, constant(vars, v)).expect("valid index");
                    }
                }
            }
            1 => {
                let vecs: Vec<Vec<MultiPoly>> = (0..3)
                    .map(|_| (0..dim).map(|_| constant(vars, rng.gen_range(-1..=1))).collect())
                    .collect();
                t = NambuTensor::wedge_of(vars, (0..dim).collect(), &vecs).expect("sized vectors");
                let in_range = t.entries().all(|(_, c)| {
                    c.constant_value()
                        .map(|q| q.numer().magnitude() <= &3u32.into())
                        .unwrap_or(false)
                });
                if t.entries().next().is_none() || !in_range {
                    continue;
                }
            }
            _ => {
                let a = *triples.choose(rng).expect("nonempty");
                let b = *triples.choose(rng).expect("nonempty");
                let pick = |rng: &mut R| loop {
                    let v: i64 = rng.gen_range(-3..=3);
                    if v != 0 {
                        break v;
                    }
                };
                let (ca, cb) = (pick(rng), pick(rng));
                t.set(&a, constant(vars, ca)).expect("valid index");
                let prev = t.get(&b);
                t.set(&b, &prev + &constant(vars, cb)).expect("valid index");
                let fits = t.entries().all(|(_, c)| {
                    c.constant_value()
                        .map(|q| q.numer().magnitude() <= &3u32.into())
                        .unwrap_or(false)
                });
                if t.entries().next().is_none() || !fits {
                    continue;
                }
            }
        }
        out.push(t);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn seeded_and_bounded() {
        let vars = VariableTable::coordinates(&["e1", "e2", "e3", "e4", "e5", "e6"]).unwrap();
        let a = decomposability_tensors(&mut ChaCha8Rng::seed_from_u64(7), &vars, 30);
        let b = decomposability_tensors(&mut ChaCha8Rng::seed_from_u64(7), &vars, 30);
        assert_eq!(a.len(), 30);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.to_json(), y.to_json());
            assert!(x.is_constant());
        }
    }

    #[test]
    fn poly_degree_bound() {
        let vars = VariableTable::coordinates(&["x", "y", "z"]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let p = random_poly(&mut rng, &vars, &[0, 1, 2], 3, 5, 4);
            assert!(p.total_degree().unwrap_or(0) <= 3);
        }
    }
}
