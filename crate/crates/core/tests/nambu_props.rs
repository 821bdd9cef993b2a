mod common;

use common::{poly, xyz};
use nambu_core::nambu::{
    fundamental_identity_residual, is_decomposable_oracle, nambu_bracket, satisfies_algebraic_constraint,
    tensor_bracket, BracketSpace, NambuTensor,
};
use nambu_core::sample::{canonical_nondecomposable, decomposability_tensors};
use nambu_core::symalg::{MultiPoly, VariableTable};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn space() -> BracketSpace {
    BracketSpace::new(&xyz(), &["x", "y", "z"]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn bracket_is_alternating(f in poly(xyz(), 3, 4), g in poly(xyz(), 3, 4), h in poly(xyz(), 3, 4)) {
        let s = space();
        let b = nambu_bracket(&[f.clone(), g.clone(), h.clone()], &s).unwrap();
        prop_assert_eq!(nambu_bracket(&[g.clone(), f.clone(), h.clone()], &s).unwrap(), -&b);
        prop_assert_eq!(nambu_bracket(&[f.clone(), h.clone(), g.clone()], &s).unwrap(), -&b);
        prop_assert!(nambu_bracket(&[f.clone(), f.clone(), h], &s).unwrap().is_zero());
    }

    #[test]
    fn bracket_leibniz(f in poly(xyz(), 2, 3), k in poly(xyz(), 2, 3), g in poly(xyz(), 2, 3), h in poly(xyz(), 2, 3)) {
        let s = space();
        let lhs = nambu_bracket(&[&f * &k, g.clone(), h.clone()], &s).unwrap();
        let rhs = &(&f * &nambu_bracket(&[k.clone(), g.clone(), h.clone()], &s).unwrap())
            + &(&k * &nambu_bracket(&[f, g, h], &s).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn fundamental_identity(fs in prop::collection::vec(poly(xyz(), 2, 3), 5)) {
        prop_assert!(fundamental_identity_residual(&fs, &space()).unwrap().is_zero());
    }

    #[test]
    fn levi_civita_tensor_matches_jacobian(f in poly(xyz(), 2, 3), g in poly(xyz(), 2, 3), h in poly(xyz(), 2, 3)) {
        let vars = xyz();
        let eta = NambuTensor::levi_civita(&vars, vec![0, 1, 2], MultiPoly::one(&vars)).unwrap();
        let fs = [f, g, h];
        prop_assert_eq!(tensor_bracket(&eta, &fs).unwrap(), nambu_bracket(&fs, &space()).unwrap());
    }
}

#[test]
fn fundamental_identity_four_bracket() {
    let vars = VariableTable::coordinates(&["w", "x", "y", "z"]).unwrap();
    let s = BracketSpace::new(&vars, &["w", "x", "y", "z"]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..5 {
        let fs: Vec<_> = (0..7)
            .map(|_| nambu_core::sample::random_poly(&mut rng, &vars, &[0, 1, 2, 3], 2, 3, 3))
            .collect();
        assert!(fundamental_identity_residual(&fs, &s).unwrap().is_zero());
    }
}

#[test]
fn constraint_agrees_with_plucker_oracle() {
    let vars = VariableTable::coordinates(&["e1", "e2", "e3", "e4", "e5", "e6"]).unwrap();
    let mut tensors = decomposability_tensors(&mut ChaCha8Rng::seed_from_u64(2024), &vars, 60);
    tensors.push(canonical_nondecomposable(&vars));
    let mut decomposable = 0;
    for t in &tensors {
        let oracle = is_decomposable_oracle(t).unwrap();
        assert_eq!(satisfies_algebraic_constraint(t), oracle, "{}", t.to_json());
        decomposable += oracle as usize;
    }
    assert!(decomposable > 10 && decomposable < tensors.len() - 10, "{decomposable}");
    assert!(!satisfies_algebraic_constraint(tensors.last().unwrap()));
}
