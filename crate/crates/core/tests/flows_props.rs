mod common;

use common::{poly, xyz};
use nambu_core::flows::{conserved_drift, divergence, integrate, vector_field, Method, NambuSystem};
use nambu_core::nambu::nambu_bracket;
use nambu_core::symalg::{parse_poly, ExactScalar};
use proptest::prelude::*;

fn int(v: i64) -> ExactScalar {
    ExactScalar::from_integer(v.into())
}

fn rigid() -> NambuSystem {
    NambuSystem::rigid_body([int(1), int(2), int(3)], int(1)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn liouville(h1 in poly(xyz(), 3, 5), h2 in poly(xyz(), 3, 5)) {
        let vars = xyz();
        let sys = NambuSystem::new(&vars, &["x", "y", "z"], vec![h1, h2]).unwrap();
        prop_assert!(divergence(&vector_field(&sys), sys.phase()).unwrap().is_zero());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn rigid_body_drift_is_tiny(m in prop::array::uniform3(-1.0f64..1.0)) {
        let sys = rigid();
        let tr = integrate(&sys, &m, 5.0, 1e-3, Method::Rk4).unwrap();
        for d in conserved_drift(&tr, &sys.hamiltonians()).unwrap() {
            prop_assert!(d <= 1e-8, "{}", d);
        }
    }
}

#[test]
fn bracket_matches_time_derivative_along_trajectory() {
    let sys = NambuSystem::euler_top();
    let h = sys.hamiltonians();
    let f = parse_poly("m1*m2*m3", sys.vars()).unwrap();
    let rate = nambu_bracket(&[f.clone(), h[0].clone(), h[1].clone()], &sys.space()).unwrap().compile();
    let fc = f.compile();
    let dt = 1e-3;
    let tr = integrate(&sys, &[1.0, 0.2, 0.1], 1.5, dt, Method::Rk4).unwrap();
    let vals: Vec<f64> = (0..tr.len()).map(|i| fc.eval(&tr.point(i))).collect();
    let mut worst: f64 = 0.0;
    for i in 2..tr.len() - 2 {
        let fd = (-vals[i + 2] + 8.0 * vals[i + 1] - 8.0 * vals[i - 1] + vals[i - 2]) / (12.0 * dt);
        let exact = rate.eval(&tr.point(i));
        worst = worst.max((fd - exact).abs() / exact.abs().max(1.0));
    }
    assert!(worst < 1e-8, "{worst}");
}

#[test]
fn euler_top_conserves_before_blow_up() {
    let sys = NambuSystem::euler_top();
    let tr = integrate(&sys, &[1.0, 0.2, 0.1], 2.0, 1e-3, Method::Rk4).unwrap();
    let d = conserved_drift(&tr, &sys.hamiltonians()).unwrap();
    assert!(d.iter().all(|&x| x <= 1e-8), "{d:?}");
}

#[test]
fn step_halving_shows_fourth_order() {
    let sys = rigid();
    let drift = |dt: f64| {
        let tr = integrate(&sys, &[1.0, 0.2, 0.1], 10.0, dt, Method::Rk4).unwrap();
        conserved_drift(&tr, &sys.hamiltonians())
            .unwrap()
            .into_iter()
            .fold(0.0, f64::max)
    };
    let ratio = drift(1e-2) / drift(5e-3);
    assert!(ratio >= 12.0, "{ratio}");
}
