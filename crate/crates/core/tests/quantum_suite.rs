//! Born-rule CHSH models against the closed form E(a,b) = -cos(a-b) on the
//! singlet, no-disturbance of the quantum statistics, and feasibility at
//! aligned angles.

mod common;

use common::suite_rng;
use contextcost::marginal_solver::{
    check_certificate, global_joint_exists, verify_witness, Feasibility, SolverOptions,
};
use contextcost::quantum_witness::{chsh_model, chsh_value, TSIRELSON_ANGLES};
use rand::Rng;
use std::f64::consts::PI;

fn closed_form(angles: [f64; 4]) -> f64 {
    let [a0, a1, b0, b1] = angles;
    let e = |a: f64, b: f64| -(a - b).cos();
    e(a0, b0) + e(a0, b1) + e(a1, b0) - e(a1, b1)
}

#[test]
fn chsh_matches_closed_form_on_random_angles() {
    let mut rng = suite_rng();
    for round in 0..100 {
        let angles = [
            rng.gen_range(-PI..PI),
            rng.gen_range(-PI..PI),
            rng.gen_range(-PI..PI),
            rng.gen_range(-PI..PI),
        ];
        let model = chsh_model(angles).expect("chsh model builds");
        let s = chsh_value(&model).expect("chsh value");
        let expected = closed_form(angles);
        assert!(
            (s - expected).abs() <= 1e-9,
            "round {round}: S = {s} vs closed form {expected} at {angles:?}"
        );

        // Born statistics of a shared state never signal between the wings.
        let report = model.validate(1e-9).expect("validation runs");
        assert!(report.is_consistent(), "round {round}: quantum model must be non-disturbing");
    }
}

#[test]
fn tsirelson_angles_saturate_the_quantum_bound() {
    let model = chsh_model(TSIRELSON_ANGLES).unwrap();
    let s = chsh_value(&model).unwrap();
    assert!((s.abs() - 2.0 * 2.0f64.sqrt()).abs() <= 1e-12, "S = {s}");

    let result = global_joint_exists(&model, &SolverOptions::default()).unwrap();
    assert_eq!(result.feasibility, Feasibility::Infeasible);
    let cert = result.certificate.expect("certificate");
    assert!(check_certificate(&model, &cert, &SolverOptions::default()).unwrap());
}

#[test]
fn aligned_angles_admit_a_global_joint() {
    let theta = 0.37;
    let model = chsh_model([theta, theta, theta, theta]).unwrap();
    assert!((chsh_value(&model).unwrap() - (-2.0)).abs() <= 1e-12);

    let result = global_joint_exists(&model, &SolverOptions::default()).unwrap();
    assert_eq!(result.feasibility, Feasibility::Feasible);
    let witness = result.witness.expect("witness");
    let check = verify_witness(&model, &witness, 1e-9 + result.snap_distance).unwrap();
    assert!(check.ok, "witness deviation {}", check.max_deviation);
}

#[test]
fn classical_bound_separates_feasibility() {
    // |S| <= 2 achieved by a deterministic strategy: perfectly correlated
    // settings a0 = a1 = b0 = b1 - pi gives S = 2 and stays feasible.
    let model = chsh_model([0.0, 0.0, PI, PI]).unwrap();
    let s = chsh_value(&model).unwrap();
    assert!((s - 2.0).abs() <= 1e-12, "S = {s}");
    let result = global_joint_exists(&model, &SolverOptions::default()).unwrap();
    assert_eq!(result.feasibility, Feasibility::Feasible);
}
