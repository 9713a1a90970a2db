//! Seeded end-to-end checks of the feasibility solver against an
//! independent basis-enumeration oracle, over every 2- and 3-observable
//! binary scenario shape. Every verdict's artifact (witness or Farkas
//! certificate) is re-verified.

mod common;

use common::*;
use contextcost::marginal_solver::{
    check_certificate, global_joint_exists, verify_witness, Feasibility, SolverOptions,
};
use contextcost::scenario::EmpiricalModel;

#[test]
fn verdicts_match_oracle_on_seeded_suite() {
    let mut rng = suite_rng();
    let opts = SolverOptions::default();
    let mut checked = 0usize;
    let mut feasible = 0usize;
    let mut infeasible = 0usize;

    let mut instances: Vec<EmpiricalModel> = vec![EmpiricalModel::triangle_example()];
    for scenario in scenario_shapes() {
        let pairwise_only = scenario.contexts().iter().all(|c| c.len() <= 2);
        for round in 0..12 {
            let model = if pairwise_only && round % 2 == 1 {
                coupled_model(&mut rng, &scenario)
            } else {
                model_from_global(&mut rng, &scenario)
            };
            instances.push(model);
        }
    }

    for model in &instances {
        let report = model.validate(1e-9).expect("validation runs");
        assert!(report.is_consistent(), "suite generates consistent models");

        let result = global_joint_exists(model, &opts).expect("solver runs");
        let solver_says = result.feasibility == Feasibility::Feasible;
        assert_eq!(
            solver_says,
            oracle_feasible(model),
            "solver disagrees with oracle on instance {checked}"
        );

        match result.feasibility {
            Feasibility::Feasible => {
                let witness = result.witness.as_ref().expect("feasible => witness");
                let check = verify_witness(model, witness, 0.0).expect("witness check");
                assert!(
                    check.ok,
                    "witness must reproduce exact tables exactly, deviation {}",
                    check.max_deviation
                );
                feasible += 1;
            }
            Feasibility::Infeasible => {
                let cert = result.certificate.as_ref().expect("infeasible => certificate");
                assert!(
                    check_certificate(model, cert, &opts).expect("certificate check"),
                    "Farkas certificate must verify on instance {checked}"
                );
                infeasible += 1;
            }
        }
        checked += 1;
    }

    assert!(checked >= 90, "suite size ({checked})");
    assert!(feasible >= 30, "suite exercises feasible instances ({feasible})");
    assert!(
        infeasible >= 3,
        "suite exercises infeasible instances ({infeasible})"
    );
}

#[test]
fn solver_is_deterministic_across_runs() {
    let mut rng = suite_rng();
    let opts = SolverOptions::default();
    for scenario in scenario_shapes() {
        let model = model_from_global(&mut rng, &scenario);
        let a = global_joint_exists(&model, &opts).expect("first run");
        let b = global_joint_exists(&model, &opts).expect("second run");
        assert_eq!(a, b, "identical inputs must give identical results");
    }
}

#[test]
fn oracle_agrees_on_known_instances() {
    // Triangle: pairwise consistent but globally unrealizable.
    assert!(!oracle_feasible(&EmpiricalModel::triangle_example()));
    // Any marginals of a global joint are realizable.
    let mut rng = suite_rng();
    let scenario = binary_scenario(&["A", "B", "C"], &[&["A", "B"], &["B", "C"], &["A", "C"]]);
    for _ in 0..5 {
        assert!(oracle_feasible(&model_from_global(&mut rng, &scenario)));
    }
}
