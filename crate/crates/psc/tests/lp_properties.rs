//! Solver-level properties of the LP layer: the relaxation bound against the
//! exact oracle, agreement with vertex enumeration, residual quality, Bland
//! termination, and determinism under weight scaling.

mod common;

use common::{fuzz_instance, lp_vertex_enumeration, mixed_corpus};
use psc::core::{PscInstance, SetSystem};
use psc::generators::Dist;
use psc::lp::{build_psc_lp, build_sc_lp, residuals, solve_lp, LpStatus};
use psc::solver::exact_brute_force;

#[test]
fn relaxation_never_exceeds_integral_optimum() {
    for inst in mixed_corpus(300) {
        let res = solve_lp(&build_psc_lp(&inst)).unwrap();
        assert_eq!(res.status, LpStatus::Optimal);
        let opt = exact_brute_force(&inst).unwrap();
        assert!(
            res.objective_value <= opt.weight + 1e-7,
            "lp {} above optimum {}",
            res.objective_value,
            opt.weight
        );
    }
}

#[test]
fn primal_residuals_stay_within_tolerance() {
    for inst in mixed_corpus(300) {
        let lp = build_psc_lp(&inst);
        let res = solve_lp(&lp).unwrap();
        let r = residuals(&lp, &res.primal);
        assert!(r.constraint <= 1e-7, "constraint residual {}", r.constraint);
        assert!(r.bound <= 1e-9, "bound residual {}", r.bound);
    }
}

#[test]
fn bland_terminates_within_the_iteration_cap() {
    // The solver errors out past 10 * (rows + cols); reaching Ok is the
    // whole assertion.
    for inst in mixed_corpus(500) {
        let lp = build_psc_lp(&inst);
        let res = solve_lp(&lp).unwrap();
        let cap = 10 * (lp.constraints.len() + lp.num_vars);
        assert!(res.iterations <= cap, "{} iterations, cap {}", res.iterations, cap);
    }
}

#[test]
fn small_lps_match_vertex_enumeration() {
    // One element in two sets of weight 1 each, with disjoint second
    // elements, full coverage required.
    let sys = SetSystem::new(3, vec![vec![0, 1], vec![0, 2]], vec![1.0, 1.0]).unwrap();
    let lp = build_sc_lp(&sys).unwrap();
    let simplex = solve_lp(&lp).unwrap();
    let oracle = lp_vertex_enumeration(&lp).unwrap();
    assert!((simplex.objective_value - oracle).abs() <= 1e-7);
    assert!((simplex.objective_value - 2.0).abs() <= 1e-9);

    // A few random partial-cover LPs small enough to enumerate.
    for seed in 0..40u64 {
        let inst = fuzz_instance(seed, Dist::Uniform { lo: 0.2, hi: 2.0 }, Dist::Unit);
        let sys = &inst.system;
        if sys.n_sets() + sys.n_elements() > 6 {
            continue;
        }
        let lp = build_psc_lp(&inst);
        let simplex = solve_lp(&lp).unwrap();
        let oracle = lp_vertex_enumeration(&lp).expect("feasible instance has a vertex");
        assert!(
            (simplex.objective_value - oracle).abs() <= 1e-6 * (1.0 + oracle.abs()),
            "seed {}: simplex {} oracle {}",
            seed,
            simplex.objective_value,
            oracle
        );
    }
}

#[test]
fn weight_scaling_scales_the_value_and_keeps_the_basis() {
    for seed in 0..100u64 {
        let inst = fuzz_instance(seed, Dist::Uniform { lo: 0.5, hi: 2.0 }, Dist::Unit);
        let scale = 2.0f64.powi((seed % 21) as i32 - 10);
        let scaled_weights: Vec<f64> =
            inst.system.weights().iter().map(|&w| w * scale).collect();
        let scaled_sys = SetSystem::with_profits(
            inst.system.n_elements(),
            inst.system.sets().to_vec(),
            scaled_weights,
            inst.system.profits().to_vec(),
        )
        .unwrap();
        let scaled = PscInstance::new(scaled_sys, inst.requirement).unwrap();

        let base = solve_lp(&build_psc_lp(&inst)).unwrap();
        let res = solve_lp(&build_psc_lp(&scaled)).unwrap();
        assert_eq!(base.basis, res.basis, "seed {}: pivot path diverged", seed);
        assert!(
            (res.objective_value - scale * base.objective_value).abs()
                <= 1e-9 * (1.0 + res.objective_value.abs()),
            "seed {}: {} vs {} * {}",
            seed,
            res.objective_value,
            scale,
            base.objective_value
        );
    }
}

#[test]
fn solving_twice_is_byte_identical() {
    for seed in [0u64, 17, 91] {
        let inst = fuzz_instance(seed, Dist::Uniform { lo: 0.1, hi: 3.0 }, Dist::Unit);
        let lp = build_psc_lp(&inst);
        let a = solve_lp(&lp).unwrap();
        let b = solve_lp(&lp).unwrap();
        assert_eq!(a.primal, b.primal);
        assert_eq!(a.basis, b.basis);
        assert_eq!(a.iterations, b.iterations);
    }
}
