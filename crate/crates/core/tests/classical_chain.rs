//! Classical chain semantics checked across modules: the transition
//! matrices built from shared acceptance tables against reversibility,
//! stationarity, empirical sampling, and the mixing-time definition.

mod common;

use common::family;

use qmh::classical::{
    boltzmann, detailed_balance_residual, evolve, mixing_time, mh_run, stationary,
    success_prob_exact_curve, transition_from_delta, transition_matrix, tv_distance, HitMode,
    InitMode, Schedule,
};
use qmh::nqueens;
use qmh::problem::build_delta_table;

#[test]
fn chains_are_reversible_for_the_boltzmann_weights() {
    let mut checked = 0;
    for case in family() {
        for beta in [0.0, case.beta, 3.0] {
            let residual = detailed_balance_residual(&case.spec, beta).unwrap();
            assert!(
                residual < 1e-9,
                "{} at beta {beta}: residual {residual:.3e}",
                case.name
            );
            checked += 1;
        }
    }
    for descriptor in ["nqueens:4", "nqueens:5", "nqueens:4:fixed=1,2"] {
        let spec = nqueens::from_descriptor(descriptor).unwrap();
        let residual = detailed_balance_residual(&spec, 0.9).unwrap();
        assert!(residual < 1e-9, "{descriptor}: residual {residual:.3e}");
        checked += 1;
    }
    assert!(checked > 20);
}

#[test]
fn transition_rows_from_shared_tables_are_stochastic() {
    for case in family() {
        let table = build_delta_table(&case.spec, case.beta).unwrap();
        let matrix = transition_from_delta(&case.spec, &table).unwrap();
        for i in 0..case.spec.n_states() {
            let sum = matrix.row_sum(i);
            assert!(
                (sum - 1.0).abs() < 1e-12,
                "{} row {i}: sum {sum}",
                case.name
            );
        }
        // Same numbers whether built from the table or from scratch.
        let direct = transition_matrix(&case.spec, case.beta).unwrap();
        for i in 0..case.spec.n_states() {
            for j in 0..case.spec.n_states() {
                assert!((matrix.entry(i, j) - direct.entry(i, j)).abs() < 1e-15);
            }
        }
    }
}

#[test]
fn power_iteration_agrees_with_boltzmann_on_ergodic_chains() {
    // Connected chains only: swap moves preserve the coordinate
    // multiset, unlisted labels cut circular chains into arcs, and a
    // pinned coordinate splits a grid, so those cases are reducible.
    let mut specs = Vec::new();
    for name in ["two-state-circular", "six-of-eight-noncircular", "grid-noncircular"] {
        let case = family().into_iter().find(|c| c.name == name).unwrap();
        specs.push((name, case.spec, case.beta));
    }
    let mut seed = 3u64;
    let mut bump = move || {
        seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1);
        ((seed >> 33) % 64) as f64 / 16.0
    };
    let entries: Vec<(u64, f64)> = (0..128).map(|v| (v, bump())).collect();
    let ring = qmh::problem::ProblemSpec::new(
        entries,
        vec![7],
        qmh::problem::MoveModel::sequential_circular(1, 128),
    )
    .unwrap();

    for (name, spec, beta) in specs {
        let matrix = transition_matrix(&spec, beta).unwrap();
        let pi = stationary(&matrix).unwrap();
        let reference = boltzmann(&spec, beta).unwrap();
        let tv = tv_distance(&pi, &reference).unwrap();
        assert!(tv < 1e-9, "{name}: TV(power iteration, boltzmann) = {tv:.3e}");
    }

    // A 128-site ring mixes slowly (spectral gap ~ 1e-3), so the
    // iterate-difference stop of 1e-12 leaves a true distance near
    // tol / gap; the bound here reflects that contract.
    let matrix = transition_matrix(&ring, 0.7).unwrap();
    let pi = stationary(&matrix).unwrap();
    let reference = boltzmann(&ring, 0.7).unwrap();
    let tv = tv_distance(&pi, &reference).unwrap();
    assert!(tv < 1e-8, "full ring: TV(power iteration, boltzmann) = {tv:.3e}");
}

#[test]
fn sampled_occupancy_tracks_the_stationary_distribution() {
    let case = family()
        .into_iter()
        .find(|c| c.name == "six-of-eight-noncircular")
        .unwrap();
    let beta = 0.8;
    let matrix = transition_matrix(&case.spec, beta).unwrap();
    let pi = stationary(&matrix).unwrap();

    let steps = 200_000u64;
    let schedule = Schedule::constant(beta, steps).unwrap();
    let path = mh_run(&case.spec, &schedule, &InitMode::Fixed(0), 71).unwrap();
    let mut counts = vec![0u64; case.spec.n_states()];
    for &label in path.iter().skip(50_000) {
        counts[case.spec.index_of(label).unwrap()] += 1;
    }
    let total: u64 = counts.iter().sum();
    let empirical: Vec<f64> = counts.iter().map(|&c| c as f64 / total as f64).collect();
    let tv = tv_distance(&empirical, &pi).unwrap();
    assert!(tv < 0.02, "occupancy TV {tv:.4} after {steps} steps");
}

#[test]
fn mixing_time_matches_its_definition() {
    let spec = nqueens::from_descriptor("nqueens:4").unwrap();
    let matrix = transition_matrix(&spec, 0.5).unwrap();
    let pi = stationary(&matrix).unwrap();
    let n = spec.n_states();

    let worst_tv_at = |t: u64| -> f64 {
        let mut worst = 0.0f64;
        for i in 0..n {
            let mut dist = vec![0.0; n];
            dist[i] = 1.0;
            let dist = evolve(&matrix, &dist, t).unwrap();
            worst = worst.max(tv_distance(&dist, &pi).unwrap());
        }
        worst
    };

    let mut previous = 0;
    for eps in [0.3, 0.1, 0.01] {
        let t = mixing_time(&matrix, eps).unwrap();
        assert!(t >= previous, "mixing time must grow as eps shrinks");
        previous = t;
        assert!(worst_tv_at(t) < eps, "definition violated at t = {t}");
        if t > 0 {
            assert!(worst_tv_at(t - 1) >= eps, "t = {t} is not minimal");
        }
    }
}

#[test]
fn ever_hit_curves_dominate_at_step_curves() {
    let spec = nqueens::from_descriptor("nqueens:4").unwrap();
    let schedule = Schedule::linear(0.2, 2.0, 30).unwrap();
    let at_step =
        success_prob_exact_curve(&spec, &schedule, &InitMode::Uniform, 30, HitMode::AtStep)
            .unwrap();
    let ever =
        success_prob_exact_curve(&spec, &schedule, &InitMode::Uniform, 30, HitMode::EverHit)
            .unwrap();
    assert_eq!(at_step.len(), 31);
    for t in 0..at_step.len() {
        assert!(ever[t] >= at_step[t] - 1e-12, "t = {t}");
        if t > 0 {
            assert!(ever[t] >= ever[t - 1] - 1e-12, "ever-hit must be monotone");
        }
    }
}
