use std::f64::consts::PI;

use cyma_core::fixtures::{self, random_band_limited};
use cyma_core::frames::{sample_admissible, GroupCase};
use cyma_core::grid::{integral_mean, normalize_F, Spectral, TorusField, TorusGrid};
use cyma_core::macoeffs::{coefficients, MACoefficients};
use cyma_core::solver::{
    apply_jacobian, continuity_solve, manufactured_forcing, operator_fields, residual, ExactJacobian,
    SolverConfig,
};
use proptest::prelude::*;

fn examples() -> Vec<(&'static str, MACoefficients)> {
    vec![
        ("nil", coefficients(&fixtures::nil_example_frame()).unwrap()),
        ("sol", coefficients(&fixtures::sol_example_frame()).unwrap()),
    ]
}

fn example_forcing(grid: TorusGrid) -> TorusField {
    normalize_F(&TorusField::from_fn(grid, |x, y| {
        0.3 * (2.0 * PI * x).cos() + 0.2 * (2.0 * PI * y).sin()
    }))
}

fn cfg(n: usize) -> SolverConfig {
    SolverConfig::for_grid(TorusGrid::square(n).unwrap())
}

#[test]
fn manufactured_solution_is_recovered_spectrally() {
    let g = TorusGrid::square(32).unwrap();
    let u_star = fixtures::u_star_admissible(g);
    for (name, c) in examples() {
        let f = manufactured_forcing(&u_star, &c, &Spectral).unwrap();
        let (u, report) = continuity_solve(&c, &f, &cfg(32)).unwrap();
        let err = (&u - &u_star).sup_abs();
        assert!(err <= 1e-9, "{name}: error {err}");
        assert!(report.converged && report.residual_sup <= 1e-10, "{name}");
    }
}

#[test]
fn example_forcing_converges_with_positive_operators() {
    let g = TorusGrid::square(64).unwrap();
    let f = example_forcing(g);
    for (name, c) in examples() {
        let (u, report) = continuity_solve(&c, &f, &cfg(64)).unwrap();
        assert!(report.residual_sup <= 1e-10, "{name}: {}", report.residual_sup);
        assert!(report.min_a11 > 0.0 && report.min_a22 > 0.0, "{name}");
        assert!(report.min_c11_plus_du > 0.0, "{name}");
        assert!(integral_mean(&u).abs() < 1e-14);
        let t = residual(&u, &c, &f, 1.0, &Spectral).unwrap();
        assert!(t.sup_abs() <= 1e-10, "{name}: raw residual {}", t.sup_abs());
    }
}

#[test]
fn solution_does_not_depend_on_the_tau_schedule() {
    let g = TorusGrid::square(32).unwrap();
    let f = example_forcing(g);
    for (name, c) in examples() {
        let mut a = cfg(32);
        a.tau_steps = 4;
        let mut b = cfg(32);
        b.tau_steps = 16;
        let mut one = cfg(32);
        one.tau_steps = 1;
        let (ua, _) = continuity_solve(&c, &f, &a).unwrap();
        let (ub, _) = continuity_solve(&c, &f, &b).unwrap();
        let (u1, _) = continuity_solve(&c, &f, &one).unwrap();
        assert!((&ua - &ub).sup_abs() <= 1e-8, "{name}");
        assert!((&ua - &u1).sup_abs() <= 1e-8, "{name}");
    }
}

#[test]
fn quasi_newton_operator_reaches_the_same_solution() {
    let g = TorusGrid::square(32).unwrap();
    let f = example_forcing(g);
    for (name, c) in examples() {
        let (exact, re) = continuity_solve(&c, &f, &cfg(32)).unwrap();
        let mut pc = cfg(32);
        pc.jacobian_mode = "shifted".into();
        pc.max_newton = 80;
        let (quasi, rq) = continuity_solve(&c, &f, &pc).unwrap();
        assert!((&exact - &quasi).sup_abs() <= 1e-8, "{name}");
        assert_eq!(rq.jacobian_mode, "shifted");
        assert!(rq.total_newton_iterations > re.total_newton_iterations, "{name}");
    }
}

#[test]
fn fd2_solution_converges_at_second_order() {
    let errs: Vec<f64> = [32usize, 64]
        .iter()
        .map(|&n| {
            let g = TorusGrid::square(n).unwrap();
            let c = coefficients(&fixtures::nil_example_frame()).unwrap();
            let u_star = fixtures::u_star_admissible(g);
            let f = manufactured_forcing(&u_star, &c, &Spectral).unwrap();
            let mut fd = cfg(n);
            fd.backend = "fd2".into();
            let (u, _) = continuity_solve(&c, &f, &fd).unwrap();
            (&u - &u_star).sup_abs()
        })
        .collect();
    let ratio = errs[0] / errs[1];
    assert!((3.5..=4.5).contains(&ratio), "errors {errs:?}");
}

#[test]
fn solvability_identity_on_sampled_coefficients() {
    let g = TorusGrid::square(32).unwrap();
    for seed in 0..20 {
        let case = if seed % 2 == 0 { GroupCase::NilYT } else { GroupCase::SolR };
        let c = coefficients(&sample_admissible(case, seed).unwrap()).unwrap();
        let u = random_band_limited(g, seed, 8, 4, 0.05);
        let det = operator_fields(&u, &c, &Spectral).determinant();
        let scale = 1.0 + c.e1.abs() + c.e2.abs();
        assert!((integral_mean(&det) - c.e1 - c.e2).abs() <= 1e-9 * scale, "seed {seed}");
    }
}

#[test]
fn homotopy_failure_reports_last_good_tau() {
    // a residual target below round-off can never be met: every stage fails,
    // the step halves down to the floor and the continuation gives up cleanly
    let g = TorusGrid::square(16).unwrap();
    let c = coefficients(&fixtures::nil_example_frame()).unwrap();
    let f = normalize_F(&TorusField::from_fn(g, |x, y| 2.0 * (2.0 * PI * (x + y)).cos()));
    let mut hopeless = cfg(16);
    hopeless.newton_tol = 1e-300;
    hopeless.max_newton = 2;
    match continuity_solve(&c, &f, &hopeless) {
        Err(cyma_core::Error::HomotopyFailed { last_tau, iterate }) => {
            assert_eq!(last_tau, 0.0);
            assert_eq!(iterate.grid(), g);
        }
        other => panic!("expected HomotopyFailed, got {:?}", other.map(|r| r.1.residual_sup)),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn exact_jacobian_matches_central_differences(seed in 0u64..10_000, case_nil in any::<bool>(), tau in 0.0f64..1.0) {
        let g = TorusGrid::square(24).unwrap();
        let case = if case_nil { GroupCase::NilYT } else { GroupCase::SolR };
        let c = coefficients(&sample_admissible(case, seed).unwrap()).unwrap();
        let v = random_band_limited(g, seed ^ 0xa5, 6, 3, 0.02);
        let w = random_band_limited(g, seed ^ 0x5a, 6, 3, 1.0);
        let f = normalize_F(&random_band_limited(g, seed ^ 0x77, 4, 2, 0.3));
        let h = 1e-5;
        let tp = residual(&v.axpy(h, &w), &c, &f, tau, &Spectral).unwrap();
        let tm = residual(&v.axpy(-h, &w), &c, &f, tau, &Spectral).unwrap();
        let fd = (&tp - &tm).scale(0.5 / h);
        let lw = apply_jacobian(&v, &w, &c, &Spectral, &ExactJacobian);
        let rel = (&fd - &lw).sup_abs() / lw.sup_abs().max(1e-300);
        prop_assert!(rel <= 1e-6, "relative discrepancy {}", rel);
    }

    #[test]
    fn residual_integrates_to_zero(seed in 0u64..10_000, tau in 0.0f64..=1.0) {
        let g = TorusGrid::square(32).unwrap();
        let case = if seed % 2 == 0 { GroupCase::NilYT } else { GroupCase::SolR };
        let c = coefficients(&sample_admissible(case, seed).unwrap()).unwrap();
        let u = random_band_limited(g, seed, 6, 5, 0.05);
        let f = normalize_F(&random_band_limited(g, seed + 1, 5, 3, 0.5));
        let t = residual(&u, &c, &f, tau, &Spectral).unwrap();
        let scale = 1.0 + c.e1.abs() + c.e2.abs() + operator_fields(&u, &c, &Spectral).determinant().sup_abs();
        prop_assert!(integral_mean(&t).abs() <= 1e-10 * scale);
    }
}
