use std::f64::consts::PI;

use fkdv::equations::{make_equation, EquationKind, EquationParams, EquationSpec};
use fkdv::experiments::{check_conservation, SolverSpec};
use fkdv::integrator::{run_simulation, HaltReason, SolverConfig, Stepper};
use fkdv::spectral::{make_grid, Grid, SpectralField};
use proptest::prelude::*;

fn mfkdv() -> EquationSpec {
    make_equation(EquationKind::ModifiedFkdv, EquationParams::alpha(-0.5)).unwrap()
}

fn sup_diff(a: &SpectralField, b: &SpectralField) -> f64 {
    let (a, b) = (a.to_physical(), b.to_physical());
    a.iter().zip(&b).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()))
}

fn solve(u0: &SpectralField, eq: &EquationSpec, dt: f64, t_end: f64) -> SpectralField {
    let cfg = SolverConfig {
        cfl_coefficient: 1.0,
        ..SolverConfig::new(dt, t_end, vec![]).unwrap()
    };
    let out = run_simulation(u0, eq, &cfg, |_| {}).unwrap();
    assert_eq!(out.halt, HaltReason::Completed);
    out.state.u_hat
}

fn bump(grid: &Grid, a: f64, w: f64) -> SpectralField {
    let c = 0.5 * grid.box_length();
    SpectralField::from_fn(grid, |x| a * (-((x - c) / w).powi(2)).exp())
}

#[test]
fn fourth_order_in_time() {
    let g = make_grid(256, 16.0 * PI).unwrap();
    let u0 = bump(&g, 1.0, 1.0);
    let eq = mfkdv();
    let sols: Vec<_> = [0.08, 0.04, 0.02].iter().map(|&dt| solve(&u0, &eq, dt, 2.0)).collect();
    let e1 = sup_diff(&sols[0], &sols[1]);
    let e2 = sup_diff(&sols[1], &sols[2]);
    let order = (e1 / e2).log2();
    assert!((3.7..=4.3).contains(&order), "observed order {order} ({e1:e}, {e2:e})");
}

/// Implicit characteristics solution `u = u0(x - u² t)` of `u_t = -u² u_x`.
fn characteristics(x: f64, t: f64, u0: impl Fn(f64) -> f64, du0: impl Fn(f64) -> f64) -> f64 {
    let mut u = u0(x);
    for _ in 0..50 {
        let y = x - u * u * t;
        let r = u - u0(y);
        let dr = 1.0 + du0(y) * 2.0 * u * t;
        let step = r / dr;
        u -= step;
        if step.abs() < 1e-16 {
            break;
        }
    }
    u
}

#[test]
fn modified_burgers_matches_characteristics() {
    // 0.5 sin x breaks at t = 4; compare at half that time.
    let g = make_grid(1024, 2.0 * PI).unwrap();
    let u0 = SpectralField::from_fn(&g, |x| 0.5 * x.sin());
    let eq = make_equation(EquationKind::ModifiedBurgers, EquationParams::default()).unwrap();
    let t = 2.0;
    let u = solve(&u0, &eq, 0.005, t).to_physical();
    let dx = g.dx();
    let err = u.iter().enumerate().fold(0.0f64, |m, (i, &v)| {
        let exact = characteristics(i as f64 * dx, t, |y| 0.5 * y.sin(), |y| 0.5 * y.cos());
        m.max((v - exact).abs())
    });
    assert!(err < 1e-9, "err={err:e}");
}

#[test]
fn backward_steps_undo_forward_steps() {
    let g = make_grid(256, 16.0 * PI).unwrap();
    let u0 = bump(&g, 0.5, 1.5);
    let mut stepper = Stepper::new(&mfkdv(), &g);
    let mut u = u0.coeffs().to_vec();
    for _ in 0..100 {
        assert!(stepper.advance(&mut u, 0.01));
    }
    for _ in 0..100 {
        assert!(stepper.advance(&mut u, -0.01));
    }
    let back = SpectralField::from_coeffs(&g, u).unwrap();
    let mut start = u0.clone();
    start.zero_nyquist();
    assert!(sup_diff(&back, &start) < 1e-10);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn l2_and_mass_conserved(a in 0.01f64..0.3, w in 0.8f64..3.0, alpha in -0.9f64..-0.1) {
        let g = make_grid(256, 32.0 * PI).unwrap();
        let u0 = bump(&g, a, w);
        let eq = make_equation(EquationKind::ModifiedFkdv, EquationParams::alpha(alpha)).unwrap();
        let c = check_conservation(&u0, &eq, &SolverSpec::default(), 5.0).unwrap();
        prop_assert_eq!(c.halt, HaltReason::Completed);
        prop_assert!(c.l2_drift < 1e-9, "l2 drift {}", c.l2_drift);
        prop_assert!(c.mean_drift < 1e-13, "mass drift {}", c.mean_drift);
    }
}
