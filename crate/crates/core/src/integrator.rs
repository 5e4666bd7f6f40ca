//! Integrating-factor RK4 with the exact linear propagator.
//!
//! With `w = e^{-tL} û` the equation becomes `w_t = e^{-tL} N(e^{tL} w)`, which
//! is advanced by classical RK4. Only half-step and full-step exponentials
//! `e^{dt L/2}`, `e^{dt L}` appear, so the linear part is propagated exactly.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::equations::{EquationSpec, NonlinearEvaluator};
use crate::error::{LabError, Result};
use crate::spectral::{exp_of, hermitian_project, Grid, SpectralField};

/// Floor on `max|u|^p` in the CFL estimate.
pub const CFL_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub dt_max: f64,
    pub cfl_coefficient: f64,
    pub t_end: f64,
    /// Sorted times in `[0, t_end]` at which the observer is invoked.
    pub snapshot_times: Vec<f64>,
    /// Halt with [`HaltReason::Blowup`] once `‖u_x‖_∞` exceeds this value.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub blowup_gradient: Option<f64>,
}

impl SolverConfig {
    pub fn new(dt_max: f64, t_end: f64, snapshot_times: Vec<f64>) -> Result<Self> {
        let cfg = SolverConfig {
            dt_max,
            cfl_coefficient: 0.5,
            t_end,
            snapshot_times,
            blowup_gradient: None,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt_max.is_finite() && self.dt_max > 0.0) {
            return Err(LabError::config(format!("dt_max must be positive, got {}", self.dt_max)));
        }
        if !(self.cfl_coefficient > 0.0 && self.cfl_coefficient <= 1.0) {
            return Err(LabError::config(format!(
                "cfl_coefficient must lie in (0, 1], got {}",
                self.cfl_coefficient
            )));
        }
        if !(self.t_end.is_finite() && self.t_end >= 0.0) {
            return Err(LabError::config(format!("t_end must be >= 0, got {}", self.t_end)));
        }
        if self.snapshot_times.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(LabError::config("snapshot_times must be strictly increasing"));
        }
        if self
            .snapshot_times
            .iter()
            .any(|&t| !(t >= 0.0 && t <= self.t_end))
        {
            return Err(LabError::config("snapshot_times must lie in [0, t_end]"));
        }
        Ok(())
    }
}

/// Geometric schedule `t_j = t_start · 2^{j/per_octave}` up to `t_end`.
///
/// Powers of two are hit exactly whenever `t_start` is one.
pub fn geometric_snapshots(t_start: f64, per_octave: u32, t_end: f64) -> Vec<f64> {
    let mut out = Vec::new();
    for j in 0.. {
        let t = t_start * (j as f64 / per_octave as f64).exp2();
        if t > t_end * (1.0 + 1e-12) {
            break;
        }
        out.push(t.min(t_end));
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverState {
    pub t: f64,
    pub u_hat: SpectralField,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum HaltReason {
    Completed,
    /// Gradient threshold crossed at time `t`.
    Blowup { t: f64 },
    /// Non-finite values appeared in the step ending at time `t`.
    Nan { t: f64 },
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    /// Last finite state.
    pub state: SolverState,
    pub halt: HaltReason,
    pub steps: usize,
}

/// `min(dt_max, cfl · dx / max(floor, max|u|^p))`.
pub fn cfl_dt(state: &SolverState, eq: &EquationSpec, config: &SolverConfig) -> f64 {
    let umax = state
        .u_hat
        .to_physical()
        .iter()
        .fold(0.0f64, |m, v| m.max(v.abs()));
    cfl_dt_from_max(umax, state.u_hat.grid().dx(), eq.degree, config)
}

pub(crate) fn cfl_dt_from_max(umax: f64, dx: f64, degree: u32, config: &SolverConfig) -> f64 {
    let speed = umax.powi(degree as i32).max(CFL_FLOOR);
    config.dt_max.min(config.cfl_coefficient * dx / speed)
}

/// Outcome of a single step.
#[derive(Debug, Clone)]
pub enum Step {
    Advanced(SolverState),
    NonFinite { t: f64 },
}

/// Reusable stepping workspace for one equation on one grid.
pub struct Stepper {
    grid: Grid,
    symbol: Vec<Complex64>,
    nonlinear: NonlinearEvaluator,
    linear_only: bool,
    cached_dt: f64,
    half: Vec<Complex64>,
    full: Vec<Complex64>,
    k1: Vec<Complex64>,
    k2: Vec<Complex64>,
    k3: Vec<Complex64>,
    k4: Vec<Complex64>,
    tmp: Vec<Complex64>,
    /// Largest Hermitian defect seen before re-symmetrization.
    pub max_hermitian_defect: f64,
}

impl Stepper {
    pub fn new(eq: &EquationSpec, grid: &Grid) -> Self {
        let n = grid.n_points();
        let mut symbol = eq.linear_symbol.sample(grid);
        symbol[grid.nyquist_index()] = Complex64::new(0.0, 0.0);
        let zeros = vec![Complex64::new(0.0, 0.0); n];
        Stepper {
            grid: grid.clone(),
            symbol,
            nonlinear: NonlinearEvaluator::new(eq, grid),
            linear_only: eq.coefficient == 0.0,
            cached_dt: f64::NAN,
            half: zeros.clone(),
            full: zeros.clone(),
            k1: zeros.clone(),
            k2: zeros.clone(),
            k3: zeros.clone(),
            k4: zeros.clone(),
            tmp: zeros,
            max_hermitian_defect: 0.0,
        }
    }

    fn prepare(&mut self, dt: f64) {
        if dt.to_bits() == self.cached_dt.to_bits() {
            return;
        }
        for ((h, f), &m) in self.half.iter_mut().zip(self.full.iter_mut()).zip(&self.symbol) {
            *h = exp_of(0.5 * dt, m);
            *f = exp_of(dt, m);
        }
        self.cached_dt = dt;
    }

    /// Advances `u` in place by `dt`; returns false when the result is not finite.
    pub fn advance(&mut self, u: &mut [Complex64], dt: f64) -> bool {
        let nyq = self.grid.nyquist_index();
        self.prepare(dt);
        if self.linear_only {
            for (c, e) in u.iter_mut().zip(&self.full) {
                *c *= e;
            }
        } else {
            let h = 0.5 * dt;
            self.nonlinear.eval(u, &mut self.k1);
            for i in 0..u.len() {
                self.tmp[i] = self.half[i] * (u[i] + h * self.k1[i]);
            }
            self.nonlinear.eval(&self.tmp, &mut self.k2);
            for i in 0..u.len() {
                self.tmp[i] = self.half[i] * u[i] + h * self.k2[i];
            }
            self.nonlinear.eval(&self.tmp, &mut self.k3);
            for i in 0..u.len() {
                self.tmp[i] = self.full[i] * u[i] + dt * self.half[i] * self.k3[i];
            }
            self.nonlinear.eval(&self.tmp, &mut self.k4);
            let s = dt / 6.0;
            for i in 0..u.len() {
                u[i] = self.full[i] * u[i]
                    + s * (self.full[i] * self.k1[i]
                        + 2.0 * self.half[i] * (self.k2[i] + self.k3[i])
                        + self.k4[i]);
            }
        }
        u[nyq] = Complex64::new(0.0, 0.0);
        let defect = hermitian_defect(u);
        self.max_hermitian_defect = self.max_hermitian_defect.max(defect);
        hermitian_project(u);
        u.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }
}

fn hermitian_defect(u: &[Complex64]) -> f64 {
    let n = u.len();
    (1..n / 2)
        .map(|i| (u[i] - u[n - i].conj()).norm())
        .fold(u[0].im.abs(), f64::max)
}

/// One integrating-factor RK4 step. `dt` may be negative (backward in time).
pub fn step_ifrk4(state: &SolverState, dt: f64, eq: &EquationSpec) -> Result<Step> {
    if !(dt.is_finite() && dt != 0.0) {
        return Err(LabError::config(format!("dt must be finite and nonzero, got {dt}")));
    }
    let mut stepper = Stepper::new(eq, state.u_hat.grid());
    let mut u = state.u_hat.coeffs().to_vec();
    let t = state.t + dt;
    if !stepper.advance(&mut u, dt) {
        return Ok(Step::NonFinite { t });
    }
    Ok(Step::Advanced(SolverState {
        t,
        u_hat: SpectralField::from_coeffs(state.u_hat.grid(), u)?,
    }))
}

/// Largest `|u_x|` over the grid samples.
pub fn max_gradient(u_hat: &SpectralField) -> f64 {
    let grid = u_hat.grid();
    let mut d: Vec<Complex64> = u_hat
        .coeffs()
        .iter()
        .zip(grid.xi())
        .map(|(c, &xi)| c * Complex64::new(0.0, xi))
        .collect();
    d[grid.nyquist_index()] = Complex64::new(0.0, 0.0);
    SpectralField::from_coeffs(grid, d)
        .expect("grid-sized")
        .to_physical()
        .iter()
        .fold(0.0, |m, v| m.max(v.abs()))
}

/// Runs from `u0` at `t = 0` to `config.t_end`, landing exactly on every
/// snapshot time and calling `observer` there.
pub fn run_simulation(
    u0: &SpectralField,
    eq: &EquationSpec,
    config: &SolverConfig,
    mut observer: impl FnMut(&SolverState),
) -> Result<RunOutcome> {
    config.validate()?;
    let grid = u0.grid().clone();
    let mut stepper = Stepper::new(eq, &grid);
    let mut u = u0.coeffs().to_vec();
    u[grid.nyquist_index()] = Complex64::new(0.0, 0.0);
    hermitian_project(&mut u);
    let mut t = 0.0;
    let mut steps = 0;
    let mut next_snap = 0;
    let state_of = |t: f64, u: &[Complex64]| SolverState {
        t,
        u_hat: SpectralField::from_coeffs(&grid, u.to_vec()).expect("grid-sized"),
    };

    let mut emit = |t: f64, u: &[Complex64], next_snap: &mut usize| {
        while *next_snap < config.snapshot_times.len() && config.snapshot_times[*next_snap] <= t {
            observer(&state_of(t, u));
            *next_snap += 1;
        }
    };
    emit(t, &u, &mut next_snap);

    let mut physical = SpectralField::from_coeffs(&grid, u.clone())?;
    let halt = loop {
        if t >= config.t_end {
            break HaltReason::Completed;
        }
        physical.coeffs_mut().copy_from_slice(&u);
        let umax = physical
            .to_physical()
            .iter()
            .fold(0.0f64, |m, v| m.max(v.abs()));
        let mut dt = cfl_dt_from_max(umax, grid.dx(), eq.degree, config);
        let mut target = config.t_end;
        if next_snap < config.snapshot_times.len() {
            target = target.min(config.snapshot_times[next_snap]);
        }
        let landing = t + dt >= target * (1.0 - 1e-14) - 1e-300;
        if landing {
            dt = target - t;
        }
        let mut trial = u.clone();
        let ok = stepper.advance(&mut trial, dt);
        let t_new = if landing { target } else { t + dt };
        if !ok {
            break HaltReason::Nan { t: t_new };
        }
        u = trial;
        t = t_new;
        steps += 1;
        emit(t, &u, &mut next_snap);
        if let Some(limit) = config.blowup_gradient {
            physical.coeffs_mut().copy_from_slice(&u);
            if max_gradient(&physical) > limit {
                break HaltReason::Blowup { t };
            }
        }
    };
    Ok(RunOutcome {
        state: SolverState {
            t,
            u_hat: SpectralField::from_coeffs(&grid, u)?,
        },
        halt,
        steps,
    })
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::equations::{make_equation, EquationKind, EquationParams};
    use crate::spectral::{apply_exponential, l2_spectral, make_grid};

    fn mfkdv() -> EquationSpec {
        make_equation(EquationKind::ModifiedFkdv, EquationParams::alpha(-0.5)).unwrap()
    }

    fn config(dt_max: f64, t_end: f64) -> SolverConfig {
        SolverConfig::new(dt_max, t_end, vec![]).unwrap()
    }

    #[test]
    fn cfl_examples() {
        let g = make_grid(64, 6.4).unwrap();
        let zero = SolverState {
            t: 0.0,
            u_hat: SpectralField::zeros(&g),
        };
        let cfg = config(1.0, 1.0);
        assert_eq!(cfl_dt(&zero, &mfkdv(), &cfg), 1.0);
        assert!((cfl_dt_from_max(2.0, 0.1, 2, &cfg) - 0.0125).abs() < 1e-15);
        let cfg = config(0.01, 1.0);
        assert_eq!(cfl_dt_from_max(1.0, 0.1, 1, &cfg), 0.01);
    }

    #[test]
    fn linear_single_mode_phase() {
        let g = make_grid(16, 2.0 * PI).unwrap();
        let mut u = SpectralField::zeros(&g);
        u.set_coeff(1, Complex64::new(1.0, 0.0));
        u.set_coeff(-1, Complex64::new(1.0, 0.0));
        let eq = make_equation(
            EquationKind::ModifiedFkdv,
            EquationParams::alpha(-0.5).with_nonlinear_coefficient(0.0),
        )
        .unwrap();
        let s = SolverState { t: 0.0, u_hat: u };
        let Step::Advanced(out) = step_ifrk4(&s, 0.3, &eq).unwrap() else {
            panic!("non-finite");
        };
        let want = Complex64::from_polar(1.0, 0.3);
        assert!((out.u_hat.coeff(1) - want).norm() < 1e-14);
        assert!((out.u_hat.coeff(1).norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn zero_end_time_calls_observer_once() {
        let g = make_grid(16, 2.0 * PI).unwrap();
        let u = SpectralField::from_fn(&g, f64::sin);
        let cfg = SolverConfig::new(0.1, 0.0, vec![0.0]).unwrap();
        let mut calls = 0;
        let out = run_simulation(&u, &mfkdv(), &cfg, |_| calls += 1).unwrap();
        assert_eq!(calls, 1);
        assert_eq!(out.steps, 0);
        assert_eq!(out.halt, HaltReason::Completed);
    }

    #[test]
    fn lands_on_snapshots() {
        let g = make_grid(64, 20.0).unwrap();
        let u = SpectralField::from_fn(&g, |x| 0.1 * (-(x - 10.0).powi(2)).exp());
        let snaps = geometric_snapshots(1.0, 8, 4.0);
        assert_eq!(snaps.len(), 17);
        assert_eq!(snaps[8], 2.0);
        assert_eq!(snaps[16], 4.0);
        let cfg = SolverConfig::new(0.07, 4.0, snaps.clone()).unwrap();
        let mut seen = Vec::new();
        run_simulation(&u, &mfkdv(), &cfg, |s| seen.push(s.t)).unwrap();
        assert_eq!(seen, snaps);
    }

    #[test]
    fn linear_run_is_exact_composition() {
        let g = make_grid(128, 40.0).unwrap();
        let u = SpectralField::from_fn(&g, |x| (-(x - 20.0).powi(2)).exp());
        let eq = mfkdv().linearized().unwrap();
        let cfg = config(0.037, 10.0);
        let out = run_simulation(&u, &eq, &cfg, |_| {}).unwrap();
        let mut u0 = u.clone();
        u0.zero_nyquist();
        let exact = apply_exponential(&u0, &eq.linear_symbol, 10.0);
        let a = out.state.u_hat.to_physical();
        let b = exact.to_physical();
        let err = a.iter().zip(&b).fold(0.0f64, |m, (x, y)| m.max((x - y).abs()));
        assert!(err < 1e-12, "err={err}");
        assert!((l2_spectral(&out.state.u_hat) - l2_spectral(&u0)).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_schedule() {
        assert!(SolverConfig::new(0.1, 1.0, vec![0.5, 0.5]).is_err());
        assert!(SolverConfig::new(0.1, 1.0, vec![2.0]).is_err());
        assert!(SolverConfig::new(0.0, 1.0, vec![]).is_err());
    }
}
