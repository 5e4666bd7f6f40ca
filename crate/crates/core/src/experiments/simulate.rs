use serde::{Deserialize, Serialize};

use super::config::{ExperimentConfig, SolverSpec};
use super::report::{measure_epsilon0, ExperimentReport, SeriesTable, StudyOutput};
use super::section;
use crate::equations::EquationSpec;
use crate::error::Result;
use crate::integrator::{geometric_snapshots, max_gradient, run_simulation, HaltReason};
use crate::spectral::{l2_spectral, norm, NormKind, SpectralField, DEFAULT_SOBOLEV_INDEX};

/// `t = 0`, the geometric snapshots from `t = 1`, and `t_end`.
pub(crate) fn schedule(per_octave: u32, t_end: f64) -> Vec<f64> {
    let mut times = vec![0.0];
    times.extend(geometric_snapshots(1.0, per_octave, t_end).into_iter().filter(|&t| t > 0.0));
    if times.last() != Some(&t_end) {
        times.push(t_end);
    }
    times.dedup();
    times
}

/// `0, h, 2h, …` up to `t_end`, with `t_end` itself included.
pub(crate) fn uniform_schedule(interval: f64, t_end: f64) -> Vec<f64> {
    let steps = (t_end / interval).floor() as usize;
    let mut times: Vec<f64> = (0..=steps).map(|j| j as f64 * interval).collect();
    if t_end - times.last().copied().unwrap_or(0.0) > 1e-9 * t_end {
        times.push(t_end);
    } else if let Some(last) = times.last_mut() {
        *last = t_end;
    }
    times
}

pub(crate) fn sup(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

/// Relative drift of the conserved quantities over one run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConservationResult {
    pub l2_drift: f64,
    /// Relative drift of `∫u dx`; absolute when the initial mean vanishes.
    pub mean_drift: f64,
    pub halt: HaltReason,
    pub steps: usize,
}

/// Runs `eq` from `u0` to `t_end` and measures the conservation drift.
pub fn check_conservation(
    u0: &SpectralField,
    eq: &EquationSpec,
    solver: &SolverSpec,
    t_end: f64,
) -> Result<ConservationResult> {
    let cfg = solver.solver_config(t_end, vec![])?;
    let out = run_simulation(u0, eq, &cfg, |_| {})?;
    Ok(conservation_between(u0, &out.state.u_hat, out.halt, out.steps))
}

pub(crate) fn conservation_between(
    u0: &SpectralField,
    u1: &SpectralField,
    halt: HaltReason,
    steps: usize,
) -> ConservationResult {
    let mut start = u0.clone();
    start.zero_nyquist();
    let a = l2_spectral(&start);
    let b = l2_spectral(u1);
    let m0 = start.coeff(0).re;
    let m1 = u1.coeff(0).re;
    ConservationResult {
        l2_drift: if a > 0.0 { (b - a).abs() / a } else { b },
        mean_drift: if m0 != 0.0 {
            (m1 - m0).abs() / m0.abs()
        } else {
            (m1 - m0).abs()
        },
        halt,
        steps,
    }
}

/// Plain run: norms at uniformly spaced snapshots and the final state.
pub fn run_simulate(cfg: &ExperimentConfig) -> Result<StudyOutput> {
    let params = section(&cfg.simulate, "simulate")?;
    let eq = cfg.equation_spec()?;
    let grid = cfg.grid_spec()?.build()?;
    let u0 = cfg.initial_data()?.build(&grid)?;
    let solver = cfg.solver_spec()?;
    let times = uniform_schedule(params.snapshot_interval, params.t_end);
    let solver_cfg = solver.solver_config(params.t_end, times)?;

    let mut norms = SeriesTable::new(
        "simulate_norms.csv",
        &["t", "l2", "linf", "linf_dx", "mean_coefficient", "sobolev8"],
    );
    let out = run_simulation(&u0, &eq, &solver_cfg, |s| {
        norms.push(vec![
            s.t,
            l2_spectral(&s.u_hat),
            norm(&s.u_hat, NormKind::Linf),
            max_gradient(&s.u_hat),
            s.u_hat.coeff(0).re,
            norm(&s.u_hat, NormKind::Sobolev(DEFAULT_SOBOLEV_INDEX)),
        ]);
    })?;

    let mut state = SeriesTable::new("simulate_final_state.csv", &["t", "x", "u"]);
    for (x, u) in grid.x().into_iter().zip(out.state.u_hat.to_physical()) {
        state.push(vec![out.state.t, x, u]);
    }

    let mut report = ExperimentReport::new(cfg);
    report.epsilon0 = Some(measure_epsilon0(&u0, DEFAULT_SOBOLEV_INDEX));
    report.halts.insert("main".into(), out.halt);
    let cons = conservation_between(&u0, &out.state.u_hat, out.halt, out.steps);
    report.measure("final_time", out.state.t);
    report.measure("steps", out.steps as f64);
    report.measure("l2_relative_drift", cons.l2_drift);
    report.measure("mean_relative_drift", cons.mean_drift);
    report.verdict(
        "run_completed",
        out.halt == HaltReason::Completed,
        "final_time",
        format!("halt reason must be completed at t_end={}", params.t_end),
        &norms.file,
    );
    Ok(StudyOutput::new(report, vec![norms, state]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schedules() {
        let s = schedule(2, 4.0);
        assert_eq!(s[0], 0.0);
        assert_eq!(s[1], 1.0);
        assert_eq!(*s.last().unwrap(), 4.0);
        assert_eq!(s.len(), 6);
        let s = schedule(1, 3.0);
        assert_eq!(s, vec![0.0, 1.0, 2.0, 3.0]);
        let u = uniform_schedule(0.25, 1.0);
        assert_eq!(u, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        let u = uniform_schedule(0.3, 1.0);
        assert_eq!(u.len(), 5);
        assert_eq!(*u.last().unwrap(), 1.0);
    }
}
