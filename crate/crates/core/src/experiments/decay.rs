use rayon::prelude::*;

use super::config::{ExperimentConfig, GridSpec};
use super::report::{measure_epsilon0, ExperimentReport, SeriesTable, StudyOutput};
use super::section;
use super::simulate::{conservation_between, schedule, sup};
use crate::diagnostics::{fit_power_law, DecaySeries, PowerLawFit};
use crate::equations::EquationSpec;
use crate::error::{LabError, Result};
use crate::integrator::{max_gradient, run_simulation, HaltReason};
use crate::spectral::{l2_spectral, DEFAULT_SOBOLEV_INDEX};

struct Member {
    label: String,
    table: SeriesTable,
    linf: DecaySeries,
    dx: DecaySeries,
    l2_drift: f64,
    mean_drift: f64,
    halt: HaltReason,
}

fn run_member(cfg: &ExperimentConfig, eq: &EquationSpec, grid: GridSpec, label: &str, t_end: f64) -> Result<Member> {
    let g = grid.build()?;
    let u0 = cfg.initial_data()?.build(&g)?;
    let solver = cfg.solver_spec()?;
    let times = schedule(solver.snapshots_per_octave, t_end);
    let solver_cfg = solver.solver_config(t_end, times)?;
    let file = format!("decay_{label}.csv");
    let mut table = SeriesTable::new(&file, &["t", "linf", "linf_dx", "l2"]);
    let mut linf = DecaySeries::new("linf");
    let mut dx = DecaySeries::new("linf_dx");
    let mut err = None;
    let out = run_simulation(&u0, eq, &solver_cfg, |s| {
        let a = sup(&s.u_hat.to_physical());
        let b = max_gradient(&s.u_hat);
        table.push(vec![s.t, a, b, l2_spectral(&s.u_hat)]);
        if let Err(e) = linf.push(s.t, a).and_then(|_| dx.push(s.t, b)) {
            err.get_or_insert(e);
        }
    })?;
    if let Some(e) = err {
        return Err(e);
    }
    let cons = conservation_between(&u0, &out.state.u_hat, out.halt, out.steps);
    Ok(Member {
        label: label.to_string(),
        table,
        linf,
        dx,
        l2_drift: cons.l2_drift,
        mean_drift: cons.mean_drift,
        halt: out.halt,
    })
}

/// Fit over the window, or `None` when the series vanishes identically.
fn fit(series: &DecaySeries, lo: f64, hi: f64) -> Result<Option<PowerLawFit>> {
    if series.points.iter().all(|&(_, v)| v == 0.0) {
        return Ok(None);
    }
    fit_power_law(series, lo, hi).map(Some)
}

/// Decay of `‖u‖_∞` and `‖∂_x u‖_∞`, with reruns on the stability grids.
pub fn run_decay_study(cfg: &ExperimentConfig) -> Result<StudyOutput> {
    let p = section(&cfg.decay, "decay")?;
    let eq = cfg.equation_spec()?;
    if !eq.has_dispersion() {
        return Err(LabError::config(format!(
            "decay study needs a dispersive equation, got `{}`",
            eq.name
        )));
    }
    let primary = cfg.grid_spec()?;
    let mut grids = vec![("primary".to_string(), primary)];
    for (i, g) in p.stability_grids.iter().enumerate() {
        grids.push((format!("rerun{}_n{}", i + 1, g.n_points), *g));
    }
    let members: Vec<Member> = grids
        .par_iter()
        .map(|(label, g)| run_member(cfg, &eq, *g, label, p.t_end))
        .collect::<Result<_>>()?;

    let mut report = ExperimentReport::new(cfg);
    let u0 = cfg.initial_data()?.build(&primary.build()?)?;
    let eps0 = measure_epsilon0(&u0, DEFAULT_SOBOLEV_INDEX);
    report.epsilon0 = Some(eps0);
    report.measure("epsilon0", eps0.total);
    if let Some(bar) = p.epsilon_bar {
        report.verdict(
            "initial_data_small",
            eps0.total <= bar,
            "epsilon0",
            format!("epsilon0 <= epsilon_bar = {bar}"),
            "decay_primary.csv",
        );
    }

    let mut outcomes: Vec<Vec<bool>> = Vec::new();
    for m in &members {
        let key = |q: &str| format!("{}.{q}", m.label);
        report.halts.insert(m.label.clone(), m.halt);
        let mut passes = Vec::new();
        report.measure(key("l2_relative_drift"), m.l2_drift);
        report.measure(key("mean_relative_drift"), m.mean_drift);
        if let HaltReason::Blowup { t } | HaltReason::Nan { t } = m.halt {
            report.measure(key("halt_time"), t);
            report.verdict(
                format!("{}.completed", m.label),
                false,
                key("halt_time"),
                "run must reach t_end",
                &m.table.file,
            );
            outcomes.push(vec![false]);
            continue;
        }
        let l2_ok = m.l2_drift <= p.l2_drift_max;
        if m.label == "primary" {
            report.verdict(
                "primary.l2_conservation",
                l2_ok,
                key("l2_relative_drift"),
                format!("relative L2 drift <= {:e}", p.l2_drift_max),
                &m.table.file,
            );
        }
        passes.push(l2_ok);
        for (name, series) in [("linf", &m.linf), ("linf_dx", &m.dx)] {
            match fit(series, p.t_min, p.t_max)? {
                None => {
                    report.measure(key(&format!("{name}_exponent")), f64::NEG_INFINITY);
                    report.notes.push(format!(
                        "{}: {name} vanishes identically; no exponent",
                        m.label
                    ));
                }
                Some(f) => {
                    let qe = key(&format!("{name}_exponent"));
                    let qr = key(&format!("{name}_r_squared"));
                    report.measure(&qe, f.exponent);
                    report.measure(&qr, f.r_squared);
                    let in_range = f.exponent >= p.exponent_min && f.exponent <= p.exponent_max;
                    let good_fit = f.r_squared >= p.min_r_squared;
                    passes.push(in_range);
                    passes.push(good_fit);
                    if m.label == "primary" {
                        report.verdict(
                            format!("primary.{name}_exponent"),
                            in_range,
                            qe,
                            format!(
                                "exponent over t in [{}, {}] within [{}, {}]",
                                p.t_min, p.t_max, p.exponent_min, p.exponent_max
                            ),
                            &m.table.file,
                        );
                        report.verdict(
                            format!("primary.{name}_fit_quality"),
                            good_fit,
                            qr,
                            format!("r^2 >= {}", p.min_r_squared),
                            &m.table.file,
                        );
                    }
                }
            }
        }
        outcomes.push(passes);
    }
    for (m, o) in members.iter().zip(&outcomes).skip(1) {
        let agree = *o == outcomes[0];
        let q = format!("{}.linf_exponent", m.label);
        if !report.measured.contains_key(&q) {
            report.measure(&q, f64::NAN);
        }
        report.verdict(
            format!("{}.verdicts_stable", m.label),
            agree,
            q,
            "every primary verdict unchanged on this grid",
            &m.table.file,
        );
    }
    let tables = members.into_iter().map(|m| m.table).collect();
    Ok(StudyOutput::new(report, tables))
}
