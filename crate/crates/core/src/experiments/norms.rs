use super::config::ExperimentConfig;
use super::report::{measure_epsilon0, ExperimentReport, SeriesTable, StudyOutput};
use super::section;
use super::simulate::schedule;
use crate::diagnostics::{compute_profile, fit_power_law, DecaySeries};
use crate::error::{LabError, Result};
use crate::integrator::{run_simulation, HaltReason};
use crate::spectral::{h11_norm, sobolev_norm};

/// Slow growth of `‖u‖_{H^N}` and of the weighted norm `‖f‖_{H^{1,1}}` of the
/// profile.
pub fn run_norm_growth_study(cfg: &ExperimentConfig) -> Result<StudyOutput> {
    let p = section(&cfg.norms, "norms")?;
    let eq = cfg.equation_spec()?;
    let grid = cfg.grid_spec()?.build()?;
    let u0 = cfg.initial_data()?.build(&grid)?;
    let solver = cfg.solver_spec()?;
    let solver_cfg = solver.solver_config(p.t_end, schedule(solver.snapshots_per_octave, p.t_end))?;

    let file = "norms.csv";
    let mut table = SeriesTable::new(file, &["t", "sobolev", "h11_profile", "h11_boundary_mass"]);
    let mut hn = DecaySeries::new("sobolev");
    let mut h11 = DecaySeries::new("h11_profile");
    let mut warned_from: Option<f64> = None;
    let mut err: Option<LabError> = None;
    let out = run_simulation(&u0, &eq, &solver_cfg, |s| {
        let mut step = || -> Result<()> {
            let a = sobolev_norm(&s.u_hat, p.sobolev_index);
            let f = compute_profile(&s.u_hat, s.t, &eq)?;
            let b = h11_norm(&f.f_hat);
            let mass = b.warning.map_or(0.0, |w| w.boundary_mass_fraction);
            if b.warning.is_some() && warned_from.is_none() {
                warned_from = Some(s.t);
            }
            table.push(vec![s.t, a, b.value, mass]);
            hn.push(s.t, a)?;
            h11.push(s.t, b.value)
        };
        if err.is_none() {
            if let Err(e) = step() {
                err = Some(e);
            }
        }
    })?;
    if let Some(e) = err {
        return Err(e);
    }

    let mut report = ExperimentReport::new(cfg);
    let eps0 = measure_epsilon0(&u0, p.sobolev_index);
    report.epsilon0 = Some(eps0);
    report.halts.insert("main".into(), out.halt);
    if let Some(t) = warned_from {
        report.measure("h11_boundary_warning_from", t);
        report.notes.push(format!(
            "weighted norm flagged from t={t}: boundary mass above threshold"
        ));
    }
    if let HaltReason::Blowup { t } | HaltReason::Nan { t } = out.halt {
        report.measure("halt_time", t);
        report.verdict("completed", false, "halt_time", "run must reach t_end", file);
        return Ok(StudyOutput::new(report, vec![table]));
    }
    for (name, series) in [("sobolev", &hn), ("h11_profile", &h11)] {
        let fit = fit_power_law(series, p.t_min, p.t_max)?;
        let q = format!("{name}_slope");
        report.measure(&q, fit.exponent);
        report.measure(format!("{name}_r_squared"), fit.r_squared);
        report.verdict(
            format!("{name}_slow_growth"),
            fit.exponent <= p.slope_max,
            q,
            format!(
                "log-log slope over t in [{}, {}] <= {}",
                p.t_min, p.t_max, p.slope_max
            ),
            file,
        );
    }
    report.measure("sobolev_index", p.sobolev_index);
    Ok(StudyOutput::new(report, vec![table]))
}
