use super::config::ExperimentConfig;
use super::report::{measure_epsilon0, ExperimentReport, SeriesTable, StudyOutput};
use super::section;
use super::simulate::schedule;
use crate::diagnostics::{
    compute_profile, corrected_profile, difference_rate, extract_scattering_limit, PhaseAccumulator,
    PhasePrefactor, ScatteringSeries,
};
use crate::error::{LabError, Result};
use crate::integrator::{run_simulation, HaltReason};
use crate::spectral::{SpectralField, DEFAULT_SOBOLEV_INDEX};

fn is_dyadic(t: f64) -> bool {
    t >= 2.0 && t == 2f64.powi(t.log2().round() as i32)
}

/// Phase increment from `a` to `b`, in `(-π, π]`.
fn phase_increment(a: num_complex::Complex64, b: num_complex::Complex64) -> f64 {
    (b * a.conj()).arg()
}

/// Tracks the corrected and raw profiles at dyadic checkpoints, with the
/// phase correction accumulated along the run.
pub fn run_scattering_study(cfg: &ExperimentConfig) -> Result<StudyOutput> {
    let p = section(&cfg.scattering, "scattering")?;
    let eq = cfg.equation_spec()?;
    let alpha = eq
        .alpha
        .ok_or_else(|| LabError::config("scattering study needs alpha"))?;
    let grid = cfg.grid_spec()?.build()?;
    let u0 = cfg.initial_data()?.build(&grid)?;
    let solver = cfg.solver_spec()?;
    let times = schedule(solver.snapshots_per_octave, p.t_end);
    let solver_cfg = solver.solver_config(p.t_end, times)?;

    let mut primary = PhaseAccumulator::for_equation(&eq, grid.xi(), p.prefactor)?;
    let alternative = match p.prefactor {
        PhasePrefactor::Resonant => PhasePrefactor::Stated,
        PhasePrefactor::Stated => PhasePrefactor::Resonant,
    };
    let mut other = PhaseAccumulator::for_equation(&eq, grid.xi(), alternative)?;
    let mut series = ScatteringSeries::new(p.z_weight);
    let mut other_corrected: Vec<SpectralField> = Vec::new();

    // Probe: the positive mode with the largest predicted resonant drift
    // of f̂, |ξ|^{2-α}|f̂|³.
    let probe = (1..grid.n_points() / 2)
        .max_by(|&i, &j| {
            let w = |k: usize| grid.xi()[k].abs().powf(2.0 - alpha) * u0.coeffs()[k].norm().powi(3);
            w(i).total_cmp(&w(j))
        })
        .unwrap_or(1);
    let probe_xi = grid.xi()[probe];
    let probe_weight =
        probe_xi * probe_xi.abs().powf(1.0 - alpha) / (alpha * (alpha + 1.0));
    let mut integral = 0.0;
    let mut last_modulus: Option<(f64, f64)> = None;
    let mut phase_table = SeriesTable::new(
        "scattering_probe.csv",
        &["t", "xi", "arg_increment", "log_integral"],
    );
    let mut last_probe: Option<num_complex::Complex64> = None;

    let mut err: Option<LabError> = None;
    let mut observe = |s: &crate::integrator::SolverState| -> Result<()> {
        let snap = compute_profile(&s.u_hat, s.t, &eq)?;
        if s.t < 1.0 {
            return Ok(());
        }
        primary.accumulate(&snap)?;
        other.accumulate(&snap)?;
        let m2 = snap.f_hat.coeffs()[probe].norm_sqr();
        if let Some((t0, m0)) = last_modulus {
            integral += 0.5 * (s.t.ln() - t0.ln()) * (m0 + m2);
        }
        last_modulus = Some((s.t, m2));
        if is_dyadic(s.t) {
            let c = snap.f_hat.coeffs()[probe];
            let inc = last_probe.map_or(0.0, |prev| phase_increment(prev, c));
            last_probe = Some(c);
            phase_table.push(vec![s.t, probe_xi, inc, integral]);
            let g = corrected_profile(&snap, &primary)?;
            other_corrected.push(corrected_profile(&snap, &other)?);
            series.push(s.t, g, snap.f_hat)?;
        }
        Ok(())
    };
    let out = run_simulation(&u0, &eq, &solver_cfg, |s| {
        if err.is_none() {
            if let Err(e) = observe(s) {
                err = Some(e);
            }
        }
    })?;
    if let Some(e) = err {
        return Err(e);
    }

    let mut report = ExperimentReport::new(cfg);
    let eps0 = measure_epsilon0(&u0, DEFAULT_SOBOLEV_INDEX);
    report.epsilon0 = Some(eps0);
    report.measure("epsilon0", eps0.total);
    report.halts.insert("main".into(), out.halt);

    let diff_file = "scattering_differences.csv";
    let mut diffs = SeriesTable::new(
        diff_file,
        &["t", "t_next", "d_corrected", "d_corrected_alternative", "d_raw"],
    );
    if let HaltReason::Blowup { t } | HaltReason::Nan { t } = out.halt {
        report.measure("halt_time", t);
        report.verdict("completed", false, "halt_time", "run must reach t_end", diff_file);
        return Ok(StudyOutput::new(report, vec![diffs, phase_table]));
    }

    let limit = extract_scattering_limit(&series)?;
    let d_g = limit.differences.clone();
    let d_f = series.raw_differences()?;
    let d_alt: Vec<f64> = other_corrected
        .windows(2)
        .map(|w| crate::diagnostics::z_distance(&w[0], &w[1], p.z_weight))
        .collect::<Result<_>>()?;
    for i in 0..d_g.len() {
        diffs.push(vec![series.times[i], series.times[i + 1], d_g[i], d_alt[i], d_f[i]]);
        let m = series.times[i].log2().round() as i64;
        report.measure(format!("d_corrected.m{m}"), d_g[i]);
        report.measure(format!("d_raw.m{m}"), d_f[i]);
        report.measure(format!("d_corrected_alternative.m{m}"), d_alt[i]);
    }
    let left = &series.times[..series.times.len() - 1];
    report.measure("rate_corrected", limit.rate);
    report.measure("rate_raw", difference_rate(left, &d_f));
    report.measure("rate_corrected_alternative", difference_rate(left, &d_alt));

    // Constant K for which e^{iKwI} f̂ is stationary at the probe mode,
    // measured from the phase drift between the first monotone checkpoint
    // and the end.
    let first = phase_table
        .rows
        .iter()
        .position(|r| r[0] >= 2f64.powi(p.monotone_from as i32))
        .unwrap_or(0);
    let rows = &phase_table.rows[first..];
    if rows.len() >= 2 {
        let drift: f64 = rows[1..].iter().map(|r| r[2]).sum();
        let di = rows[rows.len() - 1][3] - rows[0][3];
        if di > 0.0 && probe_weight != 0.0 {
            report.measure("measured_phase_constant", -drift / (probe_weight * di));
        }
    }
    report.measure("prefactor_constant", p.prefactor.constant(&eq));
    report.measure("probe_xi", probe_xi);

    let from = p.monotone_from as i64;
    let tail: Vec<f64> = series
        .times
        .iter()
        .zip(&d_g)
        .filter(|(t, _)| t.log2().round() as i64 >= from)
        .map(|(_, &d)| d)
        .collect();
    let monotone = tail.len() >= 2 && tail.windows(2).all(|w| w[1] <= w[0]);
    let violations = tail.windows(2).filter(|w| w[1] > w[0]).count();
    report.measure("monotone_violations", violations as f64);
    report.verdict(
        "corrected_differences_nonincreasing",
        monotone,
        "monotone_violations",
        format!("d_m(g) nonincreasing for m >= {from}"),
        diff_file,
    );
    let last = d_g.len() - 1;
    let ratio = if d_f[last] > 0.0 { d_g[last] / d_f[last] } else { f64::INFINITY };
    report.measure("final_ratio", ratio);
    report.measure(
        "final_ratio_alternative",
        if d_f[last] > 0.0 { d_alt[last] / d_f[last] } else { f64::INFINITY },
    );
    report.verdict(
        "correction_reduces_final_difference",
        ratio <= p.final_ratio_max,
        "final_ratio",
        format!("d_M(g) / d_M(f) <= {} at the final checkpoint pair", p.final_ratio_max),
        diff_file,
    );

    let mut w_inf = SeriesTable::new("scattering_w_inf.csv", &["t", "xi", "re", "im"]);
    let t_last = *series.times.last().expect("checked by extract");
    let n = grid.n_points();
    for j in 0..n {
        let k = j as i64 - (n / 2) as i64;
        let i = grid.index_of_mode(k).expect("in range");
        let c = limit.w_inf.coeffs()[i];
        w_inf.push(vec![t_last, grid.xi()[i], c.re, c.im]);
    }
    report.notes.push(format!(
        "primary prefactor `{:?}` (K = {}), alternative `{:?}` (K = {})",
        p.prefactor,
        p.prefactor.constant(&eq),
        alternative,
        alternative.constant(&eq)
    ));
    Ok(StudyOutput::new(report, vec![diffs, phase_table, w_inf]))
}
