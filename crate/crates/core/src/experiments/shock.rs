use rayon::prelude::*;

use super::config::ExperimentConfig;
use super::report::{measure_epsilon0, ExperimentReport, SeriesTable, StudyOutput};
use super::section;
use super::simulate::{sup, uniform_schedule};
use crate::equations::EquationSpec;
use crate::error::Result;
use crate::integrator::{max_gradient, run_simulation, HaltReason, SolverConfig};
use crate::spectral::{
    apply_multiplier, make_grid, MultiplierSymbol, SpectralField, DEFAULT_SOBOLEV_INDEX,
};

/// Oversampling used to locate the steepest compression.
const REFINE: usize = 8;

/// Breaking time of `u_t = -u^p u_x` by characteristics,
/// `t* = -1 / min_x ∂_x(u0^p) = -1 / min_x p u0^{p-1} u0'`, or `None` when
/// the datum has no compressive region.
pub fn predict_shock_time(u0: &SpectralField, p: u32) -> Option<f64> {
    predict_shock_time_with(u0, p, -1.0)
}

/// Same for `u_t = c ∂_x(u^{p+1}/(p+1))`, whose characteristic speed is
/// `-c u^p`.
pub fn predict_shock_time_with(u0: &SpectralField, p: u32, coefficient: f64) -> Option<f64> {
    let grid = u0.grid();
    let n = grid.n_points();
    let fine = make_grid(REFINE * n, grid.box_length()).expect("valid refined grid");
    let mut up = SpectralField::zeros(&fine);
    for i in 0..n {
        if i != grid.nyquist_index() {
            up.set_coeff(grid.mode_of_index(i), u0.coeffs()[i]);
        }
    }
    let u = up.to_physical();
    let du = apply_multiplier(&up, &MultiplierSymbol::derivative()).to_physical();
    let pf = p as f64;
    let slope = u
        .iter()
        .zip(&du)
        .map(|(&v, &d)| -coefficient * pf * v.powi(p as i32 - 1) * d)
        .fold(f64::INFINITY, f64::min);
    (slope < 0.0).then(|| -1.0 / slope)
}

struct LadderRun {
    n: usize,
    table: SeriesTable,
    halt: HaltReason,
    initial_gradient: f64,
    max_gradient_ratio: f64,
}

fn gradient_run(
    u0: &SpectralField,
    eq: &EquationSpec,
    cfg: &SolverConfig,
    factor: f64,
    file: String,
) -> Result<LadderRun> {
    let g0 = max_gradient(u0);
    let mut run_cfg = cfg.clone();
    run_cfg.blowup_gradient = Some(factor * g0);
    let mut table = SeriesTable::new(file, &["t", "max_gradient", "max_abs"]);
    let mut peak: f64 = 0.0;
    let out = run_simulation(u0, eq, &run_cfg, |s| {
        let g = max_gradient(&s.u_hat);
        peak = peak.max(g);
        table.push(vec![s.t, g, sup(&s.u_hat.to_physical())]);
    })?;
    let g_last = max_gradient(&out.state.u_hat);
    peak = peak.max(g_last);
    if table.rows.last().map(|r| r[0]) != Some(out.state.t) {
        table.push(vec![out.state.t, g_last, sup(&out.state.u_hat.to_physical())]);
    }
    Ok(LadderRun {
        n: u0.grid().n_points(),
        table,
        halt: out.halt,
        initial_gradient: g0,
        max_gradient_ratio: if g0 > 0.0 { peak / g0 } else { 0.0 },
    })
}

/// Gradient blow-up of the dispersionless flow against the characteristics
/// prediction, plus an optional dispersive contrast run.
pub fn run_shock_study(cfg: &ExperimentConfig) -> Result<StudyOutput> {
    let p = section(&cfg.shock, "shock")?;
    let eq = cfg.equation_spec()?;
    let grid_spec = cfg.grid_spec()?;
    let solver = cfg.solver_spec()?;
    let initial = cfg.initial_data()?;
    let base = initial.build(&grid_spec.build()?)?;
    let predicted = predict_shock_time_with(&base, eq.degree, eq.coefficient);
    let t_end = predicted.map_or(p.fallback_t_end, |t| p.horizon_factor * t);

    let ladder: Vec<LadderRun> = p
        .ladder
        .par_iter()
        .map(|&n| -> Result<LadderRun> {
            let g = make_grid(n, grid_spec.box_length)?;
            let u0 = initial.build(&g)?;
            let scfg = solver.solver_config(t_end, uniform_schedule(p.sample_interval, t_end))?;
            gradient_run(&u0, &eq, &scfg, p.blowup_factor, format!("shock_n{n}.csv"))
        })
        .collect::<Result<_>>()?;

    let mut report = ExperimentReport::new(cfg);
    let eps0 = measure_epsilon0(&base, DEFAULT_SOBOLEV_INDEX);
    report.epsilon0 = Some(eps0);
    report.measure("predicted_shock_time", predicted.unwrap_or(f64::INFINITY));
    report.measure("horizon", t_end);
    let mut detections = Vec::new();
    for run in &ladder {
        let l = format!("n{}", run.n);
        report.halts.insert(l.clone(), run.halt);
        report.measure(format!("{l}.initial_gradient"), run.initial_gradient);
        report.measure(format!("{l}.max_gradient_ratio"), run.max_gradient_ratio);
        let detected = match run.halt {
            HaltReason::Blowup { t } => Some(t),
            _ => None,
        };
        detections.push(detected);
        let q = format!("{l}.detection_time");
        report.measure(&q, detected.unwrap_or(f64::INFINITY));
        match predicted {
            Some(ts) => {
                let ok = detected.is_some_and(|t| (t - ts).abs() <= p.time_tolerance * ts);
                report.verdict(
                    format!("{l}.detection_matches_prediction"),
                    ok,
                    q,
                    format!(
                        "gradient exceeds {}x its initial value within {}% of t* = {ts}",
                        p.blowup_factor,
                        100.0 * p.time_tolerance
                    ),
                    &run.table.file,
                );
            }
            None => report.verdict(
                format!("{l}.no_detection"),
                detected.is_none() && run.halt == HaltReason::Completed,
                q,
                "no compressive region, so no detection up to the horizon",
                &run.table.file,
            ),
        }
    }
    if predicted.is_some() {
        for (i, w) in ladder.windows(2).enumerate() {
            let (a, b) = (detections[i], detections[i + 1]);
            let change = match (a, b) {
                (Some(a), Some(b)) => (b - a).abs() / a,
                _ => f64::INFINITY,
            };
            let q = format!("refinement_change.n{}_n{}", w[0].n, w[1].n);
            report.measure(&q, change);
            report.verdict(
                q.clone(),
                change < p.refinement_tolerance,
                q,
                format!("detection time moves by < {}% under refinement", 100.0 * p.refinement_tolerance),
                &w[1].table.file,
            );
        }
    }

    let mut tables: Vec<SeriesTable> = Vec::new();
    if let Some(c) = &p.contrast {
        let ceq = c.equation.build()?;
        let peak = sup(&base.to_physical());
        let scaled = base.scaled(if peak > 0.0 { c.amplitude / peak } else { 0.0 });
        let t_scaled = predict_shock_time_with(&scaled, eq.degree, eq.coefficient);
        let horizon = c.horizon_factor * t_scaled.or(predicted).unwrap_or(p.fallback_t_end);
        report.measure("contrast.predicted_shock_time_dispersionless", t_scaled.unwrap_or(f64::INFINITY));
        report.measure("contrast.horizon", horizon);
        report.epsilon0 = Some(measure_epsilon0(&scaled, DEFAULT_SOBOLEV_INDEX));
        let scfg = solver.solver_config(horizon, uniform_schedule(1.0, horizon))?;
        let run = gradient_run(&scaled, &ceq, &scfg, p.blowup_factor, "shock_contrast.csv".into())?;
        report.halts.insert("contrast".into(), run.halt);
        report.measure("contrast.max_gradient_ratio", run.max_gradient_ratio);
        report.verdict(
            "contrast.no_detection",
            run.halt == HaltReason::Completed,
            "contrast.max_gradient_ratio",
            format!(
                "`{}` from the rescaled datum stays below {}x its initial gradient up to t = {horizon}",
                ceq.name, p.blowup_factor
            ),
            &run.table.file,
        );
        tables.push(run.table);
    }
    report.notes.push(
        "epsilon0 is measured on the contrast datum when a contrast run is configured".into(),
    );
    let mut all: Vec<SeriesTable> = ladder.into_iter().map(|r| r.table).collect();
    all.extend(tables);
    Ok(StudyOutput::new(report, all))
}
