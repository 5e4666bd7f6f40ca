use rayon::prelude::*;

use super::config::ExperimentConfig;
use super::report::{measure_epsilon0, ExperimentReport, SeriesTable, StudyOutput};
use super::section;
use super::simulate::uniform_schedule;
use crate::equations::{make_equation, EquationKind, EquationParams};
use crate::error::{LabError, Result};
use crate::integrator::{run_simulation, HaltReason};
use crate::spectral::{sobolev_norm, SpectralField, DEFAULT_SOBOLEV_INDEX};

struct Member {
    epsilon: f64,
    table: SeriesTable,
    halts: [HaltReason; 2],
}

fn label(eps: f64) -> String {
    format!("eps{eps}")
}

/// Compares the rescaled modified Whitham flow with its third-order
/// long-wave model from the same datum, for each ε.
pub fn run_longwave_study(cfg: &ExperimentConfig) -> Result<StudyOutput> {
    let p = section(&cfg.longwave, "longwave")?;
    let grid = cfg.grid_spec()?.build()?;
    let phi = cfg.initial_data()?.build(&grid)?;
    let solver = cfg.solver_spec()?;
    let columns: Vec<String> = std::iter::once("t".to_string())
        .chain(p.orders.iter().map(|j| format!("e{j}")))
        .collect();

    let members: Vec<Member> = p
        .epsilons
        .par_iter()
        .map(|&eps| -> Result<Member> {
            let whitham = make_equation(
                EquationKind::RescaledModifiedWhitham,
                EquationParams::epsilon(eps),
            )?;
            let model = make_equation(
                EquationKind::Mkdv,
                EquationParams {
                    dispersion_coefficient: Some(p.mkdv_dispersion_coefficient),
                    ..EquationParams::epsilon(eps)
                },
            )?;
            let t_end = p.t_compare.max(0.5 / eps);
            let times = uniform_schedule(p.sample_interval, t_end);
            let solver_cfg = solver.solver_config(t_end, times)?;
            let pair: Vec<(Vec<(f64, SpectralField)>, HaltReason)> = [&whitham, &model]
                .par_iter()
                .map(|eq| -> Result<_> {
                    let mut states = Vec::new();
                    let out = run_simulation(&phi, eq, &solver_cfg, |s| {
                        states.push((s.t, s.u_hat.clone()))
                    })?;
                    Ok((states, out.halt))
                })
                .collect::<Result<_>>()?;
            let cols: Vec<&str> = columns.iter().map(String::as_str).collect();
            let mut table = SeriesTable::new(format!("longwave_{}.csv", label(eps)), &cols);
            for ((t, u), (_, v)) in pair[0].0.iter().zip(&pair[1].0) {
                let d = u.difference(v)?;
                let mut row = vec![*t];
                row.extend(p.orders.iter().map(|&j| sobolev_norm(&d, j as f64)));
                table.push(row);
            }
            Ok(Member {
                epsilon: eps,
                table,
                halts: [pair[0].1, pair[1].1],
            })
        })
        .collect::<Result<_>>()?;

    let mut report = ExperimentReport::new(cfg);
    let eps0 = measure_epsilon0(&phi, DEFAULT_SOBOLEV_INDEX);
    report.epsilon0 = Some(eps0);
    report.notes.push(format!(
        "comparison equation uses dispersion coefficient {}",
        p.mkdv_dispersion_coefficient
    ));
    let value_at = |m: &Member, col: &str, t: f64| -> Result<f64> {
        let ts = m.table.column("t").expect("t column");
        let vs = m.table.column(col).expect("error column");
        ts.iter()
            .position(|&x| (x - t).abs() <= 1e-9 * t.max(1.0))
            .map(|i| vs[i])
            .ok_or_else(|| LabError::InsufficientData(format!("no sample at t={t}")))
    };
    for m in &members {
        let l = label(m.epsilon);
        report.halts.insert(format!("{l}.whitham"), m.halts[0]);
        report.halts.insert(format!("{l}.model"), m.halts[1]);
        for &j in &p.orders {
            report.measure(format!("{l}.e{j}_at_t_compare"), value_at(m, &format!("e{j}"), p.t_compare)?);
        }
        // Linear-in-t envelope of e_0.
        let ts = m.table.column("t").expect("t column");
        let e0 = m.table.column("e0");
        if let Some(e0) = e0 {
            let hi = 0.5 / m.epsilon;
            let scaled: Vec<f64> = ts
                .iter()
                .zip(&e0)
                .filter(|(&t, _)| t >= p.envelope_t_min - 1e-12 && t <= hi + 1e-12)
                .map(|(&t, &e)| e / t)
                .collect();
            if scaled.len() >= 2 {
                let max = scaled.iter().cloned().fold(f64::MIN, f64::max);
                let min = scaled.iter().cloned().fold(f64::MAX, f64::min);
                let q = format!("{l}.e0_over_t_variation");
                report.measure(&q, if min > 0.0 { max / min } else { f64::INFINITY });
                report.verdict(
                    format!("{l}.linear_envelope"),
                    min > 0.0 && max / min < p.envelope_max_variation,
                    q,
                    format!(
                        "max/min of e0(t)/t over t in [{}, {hi}] < {}",
                        p.envelope_t_min, p.envelope_max_variation
                    ),
                    &m.table.file,
                );
            }
        }
        let failed = m.halts.iter().any(|h| *h != HaltReason::Completed);
        if failed {
            report.measure(format!("{l}.failed_runs"), 1.0);
            report.verdict(
                format!("{l}.completed"),
                false,
                format!("{l}.failed_runs"),
                "both runs must reach t_end",
                &m.table.file,
            );
        }
    }
    for pair in members.windows(2) {
        let (a, b) = (&pair[0], &pair[1]);
        for &j in &p.orders {
            let col = format!("e{j}");
            let ea = value_at(a, &col, p.t_compare)?;
            let eb = value_at(b, &col, p.t_compare)?;
            let ratio = if eb > 0.0 { ea / eb } else { f64::INFINITY };
            let q = format!("ratio_e{j}.{}_{}", label(a.epsilon), label(b.epsilon));
            report.measure(&q, ratio);
            report.measure(
                format!("{q}.ideal"),
                (a.epsilon / b.epsilon).powi(2),
            );
            report.verdict(
                q.clone(),
                ratio >= p.ratio_min && ratio <= p.ratio_max,
                q,
                format!(
                    "e{j}(t={}) ratio within [{}, {}]",
                    p.t_compare, p.ratio_min, p.ratio_max
                ),
                &a.table.file,
            );
        }
    }
    let tables = members.into_iter().map(|m| m.table).collect();
    Ok(StudyOutput::new(report, tables))
}
