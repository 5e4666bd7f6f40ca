//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit when any
//! criterion fails. The trilinear oracle runs first and gates the studies.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::Path;
use std::process::ExitCode;
use std::time::Instant;

use fkdv::equations::{make_equation, EquationKind, EquationParams};
use fkdv::experiments::{check_conservation, run_study, ExperimentConfig, InitialData, SolverSpec, Study};
use fkdv::integrator::run_simulation;
use fkdv::lemmas::trilinear::check_trilinear_identity;
use fkdv::output::write_study;
use fkdv::spectral::{apply_exponential, make_grid, Grid, SpectralField};

struct Outcome {
    passed: bool,
    detail: String,
}

impl Outcome {
    fn new(passed: bool, detail: impl Into<String>) -> Self {
        Outcome {
            passed,
            detail: detail.into(),
        }
    }

    fn error(e: impl std::fmt::Display) -> Self {
        Outcome::new(false, format!("error: {e}"))
    }
}

fn params_for(kind: EquationKind) -> EquationParams {
    let mut p = EquationParams::default();
    if kind.needs_alpha() {
        p.alpha = Some(-0.5);
    }
    if kind.needs_epsilon() {
        p.epsilon = Some(0.1);
    }
    p
}

fn anchor_data() -> fkdv::Result<(Grid, SpectralField)> {
    let grid = make_grid(1 << 12, 64.0 * PI)?;
    let u0 = InitialData::gaussian(0.1, 1.0).build(&grid)?;
    Ok((grid, u0))
}

fn trilinear_gate() -> Outcome {
    let mut worst = 0.0f64;
    for seed in 0..20 {
        match check_trilinear_identity(16, seed) {
            Ok(r) => worst = worst.max(r.relative_difference),
            Err(e) => return Outcome::error(e),
        }
    }
    Outcome::new(worst <= 1e-10, format!("max relative difference {worst:.3e} over 20 seeds (<= 1e-10)"))
}

fn conservation_anchor() -> Outcome {
    let (_, u0) = match anchor_data() {
        Ok(d) => d,
        Err(e) => return Outcome::error(e),
    };
    let mut passed = true;
    let mut parts = Vec::new();
    for kind in EquationKind::ALL {
        let r = make_equation(kind, params_for(kind))
            .and_then(|eq| check_conservation(&u0, &eq, &SolverSpec::default(), 50.0));
        match r {
            Ok(c) => {
                let ok = c.l2_drift <= 1e-6 && c.mean_drift <= 1e-12 && c.halt == fkdv::integrator::HaltReason::Completed;
                passed &= ok;
                parts.push(format!("{kind}: l2 {:.1e} mass {:.1e}", c.l2_drift, c.mean_drift));
            }
            Err(e) => return Outcome::error(format!("{kind}: {e}")),
        }
    }
    Outcome::new(passed, parts.join("; "))
}

fn linear_propagation() -> Outcome {
    let (_, u0) = match anchor_data() {
        Ok(d) => d,
        Err(e) => return Outcome::error(e),
    };
    let mut worst = 0.0f64;
    for kind in EquationKind::ALL {
        let run = || -> fkdv::Result<f64> {
            let eq = make_equation(kind, params_for(kind))?.linearized()?;
            let cfg = SolverSpec::default().solver_config(10.0, vec![])?;
            let out = run_simulation(&u0, &eq, &cfg, |_| {})?;
            let exact = apply_exponential(&u0, &eq.linear_symbol, 10.0);
            let a = out.state.u_hat.to_physical();
            let b = exact.to_physical();
            Ok(a.iter().zip(&b).fold(0.0f64, |m, (x, y)| m.max((x - y).abs())))
        };
        match run() {
            Ok(d) => worst = worst.max(d),
            Err(e) => return Outcome::error(format!("{kind}: {e}")),
        }
    }
    Outcome::new(worst <= 1e-12, format!("max sup difference {worst:.3e} over all equations (<= 1e-12)"))
}

/// Runs the default study, writes it under `dir` and returns the CSV bytes.
fn study(study: Study, dir: &Path) -> (Outcome, BTreeMap<String, Vec<u8>>) {
    let cfg = ExperimentConfig::defaults(study);
    let out = match run_study(&cfg) {
        Ok(o) => o,
        Err(e) => return (Outcome::error(e), BTreeMap::new()),
    };
    let written = match write_study(dir, &out.report, &out.series, 0.0) {
        Ok(w) => w,
        Err(e) => return (Outcome::error(e), BTreeMap::new()),
    };
    let csv = written
        .iter()
        .filter(|p| p.extension().is_some_and(|e| e == "csv"))
        .map(|p| {
            let name = p.file_name().unwrap().to_string_lossy().into_owned();
            (name, std::fs::read(p).unwrap_or_default())
        })
        .collect();
    let failed: Vec<String> = out.report.failed_verdicts().map(|v| v.name.clone()).collect();
    let detail = if failed.is_empty() {
        format!("{} verdicts passed", out.report.verdicts.len())
    } else {
        format!("failed: {}", failed.join(", "))
    };
    (Outcome::new(out.passed(), detail), csv)
}

const STUDIES: [(usize, Study); 6] = [
    (4, Study::Decay),
    (5, Study::Scattering),
    (6, Study::Longwave),
    (7, Study::Shock),
    (8, Study::Norms),
    (9, Study::Lemmas),
];

fn report(n: usize, name: &str, o: &Outcome, secs: f64) {
    println!(
        "{} criterion {n} ({name}): {} [{secs:.1} s]",
        if o.passed { "PASS" } else { "FAIL" },
        o.detail
    );
}

fn timed(f: impl FnOnce() -> Outcome) -> (Outcome, f64) {
    let start = Instant::now();
    let o = f();
    (o, start.elapsed().as_secs_f64())
}

fn main() -> ExitCode {
    let mut all = true;
    let (gate, secs) = timed(trilinear_gate);
    report(3, "trilinear oracle", &gate, secs);
    if !gate.passed {
        println!("FAIL remaining criteria skipped: trilinear gate failed");
        return ExitCode::FAILURE;
    }

    let (o, secs) = timed(conservation_anchor);
    report(1, "conservation", &o, secs);
    all &= o.passed;
    let (o, secs) = timed(linear_propagation);
    report(2, "linear propagation", &o, secs);
    all &= o.passed;

    let first = tempfile::tempdir().expect("temporary directory");
    let second = tempfile::tempdir().expect("temporary directory");
    let mut csv_first = BTreeMap::new();
    let suite_start = Instant::now();
    for (n, s) in STUDIES {
        let start = Instant::now();
        let (o, csv) = study(s, &first.path().join(s.as_str()));
        report(n, s.as_str(), &o, start.elapsed().as_secs_f64());
        all &= o.passed;
        csv_first.insert(s.as_str(), csv);
    }
    let suite_secs = suite_start.elapsed().as_secs_f64();

    let (o, secs) = timed(|| {
        let mut mismatches = Vec::new();
        let mut files = 0;
        for (_, s) in STUDIES {
            let (_, csv) = study(s, &second.path().join(s.as_str()));
            let before = &csv_first[s.as_str()];
            if before.keys().ne(csv.keys()) {
                mismatches.push(format!("{}: file set differs", s.as_str()));
            }
            for (name, bytes) in before {
                files += 1;
                if csv.get(name) != Some(bytes) {
                    mismatches.push(format!("{}/{name}", s.as_str()));
                }
            }
        }
        if mismatches.is_empty() {
            Outcome::new(files > 0, format!("{files} CSV files byte-identical on rerun"))
        } else {
            Outcome::new(false, format!("differs: {}", mismatches.join(", ")))
        }
    });
    report(10, "determinism", &o, secs);
    all &= o.passed;

    println!("acceptance: studies {suite_secs:.1} s, {}", if all { "all criteria passed" } else { "criteria failed" });
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
