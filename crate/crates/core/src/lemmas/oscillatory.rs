//! Oscillatory double integrals `∬ e^{-ixy} a(x/N) a(y/N) dx dy` for a
//! gaussian and a compactly supported cutoff `a`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::quadrature::{integrate, integrate_2d, Quadrature, Tolerance};
use crate::error::{LabError, Result};
use crate::spectral::DyadicCutoffs;

/// `2πN / √(4N^{-2} + N²)`.
pub fn gaussian_closed_form(n: f64) -> f64 {
    2.0 * PI * n / (4.0 / (n * n) + n * n).sqrt()
}

/// `∬ e^{-ixy} e^{-x²/N²} e^{-y²/N²}` by nested adaptive quadrature. The
/// imaginary part is odd in `x` and drops out; the real part is folded onto
/// the quadrant and truncated at `6.5N`, where the weight is below `e^{-42}`.
pub fn gaussian_integral(n: f64) -> Result<Quadrature> {
    if !(n >= 1.0 && n.is_finite()) {
        return Err(LabError::Domain(format!("N must be at least 1, got {n}")));
    }
    let r = 6.5 * n;
    let inv = 1.0 / (n * n);
    let q = integrate_2d(
        |x, y| (x * y).cos() * (-(x * x + y * y) * inv).exp(),
        (0.0, r),
        (0.0, r),
        Tolerance::new(1e-11, 0.0),
    )?;
    Ok(Quadrature {
        value: 4.0 * q.value,
        error: 4.0 * q.error,
        evaluations: q.evaluations,
    })
}

/// `Φ̂(s) = ∫ e^{-isy} φ(y) dy` for the low-pass cutoff `φ`.
fn cutoff_transform(s: f64) -> Result<f64> {
    let c = DyadicCutoffs::standard();
    // φ = 1 on [0, 1]; only the transition needs quadrature. The rounding
    // floor of the error estimate grows with the number of oscillations.
    let head = if s == 0.0 { 1.0 } else { s.sin() / s };
    let tol = Tolerance::new(1e-15 * (s.abs() / 100.0).max(1.0), 0.0);
    let tail = integrate(|y| (s * y).cos() * c.phi(y), 1.0, 2.0, tol)?;
    Ok(2.0 * (head + tail.value))
}

/// `2π − ∬ e^{-ixy} φ(x/N) φ(y/N) dx dy`.
///
/// Substituting `s = Nx` turns the integral into `∫ φ(s/N²) Φ̂(s) ds`, and
/// `∫ Φ̂ = 2π φ(0) = 2π`. The error is therefore
/// `2 ∫_{N²}^{2N²} (1 − φ(s/N²)) Φ̂(s) ds`, which is evaluated directly so
/// that it is not lost against `2π`.
pub fn cutoff_error(n: f64) -> Result<Quadrature> {
    if !(n >= 1.0 && n.is_finite()) {
        return Err(LabError::Domain(format!("N must be at least 1, got {n}")));
    }
    let c = DyadicCutoffs::standard();
    let n2 = n * n;
    let mut failure = None;
    let q = integrate(
        |s| {
            let w = 1.0 - c.phi(s / n2);
            if w == 0.0 || failure.is_some() {
                return 0.0;
            }
            match cutoff_transform(s) {
                Ok(v) => w * v,
                Err(e) => {
                    failure = Some(e);
                    0.0
                }
            }
        },
        n2,
        2.0 * n2,
        Tolerance::new(1e-14 * n2, 0.0),
    );
    if let Some(e) = failure {
        return Err(e);
    }
    let q = q?;
    Ok(Quadrature {
        value: 2.0 * q.value,
        error: 2.0 * q.error,
        evaluations: q.evaluations,
    })
}

pub const DEFAULT_N_LIST: [f64; 4] = [1.0, 2.0, 5.0, 10.0];
pub const CUTOFF_FIT_N: [f64; 3] = [10.0, 20.0, 40.0];
pub const CUTOFF_PROBE_N: f64 = 100.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianRow {
    pub n: f64,
    pub value: f64,
    pub closed_form: f64,
    pub abs_difference: f64,
    pub quadrature_error: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CutoffRow {
    pub n: f64,
    pub error: f64,
    pub quadrature_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OscillatoryReport {
    pub gaussian: Vec<GaussianRow>,
    pub max_abs_difference: f64,
    pub cutoff: Vec<CutoffRow>,
    /// `C = max |err(N)| √N` over the fit points.
    pub fit_constant: f64,
    /// `C N^{-1/2}` at the probe.
    pub probe_bound: f64,
    pub probe_error: f64,
    /// Log-log slope of `|err|` between the first two fit points.
    pub observed_rate: f64,
}

/// Gaussian closed form at every `N` in `n_list`, plus the cutoff variant
/// fitted on `N ∈ {10, 20, 40}` and probed at `N = 100`.
pub fn check_oscillatory_gaussian(n_list: &[f64]) -> Result<OscillatoryReport> {
    if n_list.is_empty() {
        return Err(LabError::InsufficientData("empty N list".into()));
    }
    let gaussian = n_list
        .iter()
        .map(|&n| {
            let q = gaussian_integral(n)?;
            let exact = gaussian_closed_form(n);
            Ok(GaussianRow {
                n,
                value: q.value,
                closed_form: exact,
                abs_difference: (q.value - exact).abs(),
                quadrature_error: q.error,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let cutoff = CUTOFF_FIT_N
        .iter()
        .chain(std::iter::once(&CUTOFF_PROBE_N))
        .map(|&n| {
            let q = cutoff_error(n)?;
            Ok(CutoffRow {
                n,
                error: q.value,
                quadrature_error: q.error,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let fit = &cutoff[..CUTOFF_FIT_N.len()];
    let fit_constant = fit.iter().map(|r| r.error.abs() * r.n.sqrt()).fold(0.0, f64::max);
    let probe = cutoff[CUTOFF_FIT_N.len()];
    let observed_rate = (fit[1].error.abs() / fit[0].error.abs()).ln() / (fit[1].n / fit[0].n).ln();
    Ok(OscillatoryReport {
        max_abs_difference: gaussian.iter().map(|r| r.abs_difference).fold(0.0, f64::max),
        gaussian,
        fit_constant,
        probe_bound: fit_constant / probe.n.sqrt(),
        probe_error: probe.error.abs(),
        observed_rate,
        cutoff,
    })
}
