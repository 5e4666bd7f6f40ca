//! Profiles, the logarithmic phase correction, scattering-limit extraction
//! and power-law fits.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::equations::EquationSpec;
use crate::error::{LabError, Result};
use crate::spectral::{exp_of, weighted_sup_distance, SpectralField};

/// Profile `f̂(t) = e^{-tL} û(t)` of a solution at time `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileSnapshot {
    pub t: f64,
    pub f_hat: SpectralField,
}

pub fn compute_profile(u_hat: &SpectralField, t: f64, eq: &EquationSpec) -> Result<ProfileSnapshot> {
    if !eq.has_dispersion() {
        return Err(LabError::Domain(format!(
            "equation `{}` has no linear part; the profile is undefined",
            eq.name
        )));
    }
    let grid = u_hat.grid();
    let coeffs = u_hat
        .coeffs()
        .iter()
        .zip(grid.xi())
        .map(|(c, &xi)| c * exp_of(-t, eq.linear_symbol.evaluate(xi)))
        .collect();
    Ok(ProfileSnapshot {
        t,
        f_hat: SpectralField::from_coeffs(grid, coeffs)?,
    })
}

/// Which constant multiplies `ξ|ξ|^{1-α}/(α(α+1)) ∫₁^t |f̂|² ds/s`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhasePrefactor {
    /// The constant 3, as the correction is usually written down.
    Stated,
    /// The nonlinear coefficient `c` of `c ∂_x(u³/3)`. This is the value that
    /// cancels the resonant self-interaction `iξ|ξ|^{1-α}|f̂|²f̂ / (α(α+1)t)`
    /// produced by stationary phase; for `c = -1` it is `-1/3` of
    /// [`PhasePrefactor::Stated`].
    Resonant,
}

impl PhasePrefactor {
    pub fn constant(self, eq: &EquationSpec) -> f64 {
        match self {
            PhasePrefactor::Stated => 3.0,
            PhasePrefactor::Resonant => eq.coefficient,
        }
    }
}

/// Running `H(ξ,t) = K ξ|ξ|^{1-α}/(α(α+1)) ∫₁^t |f̂(s,ξ)|² ds/s`, integrated by
/// the trapezoid rule in `τ = ln s`.
#[derive(Debug, Clone)]
pub struct PhaseAccumulator {
    h: Vec<f64>,
    weight: Vec<f64>,
    last_t: f64,
    last_modulus: Option<Vec<f64>>,
    alpha: f64,
}

impl PhaseAccumulator {
    /// `constant` is the `K` above; `xi` are the grid wavenumbers.
    pub fn new(xi: &[f64], alpha: f64, constant: f64) -> Result<Self> {
        if !(alpha > -1.0 && alpha < 0.0) {
            return Err(LabError::config(format!("alpha must lie in (-1, 0), got {alpha}")));
        }
        let weight = xi
            .iter()
            .map(|&x| {
                if x == 0.0 {
                    0.0
                } else {
                    constant * x * x.abs().powf(1.0 - alpha) / (alpha * (alpha + 1.0))
                }
            })
            .collect();
        Ok(PhaseAccumulator {
            h: vec![0.0; xi.len()],
            weight,
            last_t: 1.0,
            last_modulus: None,
            alpha,
        })
    }

    pub fn for_equation(eq: &EquationSpec, grid_xi: &[f64], prefactor: PhasePrefactor) -> Result<Self> {
        let alpha = eq
            .alpha
            .ok_or_else(|| LabError::Domain(format!("equation `{}` has no alpha", eq.name)))?;
        Self::new(grid_xi, alpha, prefactor.constant(eq))
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn last_t(&self) -> f64 {
        self.last_t
    }

    /// Current `H` in grid storage order.
    pub fn phase(&self) -> &[f64] {
        &self.h
    }

    /// The ξ-dependent factor multiplying `∫|f̂|² ds/s`.
    pub fn prefactor(&self) -> &[f64] {
        &self.weight
    }

    /// Snapshots before `t = 1` are ignored. The first snapshot at or after
    /// `t = 1` is held constant back to `t = 1`, which is exact when it lies
    /// on `t = 1`.
    pub fn accumulate(&mut self, snap: &ProfileSnapshot) -> Result<()> {
        if snap.f_hat.coeffs().len() != self.h.len() {
            return Err(LabError::Shape {
                expected: self.h.len(),
                actual: snap.f_hat.coeffs().len(),
            });
        }
        if snap.t < 1.0 {
            return if self.last_modulus.is_none() {
                Ok(())
            } else {
                Err(LabError::Sequencing(format!(
                    "snapshot at t={} precedes accumulator time {}",
                    snap.t, self.last_t
                )))
            };
        }
        if snap.t < self.last_t {
            return Err(LabError::Sequencing(format!(
                "snapshot at t={} precedes accumulator time {}",
                snap.t, self.last_t
            )));
        }
        let modulus: Vec<f64> = snap.f_hat.coeffs().iter().map(|c| c.norm_sqr()).collect();
        let dtau = snap.t.ln() - self.last_t.ln();
        let prev = self.last_modulus.as_ref().unwrap_or(&modulus);
        for ((h, w), (a, b)) in self.h.iter_mut().zip(&self.weight).zip(prev.iter().zip(&modulus)) {
            *h += w * 0.5 * dtau * (a + b);
        }
        self.last_modulus = Some(modulus);
        self.last_t = snap.t;
        Ok(())
    }

    /// Largest `|H(ξ) + H(-ξ)|`.
    pub fn oddness_defect(&self) -> f64 {
        let n = self.h.len();
        (1..n / 2)
            .map(|i| (self.h[i] + self.h[n - i]).abs())
            .fold(self.h[0].abs(), f64::max)
    }
}

/// `g(ξ) = e^{iH(ξ)} f̂(ξ)`.
pub fn corrected_profile(snap: &ProfileSnapshot, acc: &PhaseAccumulator) -> Result<SpectralField> {
    let before_start = snap.t < 1.0 && acc.last_modulus.is_none();
    if !before_start && snap.t != acc.last_t {
        return Err(LabError::Sequencing(format!(
            "profile at t={} but phase accumulated to t={}",
            snap.t, acc.last_t
        )));
    }
    let grid = snap.f_hat.grid();
    let coeffs = snap
        .f_hat
        .coeffs()
        .iter()
        .zip(&acc.h)
        .map(|(c, &h)| c * Complex64::from_polar(1.0, h))
        .collect();
    SpectralField::from_coeffs(grid, coeffs)
}

/// `max_ξ (1+|ξ|)^w |g2(ξ) - g1(ξ)|`.
pub fn z_distance(g1: &SpectralField, g2: &SpectralField, weight: f64) -> Result<f64> {
    weighted_sup_distance(g1, g2, weight)
}

/// Corrected and raw profiles at dyadic checkpoints `2, 4, 8, …`.
#[derive(Debug, Clone)]
pub struct ScatteringSeries {
    pub weight: f64,
    pub times: Vec<f64>,
    pub corrected: Vec<SpectralField>,
    pub raw: Vec<SpectralField>,
}

impl ScatteringSeries {
    pub fn new(weight: f64) -> Self {
        ScatteringSeries {
            weight,
            times: Vec::new(),
            corrected: Vec::new(),
            raw: Vec::new(),
        }
    }

    pub fn push(&mut self, t: f64, corrected: SpectralField, raw: SpectralField) -> Result<()> {
        if t < 1.0 {
            return Err(LabError::Sequencing(format!("checkpoint t={t} is before t=1")));
        }
        if self.times.last().is_some_and(|&last| t <= last) {
            return Err(LabError::Sequencing(format!("checkpoint t={t} is not increasing")));
        }
        self.times.push(t);
        self.corrected.push(corrected);
        self.raw.push(raw);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Consecutive Z-distances of the corrected profiles.
    pub fn corrected_differences(&self) -> Result<Vec<f64>> {
        consecutive(&self.corrected, self.weight)
    }

    /// Consecutive Z-distances of the raw profiles.
    pub fn raw_differences(&self) -> Result<Vec<f64>> {
        consecutive(&self.raw, self.weight)
    }
}

fn consecutive(fields: &[SpectralField], weight: f64) -> Result<Vec<f64>> {
    fields
        .windows(2)
        .map(|w| z_distance(&w[0], &w[1], weight))
        .collect()
}

#[derive(Debug, Clone)]
pub struct ScatteringLimit {
    /// `(1+|ξ|)^w g` at the last checkpoint.
    pub w_inf: SpectralField,
    /// Fitted exponent of `d_m` against the left checkpoint time; `-∞` when
    /// the differences vanish.
    pub rate: f64,
    pub differences: Vec<f64>,
}

pub const MIN_CHECKPOINTS: usize = 4;

pub fn extract_scattering_limit(series: &ScatteringSeries) -> Result<ScatteringLimit> {
    if series.len() < MIN_CHECKPOINTS {
        return Err(LabError::InsufficientData(format!(
            "scattering limit needs at least {MIN_CHECKPOINTS} checkpoints, got {}",
            series.len()
        )));
    }
    let differences = series.corrected_differences()?;
    let rate = difference_rate(&series.times, &differences);
    let last = series.corrected.last().expect("non-empty");
    let grid = last.grid();
    let coeffs = last
        .coeffs()
        .iter()
        .zip(grid.xi())
        .map(|(c, &xi)| c * (1.0 + xi.abs()).powf(series.weight))
        .collect();
    Ok(ScatteringLimit {
        w_inf: SpectralField::from_coeffs(grid, coeffs)?,
        rate,
        differences,
    })
}

/// Log-log slope of `d_m` against `t_m`, using only positive differences.
pub fn difference_rate(times: &[f64], differences: &[f64]) -> f64 {
    let (xs, ys): (Vec<f64>, Vec<f64>) = times
        .iter()
        .zip(differences)
        .filter(|(_, &d)| d > 0.0)
        .map(|(t, d)| (t.ln(), d.ln()))
        .unzip();
    if xs.len() < 2 {
        return f64::NEG_INFINITY;
    }
    least_squares(&xs, &ys).0
}

/// Named time series of a nonnegative quantity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecaySeries {
    pub name: String,
    pub points: Vec<(f64, f64)>,
}

impl DecaySeries {
    pub fn new(name: impl Into<String>) -> Self {
        DecaySeries {
            name: name.into(),
            points: Vec::new(),
        }
    }

    pub fn push(&mut self, t: f64, value: f64) -> Result<()> {
        if self.points.last().is_some_and(|&(last, _)| t <= last) {
            return Err(LabError::Sequencing(format!(
                "series `{}`: time {t} is not increasing",
                self.name
            )));
        }
        if !(value.is_finite() && value >= 0.0) {
            return Err(LabError::Domain(format!(
                "series `{}`: value {value} at t={t} is not finite and nonnegative",
                self.name
            )));
        }
        self.points.push((t, value));
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerLawFit {
    pub exponent: f64,
    pub r_squared: f64,
    pub n_points: usize,
}

pub const MIN_FIT_POINTS: usize = 5;

/// Least-squares slope of `ln value` against `ln t` over `[t_min, t_max]`.
pub fn fit_power_law(series: &DecaySeries, t_min: f64, t_max: f64) -> Result<PowerLawFit> {
    let window: Vec<(f64, f64)> = series
        .points
        .iter()
        .copied()
        .filter(|&(t, _)| t >= t_min && t <= t_max)
        .collect();
    if window.len() < MIN_FIT_POINTS {
        return Err(LabError::InsufficientData(format!(
            "series `{}` has {} points in [{t_min}, {t_max}], need {MIN_FIT_POINTS}",
            series.name,
            window.len()
        )));
    }
    if let Some(&(t, v)) = window.iter().find(|&&(_, v)| !(v > 0.0)) {
        return Err(LabError::Domain(format!(
            "series `{}` has non-positive value {v} at t={t}",
            series.name
        )));
    }
    let xs: Vec<f64> = window.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = window.iter().map(|p| p.1.ln()).collect();
    let (exponent, r_squared) = least_squares(&xs, &ys);
    Ok(PowerLawFit {
        exponent,
        r_squared,
        n_points: window.len(),
    })
}

/// Slope and coefficient of determination of the line fit `y ≈ a + b x`.
/// A perfectly flat `y` is fitted exactly, so `r² = 1`.
pub fn least_squares(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let ss_res: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| {
            let r = y - my - slope * (x - mx);
            r * r
        })
        .sum();
    let r2 = if syy > 0.0 { 1.0 - ss_res / syy } else { 1.0 };
    (slope, r2)
}
