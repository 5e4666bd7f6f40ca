//! Expansion of the resonance phase near the space-time resonant set
//! `η = σ = ξ`.

use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::spectral::fractional_frequency;

/// `Φ(ξ,η,σ) = ω(ξ) − ω(ξ−η−σ) − ω(η) − ω(σ)` with `ω(ξ) = ξ|ξ|^α`.
///
/// Fails when `ξ−η−σ` is within a relative `1e-12` of zero, where `ω` is
/// not differentiable and the expansion breaks down.
pub fn resonance_phase(alpha: f64, xi: f64, eta: f64, sigma: f64) -> Result<f64> {
    let zeta = xi - eta - sigma;
    let scale = xi.abs().max(eta.abs()).max(sigma.abs());
    if zeta.abs() <= 1e-12 * scale {
        return Err(LabError::Domain(format!(
            "ξ−η−σ = {zeta:e} lies on the singular locus (ξ = {xi}, η = {eta}, σ = {sigma})"
        )));
    }
    let w = |v| fractional_frequency(alpha, v);
    Ok(w(xi) - w(zeta) - w(eta) - w(sigma))
}

/// Quadratic model `ω''(ξ)(ξ−η)(ξ−σ)` with `ω''(ξ) = sign(ξ) α(α+1)|ξ|^{α−1}`;
/// `ω` is odd, so the sign only matters for `ξ < 0`.
pub fn quadratic_model(alpha: f64, xi: f64, eta: f64, sigma: f64) -> f64 {
    xi.signum() * alpha * (alpha + 1.0) * xi.abs().powf(alpha - 1.0) * (xi - eta) * (xi - sigma)
}

/// Offsets `(ξ−η, ξ−σ) = δ·d` probed along each direction `d`.
pub const DIRECTIONS: [(f64, f64); 2] = [(1.0, 1.0), (1.0, -0.5)];

/// `δ = 2^{-6-j}`, `j = 0..=6`.
pub fn default_delta_ladder() -> Vec<f64> {
    (0..=6).map(|j| 2f64.powi(-6 - j)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseLadderRow {
    pub direction: (f64, f64),
    pub delta: f64,
    pub phi: f64,
    pub model: f64,
    pub remainder: f64,
    /// `remainder(previous δ) / remainder(δ)`; absent on the first rung.
    pub ratio: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseExpansionReport {
    pub alpha: f64,
    pub xi: f64,
    pub rows: Vec<PhaseLadderRow>,
    pub min_ratio: f64,
    pub max_ratio: f64,
    /// `Φ/δ²` at the smallest `δ` along `(1, 1)`.
    pub limit_quotient: f64,
    /// `ω''(ξ)`.
    pub limit_expected: f64,
}

/// Subtracts the quadratic model along a ladder of offsets and records how
/// the remainder shrinks from one rung to the next. `delta_range` must be
/// decreasing by factors of two for the ratios to target 8.
pub fn check_phase_expansion(alpha: f64, xi: f64, delta_range: &[f64]) -> Result<PhaseExpansionReport> {
    if !(alpha > -1.0 && alpha < 1.0 && alpha != 0.0) {
        return Err(LabError::Domain(format!("alpha must lie in (-1, 1) \\ {{0}}, got {alpha}")));
    }
    if xi == 0.0 || !xi.is_finite() {
        return Err(LabError::Domain("ξ must be finite and nonzero".into()));
    }
    if delta_range.len() < 2 {
        return Err(LabError::InsufficientData("phase ladder needs at least two offsets".into()));
    }
    let mut rows = Vec::new();
    for &dir in &DIRECTIONS {
        let mut previous: Option<f64> = None;
        for &delta in delta_range {
            let (a, b) = (delta * dir.0, delta * dir.1);
            if !(delta > 0.0) || a.abs() + b.abs() > xi.abs() / 32.0 {
                return Err(LabError::Domain(format!(
                    "offset δ = {delta} leaves the region |ξ−η|+|ξ−σ| ≤ |ξ|/32"
                )));
            }
            let (eta, sigma) = (xi - a, xi - b);
            let phi = resonance_phase(alpha, xi, eta, sigma)?;
            let model = quadratic_model(alpha, xi, eta, sigma);
            let remainder = phi - model;
            rows.push(PhaseLadderRow {
                direction: dir,
                delta,
                phi,
                model,
                remainder,
                ratio: previous.map(|p| p / remainder),
            });
            previous = Some(remainder);
        }
    }
    let ratios: Vec<f64> = rows.iter().filter_map(|r| r.ratio).collect();
    let smallest = rows
        .iter()
        .filter(|r| r.direction == DIRECTIONS[0])
        .last()
        .expect("ladder is non-empty");
    Ok(PhaseExpansionReport {
        alpha,
        xi,
        min_ratio: ratios.iter().copied().fold(f64::INFINITY, f64::min),
        max_ratio: ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        limit_quotient: smallest.phi / (smallest.delta * smallest.delta),
        limit_expected: xi.signum() * alpha * (alpha + 1.0) * xi.abs().powf(alpha - 1.0),
        rows,
    })
}
