//! Fourier-side form of the cubic nonlinearity in profile variables,
//! checked against the pseudospectral evaluator used by the solver.
//!
//! With `û = e^{itω} f̂` and `u_t = iω(D)u + c ∂_x(u³/3)`, the profile obeys
//!
//! `∂_t f̂(ξ) = (c iξ / 3) (Δξ/√2π)² Σ_{η,σ} e^{-itΦ(ξ,η,σ)} f̂(ξ−η−σ) f̂(η) f̂(σ)`
//!
//! on the periodic grid, where `Φ` is [`super::phase::resonance_phase`]'s
//! phase. In the continuum the prefactor becomes `c iξ / (6π)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::equations::{make_equation, nonlinearity, EquationKind, EquationParams, EquationSpec};
use crate::error::{LabError, Result};
use crate::spectral::{apply_exponential, fractional_frequency, make_grid, Grid, SpectralField};

/// Largest grid accepted by the `O(n³)` oracle.
pub const MAX_ORACLE_POINTS: usize = 64;
pub const TRILINEAR_ALPHA: f64 = -0.5;
pub const TRILINEAR_TIME: f64 = 0.7;
const BOX_LENGTH: f64 = 8.0 * PI;

/// Right side of the profile equation by direct double sum over the
/// retained modes `|k| ≤ kmax`.
pub fn profile_rhs_direct(eq: &EquationSpec, profile: &SpectralField, t: f64) -> Result<Vec<Complex64>> {
    let alpha = eq
        .alpha
        .ok_or_else(|| LabError::config("the double-sum oracle needs a fractional equation"))?;
    if eq.degree != 2 {
        return Err(LabError::config("the double-sum oracle covers cubic nonlinearities"));
    }
    let grid = profile.grid();
    let n = grid.n_points();
    let kmax = eq.dealias_rule().cutoff_index(n).min(n / 2 - 1) as i64;
    let dxi = grid.dxi();
    let w = |k: i64| fractional_frequency(alpha, k as f64 * dxi);
    let f = |k: i64| {
        if k.abs() > kmax {
            Complex64::new(0.0, 0.0)
        } else {
            profile.coeff(k)
        }
    };
    let pre = dxi * dxi / (2.0 * PI);
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    for k in -kmax..=kmax {
        let mut acc = Complex64::new(0.0, 0.0);
        for a in -kmax..=kmax {
            for b in -kmax..=kmax {
                let r = k - a - b;
                if r.abs() > kmax {
                    continue;
                }
                let phi = w(k) - w(r) - w(a) - w(b);
                acc += Complex64::from_polar(1.0, -t * phi) * f(r) * f(a) * f(b);
            }
        }
        let xi = k as f64 * dxi;
        let idx = grid.index_of_mode(k).expect("retained mode is on the grid");
        out[idx] = Complex64::new(0.0, eq.coefficient * xi / 3.0) * pre * acc;
    }
    Ok(out)
}

/// `e^{-tL} N(e^{tL} f)` with the solver's dealiased evaluator.
pub fn profile_rhs_pseudospectral(eq: &EquationSpec, profile: &SpectralField, t: f64) -> SpectralField {
    let u = apply_exponential(profile, &eq.linear_symbol, t);
    apply_exponential(&nonlinearity(eq, &u), &eq.linear_symbol, -t)
}

/// Random real profile with coefficients uniform in the unit square on the
/// retained modes.
pub fn random_profile(grid: &Grid, kmax: usize, rng: &mut impl Rng) -> SpectralField {
    let mut f = SpectralField::zeros(grid);
    f.set_coeff(0, Complex64::new(rng.gen_range(-1.0..1.0), 0.0));
    for k in 1..=kmax as i64 {
        let c = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        f.set_coeff(k, c);
        f.set_coeff(-k, c.conj());
    }
    f
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrilinearReport {
    pub n_points: usize,
    pub seed: u64,
    pub t: f64,
    /// `max_k |direct − pseudospectral|`.
    pub max_abs_difference: f64,
    /// `max_k |direct|`.
    pub max_abs: f64,
    pub relative_difference: f64,
}

fn compare(eq: &EquationSpec, profile: &SpectralField, t: f64, seed: u64) -> Result<TrilinearReport> {
    let direct = profile_rhs_direct(eq, profile, t)?;
    let pseudo = profile_rhs_pseudospectral(eq, profile, t);
    let max_abs = direct.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let max_abs_difference = direct
        .iter()
        .zip(pseudo.coeffs())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    Ok(TrilinearReport {
        n_points: profile.grid().n_points(),
        seed,
        t,
        max_abs_difference,
        max_abs,
        relative_difference: if max_abs == 0.0 {
            max_abs_difference
        } else {
            max_abs_difference / max_abs
        },
    })
}

fn check_size(n_points: usize) -> Result<()> {
    if n_points > MAX_ORACLE_POINTS {
        return Err(LabError::Domain(format!(
            "the double-sum oracle is limited to {MAX_ORACLE_POINTS} points, got {n_points}"
        )));
    }
    Ok(())
}

/// Modified fKdV equation probed by the identity checks.
pub fn trilinear_equation() -> EquationSpec {
    make_equation(EquationKind::ModifiedFkdv, EquationParams::alpha(TRILINEAR_ALPHA))
        .expect("valid alpha")
}

/// Random band-limited profile at `t = 0.7`: double-sum oracle against the
/// pseudospectral evaluation.
pub fn check_trilinear_identity(n_points: usize, seed: u64) -> Result<TrilinearReport> {
    check_size(n_points)?;
    let grid = make_grid(n_points, BOX_LENGTH)?;
    let eq = trilinear_equation();
    let kmax = eq.dealias_rule().cutoff_index(n_points).min(n_points / 2 - 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f = random_profile(&grid, kmax, &mut rng);
    compare(&eq, &f, TRILINEAR_TIME, seed)
}

/// Closed form for `f̂ = a` at `±ξ₁`: the sum has two reachable outputs,
/// `∂_t f̂(ξ₁) = c iξ₁ (2π/L²) |a|² a` and
/// `∂_t f̂(3ξ₁) = c iξ₁ (2π/L²) a³ e^{it(3ω(ξ₁) − ω(3ξ₁))}`.
pub fn single_mode_rhs(eq: &EquationSpec, grid: &Grid, mode: i64, a: Complex64, t: f64) -> Result<Vec<Complex64>> {
    let alpha = eq
        .alpha
        .ok_or_else(|| LabError::config("closed form needs a fractional equation"))?;
    let n = grid.n_points();
    let kmax = eq.dealias_rule().cutoff_index(n).min(n / 2 - 1) as i64;
    if mode <= 0 || 3 * mode > kmax {
        return Err(LabError::Domain(format!("mode {mode} must satisfy 0 < 3·mode ≤ {kmax}")));
    }
    let xi1 = mode as f64 * grid.dxi();
    let l = grid.box_length();
    let pre = Complex64::new(0.0, eq.coefficient * xi1 * 2.0 * PI / (l * l));
    let w = |x: f64| fractional_frequency(alpha, x);
    let mut out = vec![Complex64::new(0.0, 0.0); n];
    let one = pre * a.norm_sqr() * a;
    let three = pre * a * a * a * Complex64::from_polar(1.0, t * (3.0 * w(xi1) - w(3.0 * xi1)));
    for (k, v) in [(mode, one), (3 * mode, three)] {
        out[grid.index_of_mode(k).expect("on grid")] = v;
        out[grid.index_of_mode(-k).expect("on grid")] = v.conj();
    }
    Ok(out)
}

/// Single-mode profile: both sides against [`single_mode_rhs`]. Returns the
/// larger relative sup difference.
pub fn check_single_mode(n_points: usize, mode: i64, a: Complex64) -> Result<f64> {
    check_size(n_points)?;
    let grid = make_grid(n_points, BOX_LENGTH)?;
    let eq = trilinear_equation();
    let mut f = SpectralField::zeros(&grid);
    f.set_coeff(mode, a);
    f.set_coeff(-mode, a.conj());
    let exact = single_mode_rhs(&eq, &grid, mode, a, TRILINEAR_TIME)?;
    let top = exact.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let direct = profile_rhs_direct(&eq, &f, TRILINEAR_TIME)?;
    let pseudo = profile_rhs_pseudospectral(&eq, &f, TRILINEAR_TIME);
    let diff = |v: &[Complex64]| v.iter().zip(&exact).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max) / top;
    Ok(diff(&direct).max(diff(pseudo.coeffs())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_profile() {
        let grid = make_grid(16, BOX_LENGTH).unwrap();
        let eq = trilinear_equation();
        let f = SpectralField::zeros(&grid);
        assert!(profile_rhs_direct(&eq, &f, 0.7).unwrap().iter().all(|c| c.norm() == 0.0));
        assert_eq!(profile_rhs_pseudospectral(&eq, &f, 0.7).max_abs_coeff(), 0.0);
    }

    #[test]
    fn single_mode_closed_form() {
        for (n, mode) in [(16, 1), (32, 2), (64, 5)] {
            let d = check_single_mode(n, mode, Complex64::new(0.3, -0.7)).unwrap();
            assert!(d < 1e-12, "n={n} mode={mode}: {d:e}");
        }
    }

    #[test]
    fn random_profile_n16() {
        let r = check_trilinear_identity(16, 7).unwrap();
        assert!(r.max_abs > 0.0);
        assert!(r.relative_difference <= 1e-10, "{r:?}");
    }

    #[test]
    fn oracle_size_limit() {
        assert!(matches!(check_trilinear_identity(128, 0), Err(LabError::Domain(_))));
    }
}
