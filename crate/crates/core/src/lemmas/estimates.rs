//! Linear dispersive estimates and the interpolation inequality, probed on
//! dyadic wave packets.
//!
//! Both checks use one fixed periodic grid per sweep, wide enough to hold
//! every packet (including its propagation) and fine enough to sample the
//! highest band eight times beyond its Nyquist need.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::band::{l1_norm, sup_abs};
use crate::error::{LabError, Result};
use crate::spectral::{fractional_frequency, make_grid, DyadicCutoffs, Grid, SpectralField};

/// Radius holding a band-0 packet down to relative size 1e-10. The packets
/// are smooth-cutoff band limited, so their tails decay like `e^{-c√|x|}`.
const PACKET_RADIUS: f64 = 320.0;
/// Oversampling of the highest band, relative to its Nyquist need.
const OVERSAMPLING: f64 = 8.0;
const MAX_POINTS: usize = 1 << 21;

/// Rows of an estimate sweep: parameter columns first, then the measured
/// members and ratios. Ratio statistics cover `ratio_columns`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateSweepResult {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub ratio_columns: Vec<String>,
    pub max: Vec<f64>,
    pub median: Vec<f64>,
}

impl EstimateSweepResult {
    fn new(columns: &[&str], ratio_columns: &[&str], rows: Vec<Vec<f64>>) -> Self {
        let mut r = EstimateSweepResult {
            columns: columns.iter().map(|s| s.to_string()).collect(),
            rows,
            ratio_columns: ratio_columns.iter().map(|s| s.to_string()).collect(),
            max: Vec::new(),
            median: Vec::new(),
        };
        for name in ratio_columns {
            let mut v = r.column(name).expect("ratio column exists");
            v.sort_by(f64::total_cmp);
            r.max.push(v.last().copied().unwrap_or(f64::NAN));
            r.median.push(median_sorted(&v));
        }
        r
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    /// `(min, max)` of a column.
    pub fn range(&self, name: &str) -> Option<(f64, f64)> {
        let v = self.column(name)?;
        Some(v.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| {
            (lo.min(x), hi.max(x))
        }))
    }
}

pub(crate) fn median_sorted(v: &[f64]) -> f64 {
    match v.len() {
        0 => f64::NAN,
        n if n % 2 == 1 => v[n / 2],
        n => 0.5 * (v[n / 2 - 1] + v[n / 2]),
    }
}

/// Test profile for the dispersive sweep: a real, even function `ĥ(ζ)`
/// supported in the band `1/2 ≤ |ζ| ≤ 2`. Band `k` uses the dilate
/// `ĝ_k(ξ) = 2^{-k} ĥ(2^{-k} ξ)`, i.e. `g_k(x) = g_0(2^k x)`.
#[derive(Clone)]
pub struct BandProfile {
    name: String,
    hat: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

impl std::fmt::Debug for BandProfile {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("BandProfile").field("name", &self.name).finish()
    }
}

impl BandProfile {
    pub fn new(name: impl Into<String>, hat: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        BandProfile {
            name: name.into(),
            hat: Arc::new(hat),
        }
    }

    /// `ĥ(ζ) = ψ(ζ) e^{-ζ²/2}`: the band-0 piece of a unit gaussian.
    pub fn gaussian_bump() -> Self {
        let c = DyadicCutoffs::standard();
        BandProfile::new("gaussian_bump", move |z| c.psi(z) * (-0.5 * z * z).exp())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn hat(&self, zeta: f64) -> f64 {
        (self.hat)(zeta)
    }

    /// Fails when `ĥ` is visibly nonzero outside `1/2 ≤ |ζ| ≤ 2`.
    pub fn check_band(&self) -> Result<()> {
        let peak = (0..=3000)
            .map(|i| self.hat(0.5 + 1.5 * i as f64 / 3000.0).abs())
            .fold(0.0f64, f64::max);
        if !(peak.is_finite() && peak > 0.0) {
            return Err(LabError::Domain(format!(
                "profile `{}` vanishes on its band",
                self.name
            )));
        }
        for i in 0..=4000 {
            let z = if i < 2000 {
                0.5 * i as f64 / 2000.0
            } else {
                2.0 + 6.0 * (i - 2000) as f64 / 2000.0
            };
            let z = if i == 2000 { 2.0 } else { z };
            for s in [z, -z] {
                let v = self.hat(s);
                if (s.abs() < 0.5 - 1e-12 || s.abs() > 2.0 + 1e-12) && v.abs() > 1e-14 * peak {
                    return Err(LabError::Domain(format!(
                        "band violation: profile `{}` is {v:e} at ζ = {s} outside 1/2 ≤ |ζ| ≤ 2",
                        self.name
                    )));
                }
            }
        }
        Ok(())
    }

    /// `sup |ĥ|`, sampled densely and refined by golden section.
    fn sup_hat(&self) -> f64 {
        let m = 20_000;
        let (i, _) = (0..=m)
            .map(|i| (i, self.hat(0.5 + 1.5 * i as f64 / m as f64).abs()))
            .fold((0, 0.0f64), |b, x| if x.1 > b.1 { x } else { b });
        let h = 1.5 / m as f64;
        let c = 0.5 + i as f64 * h;
        golden_max(|z| self.hat(z).abs(), c - h, c + h)
    }
}

/// Maximum of a unimodal function on `[a, b]`, never below the endpoint values.
fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let ends = f(a).max(f(b));
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..80 {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    ends.max(fc).max(fd)
}

/// Real field centred in the box with continuous transform `hat` (given for
/// `ξ ≥ 0`, extended by conjugate symmetry).
pub(crate) fn centred_field(grid: &Grid, hat: impl Fn(f64) -> Complex64) -> SpectralField {
    let n = grid.n_points();
    let half = 0.5 * grid.box_length();
    let mut c = vec![Complex64::new(0.0, 0.0); n];
    c[0] = Complex64::new(hat(0.0).re, 0.0);
    for i in 1..n / 2 {
        let xi = grid.xi()[i];
        let v = hat(xi) * Complex64::from_polar(1.0, -xi * half);
        c[i] = v;
        c[n - i] = v.conj();
    }
    SpectralField::from_coeffs(grid, c).expect("grid-sized coefficients")
}

/// `‖x g‖_{L²}` about the box centre, which equals `‖∂ĝ‖_{L²}`.
pub(crate) fn moment_norm(field: &SpectralField) -> f64 {
    let grid = field.grid();
    let dx = grid.dx();
    field
        .to_physical()
        .iter()
        .zip(grid.x_centered())
        .map(|(u, x)| (x * u) * (x * u))
        .sum::<f64>()
        .mul_add(dx, 0.0)
        .sqrt()
}

pub(crate) fn l2_of_coeffs(field: &SpectralField) -> f64 {
    (field.coeffs().iter().map(|c| c.norm_sqr()).sum::<f64>() * field.grid().dxi()).sqrt()
}

/// Grid that holds bands `k_lo..=k_hi` propagated up to `t_max`.
pub fn sweep_grid(alpha: f64, k_lo: i32, k_hi: i32, t_max: f64) -> Result<Grid> {
    // Group velocity (1+α)|ξ|^α is largest at the band edge nearest to
    // ξ = 0 when α < 0 and at the far edge otherwise.
    let edge = |k: i32| if alpha < 0.0 { 2f64.powi(k - 1) } else { 2f64.powi(k + 1) };
    let speed = (k_lo..=k_hi)
        .map(|k| (1.0 + alpha) * edge(k).powf(alpha))
        .fold(0.0f64, f64::max);
    let radius = PACKET_RADIUS * 2f64.powi(-k_lo) + t_max * speed;
    let length = (2.0 * radius).max(64.0).log2().ceil().exp2();
    let xi_top = 2f64.powi(k_hi + 1);
    let needed = length * OVERSAMPLING * xi_top / PI;
    let n = (needed.ceil() as usize).next_power_of_two().max(64);
    if n > MAX_POINTS {
        return Err(LabError::Domain(format!(
            "bands {k_lo}..={k_hi} up to t = {t_max} need {n} points (limit {MAX_POINTS})"
        )));
    }
    make_grid(n, length)
}

/// One evaluation of both dispersive estimates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DispersiveSample {
    pub t: f64,
    pub k: i32,
    pub alpha: f64,
    pub lhs: f64,
    /// `t^{-1/2}2^{(1-α)k/2}‖ĝ‖_∞ + t^{-3/4}2^{-(1+3α)k/4}(‖ĝ‖₂ + 2^k‖∂ĝ‖₂)`.
    pub rhs_fourier: f64,
    /// `t^{-1/2}2^{(1-α)k/2}‖g‖_{L¹}`.
    pub rhs_l1: f64,
}

impl DispersiveSample {
    pub fn ratio_fourier(&self) -> f64 {
        self.lhs / self.rhs_fourier
    }

    pub fn ratio_l1(&self) -> f64 {
        self.lhs / self.rhs_l1
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > -1.0 && alpha < 1.0 && alpha != 0.0) {
        return Err(LabError::Domain(format!("alpha must lie in (-1, 1) \\ {{0}}, got {alpha}")));
    }
    Ok(())
}

/// `‖e^{tL}P_k g‖_∞` and both right-hand sides for `g = amplitude · g_k`.
pub fn dispersive_sample(
    grid: &Grid,
    profile: &BandProfile,
    alpha: f64,
    k: i32,
    t: f64,
    amplitude: f64,
) -> Result<DispersiveSample> {
    check_alpha(alpha)?;
    if !(t.is_finite() && t > 0.0) {
        return Err(LabError::Domain(format!("t must be positive, got {t}")));
    }
    let s = 2f64.powi(-k);
    let cut = DyadicCutoffs::standard();
    let g = centred_field(grid, |xi| Complex64::new(amplitude * s * profile.hat(s * xi), 0.0));
    let pk: Vec<Complex64> = g
        .coeffs()
        .iter()
        .zip(grid.xi())
        .map(|(c, &xi)| {
            let w = cut.psi_j(k, xi);
            if w == 0.0 {
                Complex64::new(0.0, 0.0)
            } else {
                c * w * Complex64::from_polar(1.0, t * fractional_frequency(alpha, xi))
            }
        })
        .collect();
    let mut evolved = SpectralField::from_coeffs(grid, pk)?;
    evolved.zero_nyquist();
    let lhs = sup_abs(&evolved);

    let hat_sup = amplitude.abs() * s * profile.sup_hat();
    let hat_l2 = l2_of_coeffs(&g);
    let hat_d_l2 = moment_norm(&g);
    let l1 = l1_norm(&g);
    let kf = k as f64;
    let lead = t.powf(-0.5) * 2f64.powf(0.5 * (1.0 - alpha) * kf);
    let rhs_fourier =
        lead * hat_sup + t.powf(-0.75) * 2f64.powf(-0.25 * (1.0 + 3.0 * alpha) * kf) * (hat_l2 + 2f64.powi(k) * hat_d_l2);
    Ok(DispersiveSample {
        t,
        k,
        alpha,
        lhs,
        rhs_fourier,
        rhs_l1: lead * l1,
    })
}

/// Sweeps `‖e^{tL}P_k g‖_∞` against both dispersive bounds over `k_range ×
/// t_range` for the profile dilated to each band.
pub fn check_dispersive_estimate(
    alpha: f64,
    k_range: std::ops::RangeInclusive<i32>,
    t_range: &[f64],
    test_profile: &BandProfile,
) -> Result<EstimateSweepResult> {
    check_alpha(alpha)?;
    test_profile.check_band()?;
    let (k_lo, k_hi) = (*k_range.start(), *k_range.end());
    if k_lo > k_hi || t_range.is_empty() {
        return Err(LabError::Domain("empty sweep".into()));
    }
    let t_max = t_range.iter().copied().fold(0.0, f64::max);
    let grid = sweep_grid(alpha, k_lo, k_hi, t_max)?;
    let tuples: Vec<(i32, f64)> = k_range.flat_map(|k| t_range.iter().map(move |&t| (k, t))).collect();
    let samples = tuples
        .par_iter()
        .map(|&(k, t)| dispersive_sample(&grid, test_profile, alpha, k, t, 1.0))
        .collect::<Result<Vec<_>>>()?;
    Ok(sweep_from_samples(&samples))
}

pub(crate) fn sweep_from_samples(samples: &[DispersiveSample]) -> EstimateSweepResult {
    let rows = samples
        .iter()
        .map(|s| {
            vec![
                s.t,
                s.k as f64,
                s.alpha,
                s.lhs,
                s.rhs_fourier,
                s.rhs_l1,
                s.ratio_fourier(),
                s.ratio_l1(),
            ]
        })
        .collect();
    EstimateSweepResult::new(
        &["t", "k", "alpha", "lhs", "rhs_fourier", "rhs_l1", "ratio_fourier", "ratio_l1"],
        &["ratio_fourier", "ratio_l1"],
        rows,
    )
}

/// Largest relative change of both ratios between `(g_k, k, 2^{1+α} t)` and
/// `(g_{k+1}, k+1, t)`. The dilation `g → g(2·)` maps one onto the other
/// exactly once time is rescaled by `2^{1+α}`, since `ω(2ξ) = 2^{1+α} ω(ξ)`.
pub fn dispersive_dilation_defect(
    alpha: f64,
    k_range: std::ops::RangeInclusive<i32>,
    t_range: &[f64],
    profile: &BandProfile,
) -> Result<f64> {
    let (k_lo, k_hi) = (*k_range.start(), *k_range.end());
    let factor = 2f64.powf(1.0 + alpha);
    let t_max = t_range.iter().copied().fold(0.0, f64::max) * factor.max(1.0);
    let grid = sweep_grid(alpha, k_lo, k_hi + 1, t_max)?;
    let tuples: Vec<(i32, f64)> = k_range.flat_map(|k| t_range.iter().map(move |&t| (k, t))).collect();
    let defects = tuples
        .par_iter()
        .map(|&(k, t)| -> Result<f64> {
            let a = dispersive_sample(&grid, profile, alpha, k, factor * t, 1.0)?;
            let b = dispersive_sample(&grid, profile, alpha, k + 1, t, 1.0)?;
            let rel = |x: f64, y: f64| (x - y).abs() / x.abs().max(y.abs());
            Ok(rel(a.ratio_fourier(), b.ratio_fourier()).max(rel(a.ratio_l1(), b.ratio_l1())))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(defects.into_iter().fold(0.0, f64::max))
}

/// Random real field `h(x) = Σ a_j e^{-(x - x_j)²/2}` at unit scale,
/// dilated to band `k` as `h(2^k x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RandomBumps {
    pub amplitudes: Vec<f64>,
    pub centres: Vec<f64>,
}

impl RandomBumps {
    pub fn draw(rng: &mut impl Rng, count: usize) -> Self {
        RandomBumps {
            amplitudes: (0..count).map(|_| rng.gen_range(-1.0..1.0)).collect(),
            centres: (0..count).map(|_| rng.gen_range(-4.0..4.0)).collect(),
        }
    }

    /// Transform of `h(2^k ·)` at `ξ`.
    pub fn hat(&self, k: i32, xi: f64) -> Complex64 {
        let s = 2f64.powi(-k);
        let z = s * xi;
        let g = (-0.5 * z * z).exp();
        self.amplitudes
            .iter()
            .zip(&self.centres)
            .map(|(&a, &c)| Complex64::from_polar(a * s * g, -z * c))
            .sum()
    }
}

/// The three members of the interpolation chain for `P_k g`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InterpolationMembers {
    /// `‖P̂_k g‖²_∞`.
    pub fourier_sup_sq: f64,
    /// `‖P_k g‖²_{L¹}`.
    pub l1_sq: f64,
    /// `2^{-k}‖P̂_k g‖₂ (‖P̂_k g‖₂ + 2^k ‖∂P̂_k g‖₂)`.
    pub right: f64,
}

impl InterpolationMembers {
    pub fn left_ratio(&self) -> f64 {
        self.fourier_sup_sq / self.l1_sq
    }

    pub fn right_ratio(&self) -> f64 {
        self.l1_sq / self.right
    }
}

pub fn interpolation_members(grid: &Grid, field: &RandomBumps, k: i32, amplitude: f64) -> InterpolationMembers {
    let cut = DyadicCutoffs::standard();
    let hat = |xi: f64| field.hat(k, xi) * cut.psi_j(k, xi) * amplitude;
    // Supremum over the band, in the scaled variable ζ = 2^{-k}ξ.
    let s = 2f64.powi(k);
    let m = 8000;
    let h = 1.5 / m as f64;
    let (i, _) = (0..=m)
        .map(|i| (i, hat(s * (0.5 + h * i as f64)).norm()))
        .fold((0, 0.0f64), |b, x| if x.1 > b.1 { x } else { b });
    let c = 0.5 + h * i as f64;
    let sup = golden_max(|z| hat(s * z).norm(), (c - h).max(0.5), (c + h).min(2.0));

    let pk = centred_field(grid, hat);
    let l2 = l2_of_coeffs(&pk);
    let d_l2 = moment_norm(&pk);
    let l1 = l1_norm(&pk);
    InterpolationMembers {
        fourier_sup_sq: sup * sup,
        l1_sq: l1 * l1,
        right: 2f64.powi(-k) * l2 * (l2 + 2f64.powi(k) * d_l2),
    }
}

/// Rows `(trial, k, members, ratios, dilated ratios)` for randomized bumps
/// at random bands `k ∈ -3..=3`.
pub fn check_interpolation_inequality(num_trials: usize, seed: u64) -> Result<EstimateSweepResult> {
    if num_trials == 0 {
        return Err(LabError::InsufficientData("no interpolation trials".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let trials: Vec<(RandomBumps, i32)> = (0..num_trials)
        .map(|_| {
            let count = rng.gen_range(1..=6);
            (RandomBumps::draw(&mut rng, count), rng.gen_range(-3..=3))
        })
        .collect();
    let rows = trials
        .par_iter()
        .enumerate()
        .map(|(i, (field, k))| -> Result<Vec<f64>> {
            // One grid per trial holding both the band and its dilate.
            let grid = sweep_grid(-0.5, *k, *k + 1, 0.0)?;
            let a = interpolation_members(&grid, field, *k, 1.0);
            let b = interpolation_members(&grid, field, *k + 1, 1.0);
            Ok(vec![
                i as f64,
                *k as f64,
                a.fourier_sup_sq,
                a.l1_sq,
                a.right,
                a.left_ratio(),
                a.right_ratio(),
                b.left_ratio(),
                b.right_ratio(),
            ])
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EstimateSweepResult::new(
        &[
            "trial",
            "k",
            "fourier_sup_sq",
            "l1_sq",
            "right",
            "left_ratio",
            "right_ratio",
            "left_ratio_dilated",
            "right_ratio_dilated",
        ],
        &["left_ratio", "right_ratio"],
        rows,
    ))
}

/// Largest relative change of the two chain ratios under `g → g(2·)`,
/// `k → k+1`.
pub fn interpolation_dilation_defect(result: &EstimateSweepResult) -> f64 {
    let col = |n: &str| result.column(n).unwrap_or_default();
    let (l, r, ld, rd) = (
        col("left_ratio"),
        col("right_ratio"),
        col("left_ratio_dilated"),
        col("right_ratio_dilated"),
    );
    let rel = |x: f64, y: f64| (x - y).abs() / x.abs().max(y.abs());
    (0..l.len())
        .map(|i| rel(l[i], ld[i]).max(rel(r[i], rd[i])))
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn profile_band_checks() {
        BandProfile::gaussian_bump().check_band().unwrap();
        let wide = BandProfile::new("wide", |z: f64| (-z * z).exp());
        let err = wide.check_band().unwrap_err();
        assert!(err.to_string().contains("band violation"), "{err}");
        let zero = BandProfile::new("zero", |_| 0.0);
        assert!(zero.check_band().is_err());
    }

    #[test]
    fn amplitude_scaling_is_exact() {
        let p = BandProfile::gaussian_bump();
        let grid = sweep_grid(-0.5, 0, 0, 4.0).unwrap();
        let a = dispersive_sample(&grid, &p, -0.5, 0, 1.0, 1.0).unwrap();
        let b = dispersive_sample(&grid, &p, -0.5, 0, 1.0, 2.0).unwrap();
        assert!((b.lhs / a.lhs - 2.0).abs() < 1e-12);
        assert!((b.rhs_fourier / a.rhs_fourier - 2.0).abs() < 1e-12);
        assert!((b.rhs_l1 / a.rhs_l1 - 2.0).abs() < 1e-12);
        assert!((b.ratio_l1() - a.ratio_l1()).abs() < 1e-12 * a.ratio_l1());
        assert!(a.ratio_l1() > 0.0 && a.ratio_fourier() > 0.0);
    }

    #[test]
    fn ratio_settles_at_large_time() {
        // Once t·2^{(1+α)k} is large the ratios stop moving under t → 4t.
        let p = BandProfile::gaussian_bump();
        let grid = sweep_grid(-0.5, 0, 0, 4096.0).unwrap();
        let a = dispersive_sample(&grid, &p, -0.5, 0, 1024.0, 1.0).unwrap();
        let b = dispersive_sample(&grid, &p, -0.5, 0, 4096.0, 1.0).unwrap();
        assert!((b.ratio_l1() / a.ratio_l1() - 1.0).abs() < 0.2);
        assert!((b.ratio_fourier() / a.ratio_fourier() - 1.0).abs() < 0.2);
        // At t = 1 the packet has not dispersed yet.
        let c = dispersive_sample(&grid, &p, -0.5, 0, 1.0, 1.0).unwrap();
        assert!(c.ratio_l1() < 0.5 * a.ratio_l1());
    }

    #[test]
    fn dilation_covariance() {
        let p = BandProfile::gaussian_bump();
        let d = dispersive_dilation_defect(-0.5, 0..=0, &[1.0, 4.0], &p).unwrap();
        assert!(d < 1e-6, "{d:e}");
    }

    #[test]
    fn bad_alpha_rejected() {
        let p = BandProfile::gaussian_bump();
        for a in [0.0, -1.0, 1.5] {
            assert!(check_dispersive_estimate(a, 0..=0, &[1.0], &p).is_err());
        }
    }

    #[test]
    fn interpolation_scalings() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let f = RandomBumps::draw(&mut rng, 3);
        let grid = sweep_grid(-0.5, -1, 2, 0.0).unwrap();
        let a = interpolation_members(&grid, &f, 0, 1.0);
        let b = interpolation_members(&grid, &f, 0, 2.0);
        for (x, y) in [(a.fourier_sup_sq, b.fourier_sup_sq), (a.l1_sq, b.l1_sq), (a.right, b.right)] {
            assert!((y / x - 4.0).abs() < 1e-12, "{x} {y}");
        }
        assert!((a.left_ratio() - b.left_ratio()).abs() < 1e-12 * a.left_ratio());
        // |ĝ| ≤ ‖g‖_{L¹}/√(2π) in this normalization.
        assert!(a.left_ratio() <= 1.0 / (2.0 * PI) * (1.0 + 1e-12));
        let c = interpolation_members(&grid, &f, 1, 1.0);
        assert!((c.left_ratio() - a.left_ratio()).abs() < 1e-6 * a.left_ratio());
        assert!((c.right_ratio() - a.right_ratio()).abs() < 1e-6 * a.right_ratio());
    }
}
