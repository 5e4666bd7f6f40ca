//! Trilinear pseudo-product forms `∬ m(η,σ) f̂(η) ĝ(σ) ĥ(−η−σ) dη dσ`.
//!
//! Writing `m(η,σ) = (2π)^{-2} ∬ m̌(x,y) e^{-i(xη+yσ)} dx dy`, the form equals
//! `(2π)^{-2} √2π ∬ m̌(x,y) ∫ f(z−x) g(z−y) h(z) dz dx dy`, so Hölder gives
//! `|form| ≤ (2π)^{-3/2} ‖m̌‖_{L¹} ‖f‖_p ‖g‖_q ‖h‖_r` whenever
//! `1/p + 1/q + 1/r = 1`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::band::sup_abs;
use super::estimates::{centred_field, l2_of_coeffs};
use super::quadrature::{integrate_2d, Tolerance};
use crate::error::{LabError, Result};
use crate::spectral::{make_grid, Grid, SpectralField};

/// `m(η,σ) = e^{-(η/w₁)² - (σ/w₂)²}`; `w₁ = w₂ = 1` is the default kernel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussianKernel {
    pub w1: f64,
    pub w2: f64,
}

impl Default for GaussianKernel {
    fn default() -> Self {
        GaussianKernel { w1: 1.0, w2: 1.0 }
    }
}

impl GaussianKernel {
    pub fn m1(&self, eta: f64) -> f64 {
        (-(eta / self.w1).powi(2)).exp()
    }

    pub fn m2(&self, sigma: f64) -> f64 {
        (-(sigma / self.w2).powi(2)).exp()
    }

    pub fn eval(&self, eta: f64, sigma: f64) -> f64 {
        self.m1(eta) * self.m2(sigma)
    }

    /// `m̌(x,y) = ∬ m e^{i(xη+yσ)} dη dσ = π w₁w₂ e^{-(w₁x)²/4 - (w₂y)²/4}`.
    pub fn inverse_transform(&self, x: f64, y: f64) -> f64 {
        PI * self.w1 * self.w2 * (-0.25 * (self.w1 * x).powi(2) - 0.25 * (self.w2 * y).powi(2)).exp()
    }

    /// `‖m̌‖_{L¹} = 4π²` for every width.
    pub fn inverse_l1_closed_form(&self) -> f64 {
        4.0 * PI * PI
    }

    /// `‖m̌‖_{L¹}` by adaptive quadrature over a box holding the kernel
    /// down to `e^{-400}`.
    pub fn inverse_l1_quadrature(&self) -> Result<f64> {
        let (rx, ry) = (40.0 / self.w1, 40.0 / self.w2);
        let q = integrate_2d(
            |x, y| self.inverse_transform(x, y).abs(),
            (-rx, rx),
            (-ry, ry),
            Tolerance::new(1e-11, 0.0),
        )?;
        Ok(q.value)
    }
}

/// `Δξ² Σ_{η,σ} m(η,σ) f̂(η) ĝ(σ) ĥ(−η−σ)` over all grid modes.
pub fn form_direct(kernel: &GaussianKernel, f: &SpectralField, g: &SpectralField, h: &SpectralField) -> Complex64 {
    let grid = f.grid();
    let n = grid.n_points() as i64;
    let half = n / 2 - 1;
    let dxi = grid.dxi();
    let mut acc = Complex64::new(0.0, 0.0);
    for a in -half..=half {
        let fa = f.coeff(a);
        if fa.norm_sqr() == 0.0 {
            continue;
        }
        for b in -half..=half {
            let c = -a - b;
            if c.abs() > half {
                continue;
            }
            let m = kernel.eval(a as f64 * dxi, b as f64 * dxi);
            acc += m * fa * g.coeff(b) * h.coeff(c);
        }
    }
    acc * dxi * dxi
}

/// `√2π ∫ (m₁(D)f)(m₂(D)g) h dx` on the grid. Exact for the direct sum when
/// the fields are band limited to `|k| < n/3`.
pub fn form_factored(kernel: &GaussianKernel, f: &SpectralField, g: &SpectralField, h: &SpectralField) -> Complex64 {
    let grid = f.grid();
    let filter = |u: &SpectralField, m: &dyn Fn(f64) -> f64| -> Vec<f64> {
        let c = u
            .coeffs()
            .iter()
            .zip(grid.xi())
            .map(|(c, &xi)| c * m(xi))
            .collect();
        SpectralField::from_coeffs(grid, c).expect("grid-sized").to_physical()
    };
    let fm = filter(f, &|x| kernel.m1(x));
    let gm = filter(g, &|x| kernel.m2(x));
    let hp = h.to_physical();
    let s: f64 = fm.iter().zip(&gm).zip(&hp).map(|((a, b), c)| a * b * c).sum();
    Complex64::new((2.0 * PI).sqrt() * s * grid.dx(), 0.0)
}

/// Exponent triples `(p, q, r)` probed; `0` stands for `∞`.
pub const EXPONENT_TRIPLES: [(u8, u8, u8); 3] = [(2, 2, 0), (2, 0, 2), (0, 2, 2)];

pub fn triple_label(t: (u8, u8, u8)) -> String {
    let s = |p: u8| if p == 0 { "inf".to_string() } else { p.to_string() };
    format!("{}_{}_{}", s(t.0), s(t.1), s(t.2))
}

/// Grid for the randomized suite: a box of length `32π` whose fields are
/// band limited to `|k| ≤ n/8`, i.e. `|ξ| ≤ 4`.
pub fn pseudo_product_grid() -> Grid {
    make_grid(512, 32.0 * PI).expect("valid grid")
}

/// Widths of the bumps placed in the three slots of the form.
pub const SLOT_WIDTHS: [f64; 3] = [1.0, 0.7, 1.4];

/// One gaussian bump `a e^{-(x-c)²/(2w²)}` with random `a ∈ [-1, 1]` and
/// `c ∈ [-4, 4]`, truncated to `|k| ≤ n/8`.
fn random_field(grid: &Grid, w: f64, rng: &mut impl Rng) -> SpectralField {
    let a = rng.gen_range(-1.0..1.0);
    let c = rng.gen_range(-4.0..4.0);
    let mut f = centred_field(grid, |xi: f64| {
        Complex64::from_polar(a * w * (-0.5 * (w * xi).powi(2)).exp(), -xi * c)
    });
    let n = grid.n_points();
    let kmax = n / 8;
    for (i, c) in f.coeffs_mut().iter_mut().enumerate() {
        if i > kmax && i < n - kmax {
            *c = Complex64::new(0.0, 0.0);
        }
    }
    f
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PseudoProductReport {
    pub seed: u64,
    pub trials: usize,
    /// `‖m̌‖_{L¹}` by quadrature.
    pub a_quadrature: f64,
    pub a_closed_form: f64,
    /// Largest `|direct − factored|` over the trials, relative to the
    /// `(2, 2, ∞)` right side.
    pub factorization_defect: f64,
    /// Per exponent triple: `max |form| / (A ‖f‖_p ‖g‖_q ‖h‖_r)`.
    pub c_obs: Vec<f64>,
    pub median: Vec<f64>,
}

/// Randomized suite of `trials` band-limited triples.
pub fn check_pseudo_product(kernel: &GaussianKernel, seed: u64, trials: usize) -> Result<PseudoProductReport> {
    if trials == 0 {
        return Err(LabError::InsufficientData("no pseudo-product trials".into()));
    }
    let grid = pseudo_product_grid();
    let a = kernel.inverse_l1_quadrature()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut defect = 0.0f64;
    let mut ratios: Vec<Vec<f64>> = vec![Vec::new(); EXPONENT_TRIPLES.len()];
    for _ in 0..trials {
        let [f, g, h] = SLOT_WIDTHS.map(|w| random_field(&grid, w, &mut rng));
        let form = form_direct(kernel, &f, &g, &h);
        let factored = form_factored(kernel, &f, &g, &h);
        let norms = [&f, &g, &h].map(|u| (l2_of_coeffs(u), sup_abs(u)));
        let pick = |(l2, sup): (f64, f64), p: u8| if p == 0 { sup } else { l2 };
        let rhs: Vec<f64> = EXPONENT_TRIPLES
            .iter()
            .map(|t| a * pick(norms[0], t.0) * pick(norms[1], t.1) * pick(norms[2], t.2))
            .collect();
        defect = defect.max((form - factored).norm() / rhs[0]);
        for (j, r) in rhs.iter().enumerate() {
            ratios[j].push(form.norm() / r);
        }
    }
    let mut c_obs = Vec::new();
    let mut median = Vec::new();
    for mut r in ratios {
        r.sort_by(f64::total_cmp);
        c_obs.push(*r.last().expect("trials > 0"));
        median.push(super::estimates::median_sorted(&r));
    }
    Ok(PseudoProductReport {
        seed,
        trials,
        a_quadrature: a,
        a_closed_form: kernel.inverse_l1_closed_form(),
        factorization_defect: defect,
        c_obs,
        median,
    })
}

/// Hölder constant `(2π)^{-3/2}` of the bound in this normalization.
pub fn holder_constant() -> f64 {
    (2.0 * PI).powf(-1.5)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_fields() {
        let grid = pseudo_product_grid();
        let z = SpectralField::zeros(&grid);
        let k = GaussianKernel::default();
        assert_eq!(form_direct(&k, &z, &z, &z).norm(), 0.0);
        assert_eq!(form_factored(&k, &z, &z, &z).norm(), 0.0);
    }

    #[test]
    fn l1_norm_of_inverse_transform() {
        for k in [GaussianKernel::default(), GaussianKernel { w1: 0.5, w2: 3.0 }] {
            let a = k.inverse_l1_quadrature().unwrap();
            assert!((a - 4.0 * PI * PI).abs() < 1e-9, "{a}");
        }
    }

    #[test]
    fn factorization_oracle() {
        let grid = pseudo_product_grid();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let k = GaussianKernel { w1: 0.7, w2: 1.3 };
        for _ in 0..5 {
            let [f, g, h] = SLOT_WIDTHS.map(|w| random_field(&grid, w, &mut rng));
            let a = form_direct(&k, &f, &g, &h);
            let b = form_factored(&k, &f, &g, &h);
            assert!((a - b).norm() <= 1e-10 * a.norm(), "{a} {b}");
        }
    }
}
