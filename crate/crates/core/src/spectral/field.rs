use num_complex::Complex64;

use super::grid::Grid;
use crate::error::{LabError, Result};

/// Fourier coefficients of a field on a periodic [`Grid`].
///
/// The coefficient of mode `ξ_k` approximates the continuous transform
/// `(1/√(2π)) ∫ u(x) e^{-ixξ_k} dx` over the box, i.e.
/// `coeff_k = (dx/√(2π)) Σ_m u(x_m) e^{-i x_m ξ_k}`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    grid: Grid,
    coeffs: Vec<Complex64>,
}

impl SpectralField {
    pub fn zeros(grid: &Grid) -> Self {
        SpectralField {
            grid: grid.clone(),
            coeffs: vec![Complex64::new(0.0, 0.0); grid.n_points()],
        }
    }

    /// Wraps coefficients given in storage (FFT) order.
    pub fn from_coeffs(grid: &Grid, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != grid.n_points() {
            return Err(LabError::Shape {
                expected: grid.n_points(),
                actual: coeffs.len(),
            });
        }
        Ok(SpectralField {
            grid: grid.clone(),
            coeffs,
        })
    }

    /// Forward transform of physical samples `u(x_m)`.
    pub fn from_physical(grid: &Grid, samples: &[f64]) -> Result<Self> {
        if samples.len() != grid.n_points() {
            return Err(LabError::Shape {
                expected: grid.n_points(),
                actual: samples.len(),
            });
        }
        let mut buf: Vec<Complex64> = samples.iter().map(|&u| Complex64::new(u, 0.0)).collect();
        grid.plans().forward(&mut buf);
        let s = grid.forward_scale();
        buf.iter_mut().for_each(|c| *c *= s);
        Ok(SpectralField {
            grid: grid.clone(),
            coeffs: buf,
        })
    }

    /// Samples the field at every grid point of `grid`.
    pub fn from_fn(grid: &Grid, f: impl Fn(f64) -> f64) -> Self {
        let samples: Vec<f64> = grid.x().into_iter().map(f).collect();
        Self::from_physical(grid, &samples).expect("sample count matches grid")
    }

    /// Inverse transform; returns the real part of the samples.
    pub fn to_physical(&self) -> Vec<f64> {
        self.to_physical_complex().into_iter().map(|c| c.re).collect()
    }

    pub fn to_physical_complex(&self) -> Vec<Complex64> {
        let mut buf = self.coeffs.clone();
        self.grid.plans().inverse(&mut buf);
        let s = self.grid.inverse_scale();
        buf.iter_mut().for_each(|c| *c *= s);
        buf
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// Coefficients in storage (FFT) order.
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// Coefficient of integer mode `k` (zero when off-grid).
    pub fn coeff(&self, k: i64) -> Complex64 {
        self.grid
            .index_of_mode(k)
            .map(|i| self.coeffs[i])
            .unwrap_or_default()
    }

    pub fn set_coeff(&mut self, k: i64, value: Complex64) {
        if let Some(i) = self.grid.index_of_mode(k) {
            self.coeffs[i] = value;
        }
    }

    /// Largest `|c(ξ) - conj(c(-ξ))|` over paired modes; zero for a real field.
    pub fn hermitian_defect(&self) -> f64 {
        let n = self.coeffs.len();
        (1..n / 2)
            .map(|i| (self.coeffs[i] - self.coeffs[n - i].conj()).norm())
            .chain(std::iter::once(self.coeffs[0].im.abs()))
            .fold(0.0, f64::max)
    }

    /// Projects onto real fields: averages each mode with the conjugate of
    /// its mirror and keeps only the real part of the zero and Nyquist modes.
    pub fn symmetrize(&mut self) {
        hermitian_project(&mut self.coeffs);
    }

    pub fn zero_nyquist(&mut self) {
        let i = self.grid.nyquist_index();
        self.coeffs[i] = Complex64::new(0.0, 0.0);
    }

    pub fn scaled(&self, factor: f64) -> Self {
        SpectralField {
            grid: self.grid.clone(),
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    /// `self - other`, coefficient-wise.
    pub fn difference(&self, other: &SpectralField) -> Result<Self> {
        ensure_same_grid(&self.grid, &other.grid)?;
        Ok(SpectralField {
            grid: self.grid.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn sum(&self, other: &SpectralField) -> Result<Self> {
        ensure_same_grid(&self.grid, &other.grid)?;
        Ok(SpectralField {
            grid: self.grid.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    /// Largest coefficient modulus.
    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }
}

pub(crate) fn hermitian_project(coeffs: &mut [Complex64]) {
    let n = coeffs.len();
    coeffs[0] = Complex64::new(coeffs[0].re, 0.0);
    coeffs[n / 2] = Complex64::new(coeffs[n / 2].re, 0.0);
    for i in 1..n / 2 {
        let avg = 0.5 * (coeffs[i] + coeffs[n - i].conj());
        coeffs[i] = avg;
        coeffs[n - i] = avg.conj();
    }
}

pub(crate) fn ensure_same_grid(a: &Grid, b: &Grid) -> Result<()> {
    if a != b {
        return Err(LabError::GridMismatch(format!(
            "n={} L={} vs n={} L={}",
            a.n_points(),
            a.box_length(),
            b.n_points(),
            b.box_length()
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::spectral::grid::make_grid;

    /// Textbook double-loop DFT with the crate's normalization.
    fn direct_dft(grid: &Grid, u: &[f64]) -> Vec<Complex64> {
        let s = grid.dx() / (2.0 * PI).sqrt();
        let x = grid.x();
        grid.xi()
            .iter()
            .map(|&xi| {
                x.iter()
                    .zip(u)
                    .map(|(&xm, &um)| um * Complex64::from_polar(1.0, -xm * xi))
                    .sum::<Complex64>()
                    * s
            })
            .collect()
    }

    #[test]
    fn cosine_has_two_modes() {
        let g = make_grid(32, 2.0 * PI).unwrap();
        let f = SpectralField::from_fn(&g, f64::cos);
        let expected = (PI / 2.0).sqrt();
        for k in -16..16 {
            let c = f.coeff(k);
            let want = if k.abs() == 1 { expected } else { 0.0 };
            assert!((c - Complex64::new(want, 0.0)).norm() < 1e-12, "k={k} c={c}");
        }
    }

    #[test]
    fn zero_samples_zero_coeffs() {
        let g = make_grid(16, 3.0).unwrap();
        let f = SpectralField::from_physical(&g, &[0.0; 16]).unwrap();
        assert!(f.coeffs().iter().all(|c| c.norm() == 0.0));
    }

    #[test]
    fn size_mismatch_is_shape_error() {
        let g = make_grid(16, 3.0).unwrap();
        let err = SpectralField::from_physical(&g, &[0.0; 15]).unwrap_err();
        assert!(matches!(err, LabError::Shape { expected: 16, actual: 15 }));
    }

    #[test]
    fn matches_direct_dft_and_round_trips() {
        let g = make_grid(16, 5.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let u: Vec<f64> = (0..16).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let f = SpectralField::from_physical(&g, &u).unwrap();
        let oracle = direct_dft(&g, &u);
        for (a, b) in f.coeffs().iter().zip(&oracle) {
            assert!((a - b).norm() < 1e-13);
        }
        let back = f.to_physical();
        let umax = u.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        for (a, b) in back.iter().zip(&u) {
            assert!((a - b).abs() <= 1e-12 * umax);
        }
        assert!(f.hermitian_defect() < 1e-15);
    }

    #[test]
    fn symmetrize_restores_real_field() {
        let g = make_grid(16, 1.0).unwrap();
        let mut f = SpectralField::zeros(&g);
        f.set_coeff(2, Complex64::new(1.0, 2.0));
        f.set_coeff(-2, Complex64::new(0.0, 0.0));
        assert!(f.hermitian_defect() > 0.0);
        f.symmetrize();
        assert!(f.hermitian_defect() == 0.0);
        assert_eq!(f.coeff(2), Complex64::new(0.5, 1.0));
        assert_eq!(f.coeff(-2), Complex64::new(0.5, -1.0));
    }
}
