//! Smooth dyadic cutoffs and Littlewood–Paley projections.
//!
//! The low-pass profile is `φ(ξ) = S(2-|ξ|) / (S(2-|ξ|) + S(|ξ|-1))` with
//! `S(x) = e^{-1/x}` for `x > 0` and zero otherwise. It is `C^∞`, equal to 1
//! on `|ξ| ≤ 1` and to 0 on `|ξ| ≥ 2`. Band pieces are `ψ(ξ) = φ(ξ) - φ(2ξ)`,
//! `ψ_j(ξ) = ψ(2^{-j}ξ)` and `φ_j(ξ) = φ(2^{-j}ξ)`.

use num_complex::Complex64;

use super::field::SpectralField;

/// Dyadic cutoff family built on the mollified step above.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct DyadicCutoffs;

/// Which Littlewood–Paley piece to keep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Projection {
    /// `P_j`, multiplier `ψ_j`.
    Band,
    /// `P_{≤j}`, multiplier `φ_j`.
    Low,
    /// `P_{>j} = 1 - P_{≤j}`.
    High,
}

fn smooth_step(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        (-1.0 / x).exp()
    }
}

fn smooth_step_derivative(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        (-1.0 / x).exp() / (x * x)
    }
}

impl DyadicCutoffs {
    pub fn standard() -> Self {
        DyadicCutoffs
    }

    /// Label recorded in run manifests.
    pub fn description(&self) -> &'static str {
        "phi(xi)=S(2-|xi|)/(S(2-|xi|)+S(|xi|-1)), S(x)=exp(-1/x) for x>0"
    }

    pub fn phi(&self, xi: f64) -> f64 {
        let r = xi.abs();
        if r <= 1.0 {
            return 1.0;
        }
        if r >= 2.0 {
            return 0.0;
        }
        let a = smooth_step(2.0 - r);
        let b = smooth_step(r - 1.0);
        a / (a + b)
    }

    /// `dφ/dξ`.
    pub fn phi_derivative(&self, xi: f64) -> f64 {
        let r = xi.abs();
        if r <= 1.0 || r >= 2.0 {
            return 0.0;
        }
        let a = smooth_step(2.0 - r);
        let b = smooth_step(r - 1.0);
        let da = -smooth_step_derivative(2.0 - r);
        let db = smooth_step_derivative(r - 1.0);
        let dr = (da * b - a * db) / ((a + b) * (a + b));
        dr * xi.signum()
    }

    pub fn psi(&self, xi: f64) -> f64 {
        self.phi(xi) - self.phi(2.0 * xi)
    }

    pub fn phi_j(&self, j: i32, xi: f64) -> f64 {
        self.phi(xi * 2f64.powi(-j))
    }

    pub fn psi_j(&self, j: i32, xi: f64) -> f64 {
        self.psi(xi * 2f64.powi(-j))
    }

    /// Multiplier value of the requested projection at `ξ`.
    pub fn weight(&self, j: i32, mode: Projection, xi: f64) -> f64 {
        match mode {
            Projection::Band => self.psi_j(j, xi),
            Projection::Low => self.phi_j(j, xi),
            Projection::High => 1.0 - self.phi_j(j, xi),
        }
    }
}

/// Applies a Littlewood–Paley projection; the Nyquist mode is zeroed as for
/// every multiplier.
pub fn lp_project(
    field: &SpectralField,
    cutoffs: &DyadicCutoffs,
    j: i32,
    mode: Projection,
) -> SpectralField {
    let grid = field.grid();
    let coeffs: Vec<Complex64> = field
        .coeffs()
        .iter()
        .zip(grid.xi())
        .map(|(c, &xi)| c * cutoffs.weight(j, mode, xi))
        .collect();
    let mut out = SpectralField::from_coeffs(grid, coeffs).expect("same length");
    out.zero_nyquist();
    out
}

/// Largest `j` whose band `ψ_j` meets the grid's wavenumber range.
pub fn highest_active_band(field: &SpectralField) -> i32 {
    let xi_max = field.grid().dxi() * (field.grid().n_points() / 2) as f64;
    (xi_max.log2().ceil() as i32) + 1
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use proptest::prelude::*;

    use super::*;
    use crate::spectral::grid::make_grid;

    #[test]
    fn support_and_plateau() {
        let c = DyadicCutoffs::standard();
        assert_eq!(c.phi(0.0), 1.0);
        assert_eq!(c.phi(1.0), 1.0);
        assert_eq!(c.phi(2.0), 0.0);
        assert_eq!(c.phi(-2.5), 0.0);
        assert!(c.phi(1.5) > 0.0 && c.phi(1.5) < 1.0);
        assert!((c.phi(1.5) - 0.5).abs() < 1e-15);
        assert_eq!(c.psi(1.0), 1.0);
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let c = DyadicCutoffs::standard();
        for &x in &[1.1, 1.3, 1.5, 1.8, -1.4] {
            let h = 1e-6;
            let fd = (c.phi(x + h) - c.phi(x - h)) / (2.0 * h);
            assert!((fd - c.phi_derivative(x)).abs() < 1e-7, "x={x}");
        }
    }

    proptest! {
        #[test]
        fn partition_of_unity(xi in -1.0e4f64..1.0e4) {
            let c = DyadicCutoffs::standard();
            let top = 20;
            let total: f64 = c.phi(xi) + (1..=top).map(|j| c.psi_j(j, xi)).sum::<f64>();
            prop_assert!((total - 1.0).abs() < 1e-12);
        }

        #[test]
        fn band_support(xi in -1.0e3f64..1.0e3, j in -6i32..8) {
            let c = DyadicCutoffs::standard();
            let r = xi.abs();
            let lo = 2f64.powi(j - 1);
            let hi = 2f64.powi(j + 1);
            if r < lo || r > hi {
                prop_assert_eq!(c.psi_j(j, xi), 0.0);
            }
        }
    }

    fn single_mode(k: i64) -> SpectralField {
        let g = make_grid(64, 2.0 * PI).unwrap();
        let mut f = SpectralField::zeros(&g);
        f.set_coeff(k, Complex64::new(1.0, 0.0));
        f
    }

    #[test]
    fn single_mode_projections() {
        let c = DyadicCutoffs::standard();
        let f = single_mode(1);
        assert_eq!(lp_project(&f, &c, 0, Projection::Band), f);
        let zero = lp_project(&f, &c, 5, Projection::Band);
        assert!(zero.coeffs().iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn bands_reconstruct_field() {
        let c = DyadicCutoffs::standard();
        let g = make_grid(256, 40.0).unwrap();
        let mut f = SpectralField::from_fn(&g, |x| (-(x - 20.0).powi(2)).exp() * (3.0 * x).cos());
        f.zero_nyquist();
        for j0 in [-3, 0, 2] {
            let mut acc = lp_project(&f, &c, j0, Projection::Low);
            for j in (j0 + 1)..=highest_active_band(&f) {
                acc = acc.sum(&lp_project(&f, &c, j, Projection::Band)).unwrap();
            }
            let err = acc.difference(&f).unwrap().max_abs_coeff();
            assert!(err < 1e-12 * f.max_abs_coeff(), "j0={j0} err={err}");
            let hi = lp_project(&f, &c, j0, Projection::High);
            let lo = lp_project(&f, &c, j0, Projection::Low);
            let err = lo.sum(&hi).unwrap().difference(&f).unwrap().max_abs_coeff();
            assert!(err < 1e-15);
        }
    }

    #[test]
    fn distant_bands_are_orthogonal() {
        let c = DyadicCutoffs::standard();
        let g = make_grid(512, 30.0).unwrap();
        let f = SpectralField::from_fn(&g, |x| (-(x - 15.0).powi(2) / 0.1).exp());
        for j in -2..4 {
            for d in [2, 3, 5] {
                let pp = lp_project(&lp_project(&f, &c, j, Projection::Band), &c, j + d, Projection::Band);
                assert!(pp.coeffs().iter().all(|z| z.norm() == 0.0), "j={j} d={d}");
            }
            // Idempotence up to the squared cutoff.
            let once = lp_project(&f, &c, j, Projection::Band);
            let twice = lp_project(&once, &c, j, Projection::Band);
            for (i, &xi) in g.xi().iter().enumerate() {
                let w = c.psi_j(j, xi);
                let want = f.coeffs()[i] * (w * w);
                if i != g.nyquist_index() {
                    assert!((twice.coeffs()[i] - want).norm() < 1e-15);
                }
            }
        }
    }
}
