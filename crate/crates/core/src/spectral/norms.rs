use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::field::{ensure_same_grid, SpectralField};
use crate::error::Result;

/// Default Sobolev index used by diagnostics.
pub const DEFAULT_SOBOLEV_INDEX: f64 = 8.0;
/// Default weight exponent of the Z-norm.
pub const DEFAULT_Z_WEIGHT: f64 = 10.0;
/// Boundary mass fraction above which the weighted norm is flagged.
pub const BOUNDARY_MASS_THRESHOLD: f64 = 1e-6;
/// Share of the box (split evenly between both ends) counted as boundary.
pub const BOUNDARY_FRACTION: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum NormKind {
    L2,
    Linf,
    L1,
    /// `(Σ (1+ξ²)^s |c(ξ)|² Δξ)^{1/2}`.
    Sobolev(f64),
    /// `max_ξ (1+|ξ|)^w |c(ξ)|`.
    Z(f64),
    /// `‖⟨x - L/2⟩ u‖_{H¹}`.
    H11,
}

/// Raised when a weighted-space norm is evaluated on a field that is not
/// well localized inside the periodic box.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryMassWarning {
    pub boundary_mass_fraction: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormValue {
    pub value: f64,
    pub warning: Option<BoundaryMassWarning>,
}

pub fn compute_norm(field: &SpectralField, kind: NormKind) -> NormValue {
    let value = match kind {
        NormKind::L2 => l2_physical(&field.to_physical(), field.grid().dx()),
        NormKind::Linf => field.to_physical().iter().fold(0.0f64, |m, v| m.max(v.abs())),
        NormKind::L1 => field.to_physical().iter().map(|v| v.abs()).sum::<f64>() * field.grid().dx(),
        NormKind::Sobolev(s) => sobolev_norm(field, s),
        NormKind::Z(w) => z_norm(field, w),
        NormKind::H11 => return h11_norm(field),
    };
    NormValue {
        value,
        warning: None,
    }
}

/// Shorthand for [`compute_norm`] when the warning is not needed.
pub fn norm(field: &SpectralField, kind: NormKind) -> f64 {
    compute_norm(field, kind).value
}

fn l2_physical(samples: &[f64], dx: f64) -> f64 {
    (samples.iter().map(|v| v * v).sum::<f64>() * dx).sqrt()
}

/// Spectral-side L² norm, `(Σ |c|² Δξ)^{1/2}`.
pub fn l2_spectral(field: &SpectralField) -> f64 {
    (field.coeffs().iter().map(|c| c.norm_sqr()).sum::<f64>() * field.grid().dxi()).sqrt()
}

pub fn sobolev_norm(field: &SpectralField, s: f64) -> f64 {
    let sum: f64 = field
        .coeffs()
        .iter()
        .zip(field.grid().xi())
        .map(|(c, &xi)| (1.0 + xi * xi).powf(s) * c.norm_sqr())
        .sum();
    (sum * field.grid().dxi()).sqrt()
}

pub fn z_norm(field: &SpectralField, weight: f64) -> f64 {
    weighted_sup(field.coeffs(), field.grid().xi(), weight)
}

pub(crate) fn weighted_sup(coeffs: &[Complex64], xi: &[f64], weight: f64) -> f64 {
    coeffs
        .iter()
        .zip(xi)
        .map(|(c, &x)| (1.0 + x.abs()).powf(weight) * c.norm())
        .fold(0.0, f64::max)
}

/// Share of `∫u²` carried by the outer [`BOUNDARY_FRACTION`] of the box.
pub fn boundary_mass_fraction(field: &SpectralField) -> f64 {
    let u = field.to_physical();
    let xc = field.grid().x_centered();
    let edge = 0.5 * field.grid().box_length() * (1.0 - BOUNDARY_FRACTION);
    let (outer, total) = u.iter().zip(&xc).fold((0.0, 0.0), |(o, t), (v, x)| {
        let w = v * v;
        (if x.abs() >= edge { o + w } else { o }, t + w)
    });
    if total == 0.0 {
        0.0
    } else {
        outer / total
    }
}

/// `‖⟨x_c⟩u‖_{H¹}` with `x_c` the box-centred coordinate.
pub fn h11_norm(field: &SpectralField) -> NormValue {
    let grid = field.grid();
    let u = field.to_physical();
    let weighted: Vec<f64> = u
        .iter()
        .zip(grid.x_centered())
        .map(|(v, x)| v * (1.0 + x * x).sqrt())
        .collect();
    let wf = SpectralField::from_physical(grid, &weighted).expect("grid-sized samples");
    let frac = boundary_mass_fraction(field);
    NormValue {
        value: sobolev_norm(&wf, 1.0),
        warning: (frac > BOUNDARY_MASS_THRESHOLD).then_some(BoundaryMassWarning {
            boundary_mass_fraction: frac,
        }),
    }
}

/// `‖(1+|ξ|)^w (a - b)‖_∞`.
pub fn weighted_sup_distance(a: &SpectralField, b: &SpectralField, weight: f64) -> Result<f64> {
    ensure_same_grid(a.grid(), b.grid())?;
    Ok(a.coeffs()
        .iter()
        .zip(b.coeffs())
        .zip(a.grid().xi())
        .map(|((x, y), &xi)| (1.0 + xi.abs()).powf(weight) * (x - y).norm())
        .fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use proptest::prelude::*;

    use super::*;
    use crate::spectral::grid::make_grid;
    use crate::spectral::symbol::{apply_exponential, fractional_dispersion_symbol};

    #[test]
    fn sine_norms() {
        let g = make_grid(64, 2.0 * PI).unwrap();
        let s = SpectralField::from_fn(&g, f64::sin);
        assert!((norm(&s, NormKind::L2) - PI.sqrt()).abs() < 1e-13);
        assert!((norm(&s, NormKind::Sobolev(1.0)) - (2.0 * PI).sqrt()).abs() < 1e-13);
        assert!((norm(&s, NormKind::Linf) - 1.0).abs() < 1e-3);
        assert!((norm(&s, NormKind::L1) - 4.0).abs() < 1e-2);
    }

    #[test]
    fn z_norm_single_mode() {
        let g = make_grid(16, 2.0 * PI).unwrap();
        let mut f = SpectralField::zeros(&g);
        f.set_coeff(1, Complex64::new(1.0, 0.0));
        assert!((norm(&f, NormKind::Z(10.0)) - 1024.0).abs() < 1e-12);
    }

    #[test]
    fn z_norm_dilation() {
        // Coefficients moved to doubled wavenumbers: Z picks up (1+2|ξ|)^w.
        let g = make_grid(64, 2.0 * PI).unwrap();
        let mut f = SpectralField::zeros(&g);
        let mut f2 = SpectralField::zeros(&g);
        for k in -7i64..=7 {
            let c = Complex64::new((-(k * k) as f64 / 9.0).exp(), 0.1 * k as f64);
            f.set_coeff(k, c);
            f2.set_coeff(2 * k, c);
        }
        let w = 10.0;
        let direct = (-7i64..=7)
            .map(|k| (1.0 + 2.0 * (k as f64).abs()).powf(w) * f.coeff(k).norm())
            .fold(0.0, f64::max);
        assert!((norm(&f2, NormKind::Z(w)) - direct).abs() < 1e-9 * direct);
        assert!(norm(&f2, NormKind::Z(w)) >= norm(&f, NormKind::Z(w)));
    }

    #[test]
    fn h11_of_localized_field() {
        let g = make_grid(512, 40.0).unwrap();
        let f = SpectralField::from_fn(&g, |x| (-(x - 20.0).powi(2)).exp());
        let v = compute_norm(&f, NormKind::H11);
        assert!(v.warning.is_none());
        // ‖⟨x⟩e^{-x²}‖²_{H¹} = ∫(1+x²)e^{-2x²} + ∫(d/dx(⟨x⟩e^{-x²}))², by quadrature.
        let n = 200_000;
        let h = 20.0 / n as f64;
        let mut acc = 0.0;
        for i in 0..n {
            let x = -10.0 + (i as f64 + 0.5) * h;
            let r = (1.0 + x * x).sqrt();
            let e = (-x * x).exp();
            let d = (x / r) * e - 2.0 * x * r * e;
            acc += (r * r * e * e + d * d) * h;
        }
        assert!((v.value - acc.sqrt()).abs() < 1e-8, "{} vs {}", v.value, acc.sqrt());
    }

    #[test]
    fn h11_flags_delocalized_field() {
        let g = make_grid(64, 2.0 * PI).unwrap();
        let f = SpectralField::from_fn(&g, f64::sin);
        let v = compute_norm(&f, NormKind::H11);
        assert!(v.warning.is_some());
        assert!(v.value.is_finite());
    }

    proptest! {
        #[test]
        fn parseval(amps in proptest::collection::vec(-1.0f64..1.0, 8), l in 1.0f64..50.0) {
            let g = make_grid(64, l).unwrap();
            let f = SpectralField::from_fn(&g, |x| {
                amps.iter().enumerate().map(|(k, a)| a * (2.0 * PI * (k as f64) * x / l + k as f64).cos()).sum()
            });
            let p = norm(&f, NormKind::L2);
            let s = l2_spectral(&f);
            prop_assert!((p - s).abs() <= 1e-10 * p.max(1e-300));
        }

        #[test]
        fn unitary_propagation(t in -50.0f64..50.0, alpha in -0.95f64..-0.05) {
            let g = make_grid(128, 30.0).unwrap();
            let f = SpectralField::from_fn(&g, |x| (-(x - 15.0).powi(2)).exp() * (1.0 + x.sin()));
            let mut f0 = f.clone();
            f0.zero_nyquist();
            let m = fractional_dispersion_symbol(alpha).unwrap();
            let out = apply_exponential(&f0, &m, t);
            let a = l2_spectral(&f0);
            prop_assert!((l2_spectral(&out) - a).abs() <= 1e-12 * a);
        }
    }
}
