use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use super::field::SpectralField;
use super::grid::Grid;
use crate::error::{LabError, Result};

type SymbolFn = dyn Fn(f64) -> Complex64 + Send + Sync;

/// A Fourier multiplier `m(ξ)`, with a label for manifests and reports.
#[derive(Clone)]
pub struct MultiplierSymbol {
    eval: Arc<SymbolFn>,
    description: String,
}

impl fmt::Debug for MultiplierSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MultiplierSymbol")
            .field("description", &self.description)
            .finish()
    }
}

impl MultiplierSymbol {
    pub fn new(
        description: impl Into<String>,
        eval: impl Fn(f64) -> Complex64 + Send + Sync + 'static,
    ) -> Self {
        MultiplierSymbol {
            eval: Arc::new(eval),
            description: description.into(),
        }
    }

    pub fn zero() -> Self {
        Self::new("0", |_| Complex64::new(0.0, 0.0))
    }

    pub fn identity() -> Self {
        Self::new("1", |_| Complex64::new(1.0, 0.0))
    }

    /// `iξ`, the symbol of `∂_x`.
    pub fn derivative() -> Self {
        Self::new("i*xi", |xi| Complex64::new(0.0, xi))
    }

    pub fn evaluate(&self, xi: f64) -> Complex64 {
        (self.eval)(xi)
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    /// Values at the grid wavenumbers, in storage order.
    pub fn sample(&self, grid: &Grid) -> Vec<Complex64> {
        grid.xi().iter().map(|&xi| self.evaluate(xi)).collect()
    }

    /// True when `m` is purely imaginary and odd at every grid wavenumber
    /// (Nyquist excluded), so that `e^{t m}` is unitary.
    pub fn is_skew_on(&self, grid: &Grid, tol: f64) -> bool {
        let n = grid.n_points();
        let xi = grid.xi();
        (0..n).filter(|&i| i != n / 2).all(|i| {
            let m = self.evaluate(xi[i]);
            let mirror = self.evaluate(-xi[i]);
            m.re.abs() <= tol && (mirror - m.conj()).norm() <= tol * (1.0 + m.norm())
        })
    }
}

/// `coeff_out(ξ) = m(ξ)·coeff_in(ξ)`; the Nyquist mode is zeroed.
pub fn apply_multiplier(field: &SpectralField, m: &MultiplierSymbol) -> SpectralField {
    let grid = field.grid();
    let coeffs = field
        .coeffs()
        .iter()
        .zip(grid.xi())
        .map(|(c, &xi)| c * m.evaluate(xi))
        .collect();
    let mut out = SpectralField::from_coeffs(grid, coeffs).expect("same length");
    out.zero_nyquist();
    out
}

/// Applies the exponential `e^{t·m(ξ)}`; Nyquist zeroed.
pub fn apply_exponential(field: &SpectralField, m: &MultiplierSymbol, t: f64) -> SpectralField {
    let grid = field.grid();
    let coeffs = field
        .coeffs()
        .iter()
        .zip(grid.xi())
        .map(|(c, &xi)| c * exp_of(t, m.evaluate(xi)))
        .collect();
    let mut out = SpectralField::from_coeffs(grid, coeffs).expect("same length");
    out.zero_nyquist();
    out
}

/// `e^{t·m}`, taking the unimodular fast path for purely imaginary `m`.
pub(crate) fn exp_of(t: f64, m: Complex64) -> Complex64 {
    if m.re == 0.0 {
        Complex64::from_polar(1.0, t * m.im)
    } else {
        (m * t).exp()
    }
}

/// `i·sign(ξ)|ξ|^{1+α}`, the symbol of `|D|^α ∂_x`, for `-1 < α < 0`.
pub fn fractional_dispersion_symbol(alpha: f64) -> Result<MultiplierSymbol> {
    if !(alpha > -1.0 && alpha < 0.0) {
        return Err(LabError::config(format!(
            "alpha must lie in (-1, 0), got {alpha}"
        )));
    }
    Ok(fractional_symbol_unchecked(alpha))
}

/// Same symbol on the widened range `(-1, 1) \ {0}` used for the
/// quadratic equation and the linear estimates.
pub fn fractional_dispersion_symbol_widened(alpha: f64) -> Result<MultiplierSymbol> {
    if !(alpha > -1.0 && alpha < 1.0) || alpha == 0.0 {
        return Err(LabError::config(format!(
            "alpha must lie in (-1, 1) without 0, got {alpha}"
        )));
    }
    Ok(fractional_symbol_unchecked(alpha))
}

fn fractional_symbol_unchecked(alpha: f64) -> MultiplierSymbol {
    MultiplierSymbol::new(format!("i*xi*|xi|^({alpha})"), move |xi| {
        Complex64::new(0.0, fractional_frequency(alpha, xi))
    })
}

/// `ξ|ξ|^α`, continuous at zero since `1 + α > 0`.
pub fn fractional_frequency(alpha: f64, xi: f64) -> f64 {
    if xi == 0.0 {
        0.0
    } else {
        xi.signum() * xi.abs().powf(1.0 + alpha)
    }
}

/// `l(x) = (tanh|x| / |x|)^{1/2}`, with `l(0) = 1`.
pub fn whitham_l(x: f64) -> f64 {
    let a = x.abs();
    if a == 0.0 {
        1.0
    } else {
        (a.tanh() / a).sqrt()
    }
}

/// Scalar symbol `l(√ε ξ)` of the water-wave operator; `None` gives the
/// unscaled operator with symbol `(tanh ξ / ξ)^{1/2}`.
pub fn whitham_symbol(epsilon: Option<f64>) -> Result<MultiplierSymbol> {
    let scale = match epsilon {
        None => 1.0,
        Some(e) if e.is_finite() && e > 0.0 => e.sqrt(),
        Some(e) => {
            return Err(LabError::config(format!(
                "epsilon must be positive, got {e}"
            )))
        }
    };
    let label = match epsilon {
        None => "l(xi)".to_string(),
        Some(e) => format!("l(sqrt({e})*xi)"),
    };
    Ok(MultiplierSymbol::new(label, move |xi| {
        Complex64::new(whitham_l(scale * xi), 0.0)
    }))
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use super::*;
    use crate::spectral::grid::make_grid;

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn fractional_symbol_values() {
        let m = fractional_dispersion_symbol(-0.5).unwrap();
        assert!(close(m.evaluate(4.0), Complex64::new(0.0, 2.0), 1e-15));
        assert!(close(m.evaluate(-1.0), Complex64::new(0.0, -1.0), 1e-15));
        for a in [-0.9, -0.5, -0.1] {
            let m = fractional_dispersion_symbol(a).unwrap();
            assert_eq!(m.evaluate(0.0), Complex64::new(0.0, 0.0));
        }
    }

    #[test]
    fn fractional_symbol_range() {
        assert!(fractional_dispersion_symbol(0.5).is_err());
        assert!(fractional_dispersion_symbol(-1.0).is_err());
        assert!(fractional_dispersion_symbol(0.0).is_err());
        assert!(fractional_dispersion_symbol_widened(0.5).is_ok());
        assert!(fractional_dispersion_symbol_widened(0.0).is_err());
        assert!(fractional_dispersion_symbol_widened(1.0).is_err());
    }

    #[test]
    fn whitham_values() {
        let l = whitham_symbol(None).unwrap();
        assert_eq!(l.evaluate(0.0).re, 1.0);
        assert!((l.evaluate(100.0).re - 0.1).abs() < 1e-12);
        let l4 = whitham_symbol(Some(4.0)).unwrap();
        assert!((l4.evaluate(50.0).re - 0.1).abs() < 1e-12);
        assert!(whitham_symbol(Some(0.0)).is_err());
    }

    #[test]
    fn derivative_of_sine_is_cosine() {
        let g = make_grid(32, 2.0 * PI).unwrap();
        let s = SpectralField::from_fn(&g, f64::sin);
        let d = apply_multiplier(&s, &MultiplierSymbol::derivative()).to_physical();
        for (x, v) in g.x().iter().zip(&d) {
            assert!((v - x.cos()).abs() < 1e-13);
        }
    }

    #[test]
    fn identity_multiplier() {
        let g = make_grid(16, 2.0 * PI).unwrap();
        let mut s = SpectralField::from_fn(&g, |x| (2.0 * x).sin() + 0.3);
        s.zero_nyquist();
        let out = apply_multiplier(&s, &MultiplierSymbol::identity());
        assert_eq!(out, s);
    }

    #[test]
    fn half_power_derivative_on_single_mode() {
        let g = make_grid(16, 2.0 * PI).unwrap();
        let mut s = SpectralField::zeros(&g);
        s.set_coeff(4, Complex64::new(1.0, 0.0));
        let m = MultiplierSymbol::new("i xi |xi|^-1/2", |xi| {
            Complex64::new(0.0, fractional_frequency(-0.5, xi))
        });
        let out = apply_multiplier(&s, &m);
        assert!(close(out.coeff(4), Complex64::new(0.0, 2.0), 1e-15));
    }

    #[test]
    fn dispersion_symbols_are_skew() {
        let g = make_grid(64, 20.0).unwrap();
        assert!(fractional_dispersion_symbol(-0.3).unwrap().is_skew_on(&g, 0.0));
        assert!(MultiplierSymbol::derivative().is_skew_on(&g, 0.0));
    }
}
