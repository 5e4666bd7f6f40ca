//! Registry of the simulated equations and the pseudospectral evaluator of
//! their nonlinear term.
//!
//! Every equation is written as `u_t = L(D) u + c ∂_x(u^{p+1}/(p+1))`, with a
//! skew linear symbol `L` and a nonlinearity of degree `p ∈ {1, 2}`.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};
use crate::spectral::{
    apply_mask, fractional_dispersion_symbol, fractional_dispersion_symbol_widened,
    whitham_l, DealiasRule, Grid, MultiplierSymbol, SpectralField,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EquationKind {
    /// `u_t - |D|^α u_x = -u² u_x`, `-1 < α < 0`.
    ModifiedFkdv,
    /// `u_t - |D|^α u_x = -u u_x`, `α ∈ (-1, 1) \ {0}`.
    Fkdv,
    /// `u_t + ℒ u_x = -u² u_x` with `ℒ` of symbol `(tanh ξ/ξ)^{1/2}`.
    ModifiedWhitham,
    /// `u_t + ℒ u_x = -u u_x`.
    Whitham,
    /// `u_t + ℒ_ε u_x + ε u² u_x = 0`, `ℒ_ε = l(√ε D)`.
    RescaledModifiedWhitham,
    /// `v_t + v_x + ε v² v_x + β ε v_xxx = 0` (β = 1 unless overridden).
    Mkdv,
    /// `u_t = -u² u_x`.
    ModifiedBurgers,
}

impl EquationKind {
    pub const ALL: [EquationKind; 7] = [
        EquationKind::ModifiedFkdv,
        EquationKind::Fkdv,
        EquationKind::ModifiedWhitham,
        EquationKind::Whitham,
        EquationKind::RescaledModifiedWhitham,
        EquationKind::Mkdv,
        EquationKind::ModifiedBurgers,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            EquationKind::ModifiedFkdv => "modified_fkdv",
            EquationKind::Fkdv => "fkdv",
            EquationKind::ModifiedWhitham => "modified_whitham",
            EquationKind::Whitham => "whitham",
            EquationKind::RescaledModifiedWhitham => "rescaled_modified_whitham",
            EquationKind::Mkdv => "mkdv",
            EquationKind::ModifiedBurgers => "modified_burgers",
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.as_str() == name)
            .ok_or_else(|| LabError::config(format!("unknown equation kind `{name}`")))
    }

    pub fn needs_alpha(self) -> bool {
        matches!(self, EquationKind::ModifiedFkdv | EquationKind::Fkdv)
    }

    pub fn needs_epsilon(self) -> bool {
        matches!(self, EquationKind::RescaledModifiedWhitham | EquationKind::Mkdv)
    }
}

impl fmt::Display for EquationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Parameters accepted by [`make_equation`]. Unused fields must be `None`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EquationParams {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    /// Coefficient β of the third-order term of `mkdv`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dispersion_coefficient: Option<f64>,
    /// Overrides the nonlinear coefficient `c` (0 gives the linear flow).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nonlinear_coefficient: Option<f64>,
}

impl EquationParams {
    pub fn alpha(alpha: f64) -> Self {
        EquationParams {
            alpha: Some(alpha),
            ..Default::default()
        }
    }

    pub fn epsilon(epsilon: f64) -> Self {
        EquationParams {
            epsilon: Some(epsilon),
            ..Default::default()
        }
    }

    pub fn with_nonlinear_coefficient(mut self, c: f64) -> Self {
        self.nonlinear_coefficient = Some(c);
        self
    }
}

/// One PDE: linear symbol plus a conservative nonlinearity `c ∂_x(u^{p+1}/(p+1))`.
#[derive(Debug, Clone)]
pub struct EquationSpec {
    pub kind: EquationKind,
    pub name: String,
    pub linear_symbol: MultiplierSymbol,
    pub degree: u32,
    pub coefficient: f64,
    pub alpha: Option<f64>,
    pub epsilon: Option<f64>,
    pub params: EquationParams,
    has_dispersion: bool,
}

impl EquationSpec {
    pub fn has_dispersion(&self) -> bool {
        self.has_dispersion
    }

    pub fn dealias_rule(&self) -> DealiasRule {
        DealiasRule::for_product_degree(self.degree as usize + 1)
    }

    /// Same equation with the nonlinearity switched off.
    pub fn linearized(&self) -> Result<EquationSpec> {
        make_equation(self.kind, self.params.with_nonlinear_coefficient(0.0))
    }
}

pub fn make_equation(kind: EquationKind, params: EquationParams) -> Result<EquationSpec> {
    let require_alpha = || {
        params
            .alpha
            .ok_or_else(|| LabError::config(format!("equation `{kind}` requires alpha")))
    };
    let require_epsilon = || {
        let e = params
            .epsilon
            .ok_or_else(|| LabError::config(format!("equation `{kind}` requires epsilon")))?;
        if !(e.is_finite() && e > 0.0) {
            return Err(LabError::config(format!("epsilon must be positive, got {e}")));
        }
        Ok(e)
    };
    if !kind.needs_alpha() && params.alpha.is_some() {
        return Err(LabError::config(format!("equation `{kind}` takes no alpha")));
    }
    if !kind.needs_epsilon() && params.epsilon.is_some() {
        return Err(LabError::config(format!("equation `{kind}` takes no epsilon")));
    }
    if kind != EquationKind::Mkdv && params.dispersion_coefficient.is_some() {
        return Err(LabError::config(format!(
            "equation `{kind}` takes no dispersion_coefficient"
        )));
    }

    let mut alpha = None;
    let mut epsilon = None;
    let (symbol, degree, default_c, has_dispersion) = match kind {
        EquationKind::ModifiedFkdv => {
            let a = require_alpha()?;
            alpha = Some(a);
            (fractional_dispersion_symbol(a)?, 2, -1.0, true)
        }
        EquationKind::Fkdv => {
            let a = require_alpha()?;
            alpha = Some(a);
            (fractional_dispersion_symbol_widened(a)?, 1, -1.0, true)
        }
        EquationKind::ModifiedWhitham | EquationKind::Whitham => {
            let p = if kind == EquationKind::Whitham { 1 } else { 2 };
            (whitham_linear_symbol(1.0), p, -1.0, true)
        }
        EquationKind::RescaledModifiedWhitham => {
            let e = require_epsilon()?;
            epsilon = Some(e);
            (whitham_linear_symbol(e.sqrt()), 2, -e, true)
        }
        EquationKind::Mkdv => {
            let e = require_epsilon()?;
            epsilon = Some(e);
            let beta = params.dispersion_coefficient.unwrap_or(1.0);
            if !beta.is_finite() {
                return Err(LabError::config("dispersion_coefficient must be finite"));
            }
            let symbol = MultiplierSymbol::new(
                format!("-i*xi + i*{beta}*{e}*xi^3"),
                move |xi| Complex64::new(0.0, -xi + beta * e * xi * xi * xi),
            );
            (symbol, 2, -e, true)
        }
        EquationKind::ModifiedBurgers => (MultiplierSymbol::zero(), 2, -1.0, false),
    };
    let coefficient = params.nonlinear_coefficient.unwrap_or(default_c);
    if !coefficient.is_finite() {
        return Err(LabError::config("nonlinear_coefficient must be finite"));
    }
    Ok(EquationSpec {
        kind,
        name: equation_name(kind, &params),
        linear_symbol: symbol,
        degree,
        coefficient,
        alpha,
        epsilon,
        params,
        has_dispersion,
    })
}

fn whitham_linear_symbol(scale: f64) -> MultiplierSymbol {
    MultiplierSymbol::new(format!("-i*xi*l({scale}*xi)"), move |xi| {
        Complex64::new(0.0, -xi * whitham_l(scale * xi))
    })
}

fn equation_name(kind: EquationKind, p: &EquationParams) -> String {
    let mut parts = Vec::new();
    if let Some(a) = p.alpha {
        parts.push(format!("alpha={a}"));
    }
    if let Some(e) = p.epsilon {
        parts.push(format!("epsilon={e}"));
    }
    if let Some(b) = p.dispersion_coefficient {
        parts.push(format!("beta={b}"));
    }
    if let Some(c) = p.nonlinear_coefficient {
        parts.push(format!("c={c}"));
    }
    if parts.is_empty() {
        kind.as_str().to_string()
    } else {
        format!("{}({})", kind.as_str(), parts.join(","))
    }
}

/// Reusable evaluator of `c ∂_x(u^{p+1}/(p+1))`.
///
/// The input is masked by the dealiasing rule for degree `p+1`, the power is
/// formed on a grid of twice the resolution, and the result is masked again.
/// The doubled grid makes the retained part of the product an exact
/// truncated convolution.
pub struct NonlinearEvaluator {
    grid: Grid,
    degree: u32,
    rule: DealiasRule,
    factor: Vec<Complex64>,
    padded: Vec<Complex64>,
}

impl NonlinearEvaluator {
    pub fn new(eq: &EquationSpec, grid: &Grid) -> Self {
        let pp1 = (eq.degree + 1) as f64;
        let factor = grid
            .xi()
            .iter()
            .map(|&xi| Complex64::new(0.0, eq.coefficient * xi / pp1))
            .collect();
        NonlinearEvaluator {
            grid: grid.clone(),
            degree: eq.degree,
            rule: eq.dealias_rule(),
            factor,
            padded: vec![Complex64::new(0.0, 0.0); 2 * grid.n_points()],
        }
    }

    pub fn rule(&self) -> DealiasRule {
        self.rule
    }

    /// Writes `N(u)` for coefficients `u` into `out`.
    pub fn eval(&mut self, u: &[Complex64], out: &mut [Complex64]) {
        let n = self.grid.n_points();
        debug_assert_eq!(u.len(), n);
        let kmax = self.rule.cutoff_index(n).min(n / 2 - 1);
        let zero = Complex64::new(0.0, 0.0);
        self.padded.iter_mut().for_each(|c| *c = zero);
        let m = 2 * n;
        self.padded[0] = u[0];
        for k in 1..=kmax {
            self.padded[k] = u[k];
            self.padded[m - k] = u[n - k];
        }
        let plans = self.grid.padded_plans();
        plans.inverse(&mut self.padded);
        let inv = self.grid.inverse_scale();
        let p1 = self.degree as i32 + 1;
        for c in self.padded.iter_mut() {
            let v = c.re * inv;
            *c = Complex64::new(v.powi(p1), 0.0);
        }
        plans.forward(&mut self.padded);
        // Forward scale on the doubled grid uses dx/2.
        let fwd = 0.5 * self.grid.forward_scale();
        out.iter_mut().for_each(|c| *c = zero);
        out[0] = self.padded[0] * fwd * self.factor[0];
        for k in 1..=kmax {
            out[k] = self.padded[k] * fwd * self.factor[k];
            out[n - k] = self.padded[m - k] * fwd * self.factor[n - k];
        }
        apply_mask(out, self.rule);
    }
}

/// `c ∂_x(u^{p+1}/(p+1))` as a new field.
pub fn nonlinearity(eq: &EquationSpec, u: &SpectralField) -> SpectralField {
    let mut ev = NonlinearEvaluator::new(eq, u.grid());
    let mut out = vec![Complex64::new(0.0, 0.0); u.grid().n_points()];
    ev.eval(u.coeffs(), &mut out);
    SpectralField::from_coeffs(u.grid(), out).expect("grid-sized output")
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::spectral::{dealias, make_grid};

    #[test]
    fn registry_examples() {
        let eq = make_equation(EquationKind::ModifiedFkdv, EquationParams::alpha(-0.5)).unwrap();
        assert_eq!(eq.degree, 2);
        assert_eq!(eq.coefficient, -1.0);
        assert!((eq.linear_symbol.evaluate(4.0) - Complex64::new(0.0, 2.0)).norm() < 1e-15);

        let eq = make_equation(EquationKind::Mkdv, EquationParams::epsilon(1.0)).unwrap();
        assert_eq!(eq.linear_symbol.evaluate(1.0), Complex64::new(0.0, 0.0));

        let eq = make_equation(EquationKind::ModifiedBurgers, EquationParams::default()).unwrap();
        assert!(!eq.has_dispersion());
        assert_eq!(eq.degree, 2);
        assert_eq!(eq.coefficient, -1.0);
        for xi in [-3.0, 0.0, 2.0] {
            assert_eq!(eq.linear_symbol.evaluate(xi), Complex64::new(0.0, 0.0));
        }
    }

    #[test]
    fn registry_errors() {
        assert!(EquationKind::parse("kdv5").is_err());
        assert!(make_equation(EquationKind::ModifiedFkdv, EquationParams::default()).is_err());
        assert!(make_equation(EquationKind::ModifiedFkdv, EquationParams::alpha(0.5)).is_err());
        assert!(make_equation(EquationKind::Fkdv, EquationParams::alpha(0.5)).is_ok());
        assert!(make_equation(EquationKind::Mkdv, EquationParams::default()).is_err());
        assert!(make_equation(EquationKind::Mkdv, EquationParams::epsilon(-0.1)).is_err());
        assert!(make_equation(EquationKind::ModifiedBurgers, EquationParams::alpha(-0.5)).is_err());
    }

    fn default_params(kind: EquationKind) -> EquationParams {
        match kind {
            k if k.needs_alpha() => EquationParams::alpha(-0.5),
            k if k.needs_epsilon() => EquationParams::epsilon(0.1),
            _ => EquationParams::default(),
        }
    }

    #[test]
    fn registry_is_exhaustive_and_skew() {
        let g = make_grid(64, 20.0).unwrap();
        let mut names = std::collections::HashSet::new();
        for kind in EquationKind::ALL {
            assert_eq!(EquationKind::parse(kind.as_str()).unwrap(), kind);
            let eq = make_equation(kind, default_params(kind)).unwrap();
            assert!(eq.linear_symbol.is_skew_on(&g, 0.0), "{}", eq.name);
            assert!(matches!(eq.degree, 1 | 2));
            assert!(names.insert(eq.name.clone()));
        }
    }

    #[test]
    fn constant_field_has_zero_nonlinearity() {
        let g = make_grid(32, 2.0 * PI).unwrap();
        let u = SpectralField::from_fn(&g, |_| 0.7);
        let eq = make_equation(EquationKind::ModifiedFkdv, EquationParams::alpha(-0.5)).unwrap();
        assert!(nonlinearity(&eq, &u).max_abs_coeff() < 1e-15);
    }

    #[test]
    fn quadratic_term_on_sine() {
        let g = make_grid(32, 2.0 * PI).unwrap();
        let u = SpectralField::from_fn(&g, f64::sin);
        let eq = make_equation(EquationKind::Fkdv, EquationParams::alpha(-0.5)).unwrap();
        let n = nonlinearity(&eq, &u).to_physical();
        for (x, v) in g.x().iter().zip(&n) {
            assert!((v + 0.5 * (2.0 * x).sin()).abs() < 1e-13);
        }
    }

    /// Band-limited random real field inside the cubic mask.
    fn random_field(grid: &Grid, rng: &mut ChaCha8Rng) -> SpectralField {
        let mut f = SpectralField::zeros(grid);
        let kmax = DealiasRule::OneHalf.cutoff_index(grid.n_points()) as i64;
        for k in 0..=kmax {
            let c = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            f.set_coeff(k, c);
            f.set_coeff(-k, c.conj());
        }
        f.set_coeff(0, Complex64::new(rng.gen_range(-1.0..1.0), 0.0));
        f
    }

    /// Direct truncated double convolution: c·(iξ/3)·(1/2π)Σ û û û Δξ².
    fn cubic_convolution_oracle(u: &SpectralField, c: f64) -> SpectralField {
        let g = u.grid();
        let kmax = DealiasRule::OneHalf.cutoff_index(g.n_points()) as i64;
        let dxi = g.dxi();
        let mut out = SpectralField::zeros(g);
        for k in -kmax..=kmax {
            let mut acc = Complex64::new(0.0, 0.0);
            for k2 in -kmax..=kmax {
                for k3 in -kmax..=kmax {
                    let k1 = k - k2 - k3;
                    if k1.abs() <= kmax {
                        acc += u.coeff(k1) * u.coeff(k2) * u.coeff(k3);
                    }
                }
            }
            let xi = k as f64 * dxi;
            out.set_coeff(k, acc * dxi * dxi / (2.0 * PI) * Complex64::new(0.0, c * xi / 3.0));
        }
        out
    }

    #[test]
    fn cubic_term_matches_convolution_oracle() {
        let g = make_grid(16, 7.0).unwrap();
        let eq = make_equation(EquationKind::ModifiedFkdv, EquationParams::alpha(-0.5)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..5 {
            let u = random_field(&g, &mut rng);
            let got = nonlinearity(&eq, &u);
            let want = cubic_convolution_oracle(&u, -1.0);
            let scale = want.max_abs_coeff();
            let err = got.difference(&want).unwrap().max_abs_coeff();
            assert!(err <= 1e-10 * scale, "err={err} scale={scale}");
        }
    }

    #[test]
    fn mean_and_skew_pairing() {
        let g = make_grid(64, 13.0).unwrap();
        let eq = make_equation(EquationKind::ModifiedFkdv, EquationParams::alpha(-0.5)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let u = random_field(&g, &mut rng);
            let nl = nonlinearity(&eq, &u);
            assert_eq!(nl.coeff(0), Complex64::new(0.0, 0.0));
            let um = dealias(&u, eq.dealias_rule());
            let pairing: Complex64 = nl
                .coeffs()
                .iter()
                .zip(um.coeffs())
                .map(|(a, b)| a * b.conj())
                .sum();
            let scale: f64 = nl.coeffs().iter().map(|c| c.norm()).sum::<f64>()
                * um.coeffs().iter().map(|c| c.norm()).fold(0.0, f64::max);
            assert!(pairing.re.abs() <= 1e-10 * scale, "pairing={pairing} scale={scale}");
        }
    }
}
