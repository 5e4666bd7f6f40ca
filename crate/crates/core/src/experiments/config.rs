use std::f64::consts::PI;

use serde::{Deserialize, Deserializer, Serialize};

use crate::config::parse_length;
use crate::diagnostics::PhasePrefactor;
use crate::equations::{make_equation, EquationKind, EquationParams, EquationSpec};
use crate::error::{LabError, Result};
use crate::integrator::SolverConfig;
use crate::lemmas::LemmaCheck;
use crate::spectral::{make_grid, Grid, SpectralField};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Study {
    Simulate,
    Decay,
    Scattering,
    Longwave,
    Shock,
    Norms,
    Lemmas,
}

impl Study {
    pub const ALL: [Study; 7] = [
        Study::Simulate,
        Study::Decay,
        Study::Scattering,
        Study::Longwave,
        Study::Shock,
        Study::Norms,
        Study::Lemmas,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Study::Simulate => "simulate",
            Study::Decay => "decay",
            Study::Scattering => "scattering",
            Study::Longwave => "longwave",
            Study::Shock => "shock",
            Study::Norms => "norms",
            Study::Lemmas => "lemmas",
        }
    }

    pub fn parse(name: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|s| s.as_str() == name)
            .ok_or_else(|| LabError::config(format!("unknown study `{name}`")))
    }
}

/// `[equation]` section: a kind plus the parameters it accepts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EquationConfig {
    pub kind: EquationKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dispersion_coefficient: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nonlinear_coefficient: Option<f64>,
}

impl EquationConfig {
    pub fn modified_fkdv(alpha: f64) -> Self {
        EquationConfig {
            kind: EquationKind::ModifiedFkdv,
            alpha: Some(alpha),
            epsilon: None,
            dispersion_coefficient: None,
            nonlinear_coefficient: None,
        }
    }

    pub fn params(&self) -> EquationParams {
        EquationParams {
            alpha: self.alpha,
            epsilon: self.epsilon,
            dispersion_coefficient: self.dispersion_coefficient,
            nonlinear_coefficient: self.nonlinear_coefficient,
        }
    }

    pub fn build(&self) -> Result<EquationSpec> {
        make_equation(self.kind, self.params())
    }
}

/// `[initial]` section. Profiles are centred at `L/2` unless `center` is set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "profile", rename_all = "snake_case", deny_unknown_fields)]
pub enum InitialData {
    /// `a·exp(-(x-x₀)²/w²)`.
    Gaussian {
        amplitude: f64,
        width: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        center: Option<f64>,
    },
    /// `a·sech²((x-x₀)/w)`.
    Sech2 {
        amplitude: f64,
        width: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        center: Option<f64>,
    },
    /// `a·sin(2π m x / L)`.
    Sine { amplitude: f64, mode: u32 },
    /// Grid samples, one per point.
    Samples { values: Vec<f64> },
}

impl InitialData {
    pub fn gaussian(amplitude: f64, width: f64) -> Self {
        InitialData::Gaussian {
            amplitude,
            width,
            center: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let check = |name: &str, v: f64, positive: bool| {
            if !v.is_finite() || (positive && v <= 0.0) {
                Err(LabError::config(format!("initial.{name} is invalid: {v}")))
            } else {
                Ok(())
            }
        };
        match self {
            InitialData::Gaussian {
                amplitude,
                width,
                center,
            }
            | InitialData::Sech2 {
                amplitude,
                width,
                center,
            } => {
                check("amplitude", *amplitude, false)?;
                check("width", *width, true)?;
                if let Some(c) = center {
                    check("center", *c, false)?;
                }
            }
            InitialData::Sine { amplitude, .. } => check("amplitude", *amplitude, false)?,
            InitialData::Samples { values } => {
                if values.iter().any(|v| !v.is_finite()) {
                    return Err(LabError::config("initial.values must be finite"));
                }
            }
        }
        Ok(())
    }

    /// Samples the profile on `grid`; the Nyquist coefficient is dropped.
    pub fn build(&self, grid: &Grid) -> Result<SpectralField> {
        let l = grid.box_length();
        let mut field = match self {
            InitialData::Gaussian {
                amplitude,
                width,
                center,
            } => {
                let c = center.unwrap_or(0.5 * l);
                SpectralField::from_fn(grid, |x| amplitude * (-((x - c) / width).powi(2)).exp())
            }
            InitialData::Sech2 {
                amplitude,
                width,
                center,
            } => {
                let c = center.unwrap_or(0.5 * l);
                SpectralField::from_fn(grid, |x| amplitude / ((x - c) / width).cosh().powi(2))
            }
            InitialData::Sine { amplitude, mode } => {
                let k = 2.0 * PI * *mode as f64 / l;
                SpectralField::from_fn(grid, |x| amplitude * (k * x).sin())
            }
            InitialData::Samples { values } => SpectralField::from_physical(grid, values)?,
        };
        field.zero_nyquist();
        Ok(field)
    }
}

fn de_length<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Number(f64),
        Text(String),
    }
    match Repr::deserialize(d)? {
        Repr::Number(v) => Ok(v),
        Repr::Text(s) => parse_length(&s).map_err(serde::de::Error::custom),
    }
}

/// `[grid]` section. `box_length` accepts a number or text such as `"256pi"`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub n_points: usize,
    #[serde(deserialize_with = "de_length")]
    pub box_length: f64,
}

impl GridSpec {
    pub fn new(n_points: usize, box_length: f64) -> Self {
        GridSpec {
            n_points,
            box_length,
        }
    }

    pub fn build(&self) -> Result<Grid> {
        make_grid(self.n_points, self.box_length)
    }
}

/// `[solver]` section.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSpec {
    pub dt_max: f64,
    pub cfl_coefficient: f64,
    /// Geometric snapshots `2^{j/m}` from `t = 1`.
    pub snapshots_per_octave: u32,
}

impl Default for SolverSpec {
    fn default() -> Self {
        SolverSpec {
            dt_max: 0.05,
            cfl_coefficient: 0.5,
            snapshots_per_octave: 8,
        }
    }
}

impl SolverSpec {
    pub fn solver_config(&self, t_end: f64, snapshot_times: Vec<f64>) -> Result<SolverConfig> {
        let cfg = SolverConfig {
            dt_max: self.dt_max,
            cfl_coefficient: self.cfl_coefficient,
            t_end,
            snapshot_times,
            blowup_gradient: None,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.snapshots_per_octave == 0 {
            return Err(LabError::config("solver.snapshots_per_octave must be positive"));
        }
        self.solver_config(0.0, vec![]).map(|_| ())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateParams {
    pub t_end: f64,
    /// Spacing of the recorded snapshots.
    pub snapshot_interval: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecayParams {
    pub t_end: f64,
    pub t_min: f64,
    pub t_max: f64,
    pub exponent_min: f64,
    pub exponent_max: f64,
    pub min_r_squared: f64,
    pub l2_drift_max: f64,
    /// Upper bound on the measured ε₀; no gate when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon_bar: Option<f64>,
    /// Extra grids on which the run is repeated; verdicts must agree.
    #[serde(default)]
    pub stability_grids: Vec<GridSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScatteringParams {
    pub t_end: f64,
    pub z_weight: f64,
    pub prefactor: PhasePrefactor,
    /// First `m` from which `d_m(g)` must be nonincreasing.
    pub monotone_from: u32,
    pub final_ratio_max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LongwaveParams {
    pub epsilons: Vec<f64>,
    pub orders: Vec<u32>,
    pub t_compare: f64,
    pub ratio_min: f64,
    pub ratio_max: f64,
    pub envelope_t_min: f64,
    pub envelope_max_variation: f64,
    pub sample_interval: f64,
    /// β in the third-order term of the comparison equation.
    pub mkdv_dispersion_coefficient: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShockParams {
    pub blowup_factor: f64,
    /// Grid sizes of the refinement ladder (two or more).
    pub ladder: Vec<usize>,
    pub time_tolerance: f64,
    pub refinement_tolerance: f64,
    /// Horizon of the dispersionless runs, as a multiple of the predicted time.
    pub horizon_factor: f64,
    /// Horizon used when no compression is predicted.
    pub fallback_t_end: f64,
    pub sample_interval: f64,
    /// Dispersive contrast run; skipped when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub contrast: Option<ContrastSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContrastSpec {
    pub equation: EquationConfig,
    /// Sup norm of the rescaled initial datum.
    pub amplitude: f64,
    /// Horizon as a multiple of the predicted shock time of the rescaled datum.
    pub horizon_factor: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NormParams {
    pub t_end: f64,
    pub t_min: f64,
    pub t_max: f64,
    pub sobolev_index: f64,
    pub slope_max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LemmaParams {
    pub checks: Vec<LemmaCheck>,
    pub trilinear_seeds: u32,
    pub pseudo_product_trials: u32,
}

/// Fully resolved configuration of one study.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub study: Study,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub equation: Option<EquationConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial: Option<InitialData>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub solver: Option<SolverSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub simulate: Option<SimulateParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decay: Option<DecayParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scattering: Option<ScatteringParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub longwave: Option<LongwaveParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shock: Option<ShockParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub norms: Option<NormParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lemmas: Option<LemmaParams>,
}

impl ExperimentConfig {
    /// Default configuration of `study`.
    pub fn defaults(study: Study) -> Self {
        let mut cfg = ExperimentConfig {
            study,
            seed: 0,
            equation: None,
            initial: None,
            grid: None,
            solver: None,
            simulate: None,
            decay: None,
            scattering: None,
            longwave: None,
            shock: None,
            norms: None,
            lemmas: None,
        };
        let decay_setup = |cfg: &mut ExperimentConfig| {
            cfg.equation = Some(EquationConfig::modified_fkdv(-0.5));
            cfg.initial = Some(InitialData::gaussian(0.1, 0.5));
            cfg.grid = Some(GridSpec::new(1 << 13, 256.0 * PI));
            cfg.solver = Some(SolverSpec::default());
        };
        match study {
            Study::Simulate => {
                cfg.equation = Some(EquationConfig::modified_fkdv(-0.5));
                cfg.initial = Some(InitialData::gaussian(0.1, 1.0));
                cfg.grid = Some(GridSpec::new(1 << 10, 64.0 * PI));
                cfg.solver = Some(SolverSpec::default());
                cfg.simulate = Some(SimulateParams {
                    t_end: 10.0,
                    snapshot_interval: 1.0,
                });
            }
            Study::Decay => {
                decay_setup(&mut cfg);
                cfg.decay = Some(DecayParams {
                    t_end: 100.0,
                    t_min: 5.0,
                    t_max: 100.0,
                    exponent_min: -0.6,
                    exponent_max: -0.4,
                    min_r_squared: 0.95,
                    l2_drift_max: 1e-6,
                    epsilon_bar: None,
                    stability_grids: vec![
                        GridSpec::new(1 << 14, 256.0 * PI),
                        GridSpec::new(1 << 14, 512.0 * PI),
                    ],
                });
            }
            Study::Scattering => {
                decay_setup(&mut cfg);
                cfg.scattering = Some(ScatteringParams {
                    t_end: 128.0,
                    z_weight: 2.0,
                    prefactor: PhasePrefactor::Resonant,
                    monotone_from: 3,
                    final_ratio_max: 0.5,
                });
            }
            Study::Norms => {
                decay_setup(&mut cfg);
                cfg.norms = Some(NormParams {
                    t_end: 100.0,
                    t_min: 10.0,
                    t_max: 100.0,
                    sobolev_index: 8.0,
                    slope_max: 0.05,
                });
            }
            Study::Longwave => {
                cfg.initial = Some(InitialData::Sech2 {
                    amplitude: 1.0,
                    width: 1.5,
                    center: None,
                });
                cfg.grid = Some(GridSpec::new(1 << 11, 64.0 * PI));
                cfg.solver = Some(SolverSpec {
                    dt_max: 0.02,
                    ..SolverSpec::default()
                });
                cfg.longwave = Some(LongwaveParams {
                    epsilons: vec![0.1, 0.05],
                    orders: vec![0, 1],
                    t_compare: 5.0,
                    ratio_min: 2.5,
                    ratio_max: 6.0,
                    envelope_t_min: 2.0,
                    envelope_max_variation: 2.0,
                    sample_interval: 0.25,
                    mkdv_dispersion_coefficient: 1.0 / 6.0,
                });
            }
            Study::Shock => {
                cfg.equation = Some(EquationConfig {
                    kind: EquationKind::ModifiedBurgers,
                    alpha: None,
                    epsilon: None,
                    dispersion_coefficient: None,
                    nonlinear_coefficient: None,
                });
                cfg.initial = Some(InitialData::Sine {
                    amplitude: 0.5,
                    mode: 1,
                });
                cfg.grid = Some(GridSpec::new(1 << 11, 2.0 * PI));
                cfg.solver = Some(SolverSpec {
                    dt_max: 0.01,
                    ..SolverSpec::default()
                });
                cfg.shock = Some(ShockParams {
                    blowup_factor: 50.0,
                    ladder: vec![1 << 11, 1 << 12],
                    time_tolerance: 0.1,
                    refinement_tolerance: 0.05,
                    horizon_factor: 2.0,
                    fallback_t_end: 10.0,
                    sample_interval: 0.05,
                    contrast: Some(ContrastSpec {
                        equation: EquationConfig::modified_fkdv(-0.5),
                        amplitude: 0.1,
                        horizon_factor: 4.0,
                    }),
                });
            }
            Study::Lemmas => {
                cfg.lemmas = Some(LemmaParams {
                    checks: LemmaCheck::ALL.to_vec(),
                    trilinear_seeds: 20,
                    pseudo_product_trials: 100,
                });
            }
        }
        cfg
    }

    /// Cross-field validation, with the offending key in each message.
    pub fn validate(&self) -> Result<()> {
        let name = self.study.as_str();
        let sections: [(&str, bool); 7] = [
            ("simulate", self.simulate.is_some()),
            ("decay", self.decay.is_some()),
            ("scattering", self.scattering.is_some()),
            ("longwave", self.longwave.is_some()),
            ("shock", self.shock.is_some()),
            ("norms", self.norms.is_some()),
            ("lemmas", self.lemmas.is_some()),
        ];
        for (section, present) in sections {
            if present != (section == name) {
                return Err(LabError::config(if present {
                    format!("section [{section}] does not apply to study `{name}`")
                } else {
                    format!("missing [{section}] section")
                }));
            }
        }
        if let Some(eq) = &self.equation {
            eq.build()
                .map_err(|e| LabError::config(format!("equation: {}", strip(e))))?;
        }
        if let Some(init) = &self.initial {
            init.validate()?;
        }
        if let Some(grid) = &self.grid {
            grid.build()
                .map_err(|e| LabError::config(format!("grid: {}", strip(e))))?;
            if let Some(InitialData::Samples { values }) = &self.initial {
                if values.len() != grid.n_points {
                    return Err(LabError::config(format!(
                        "initial.values has {} entries but grid.n_points is {}",
                        values.len(),
                        grid.n_points
                    )));
                }
            }
        }
        if let Some(s) = &self.solver {
            s.validate()
                .map_err(|e| LabError::config(format!("solver: {}", strip(e))))?;
        }
        let positive = |key: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(LabError::config(format!("{key} must be positive, got {v}")))
            }
        };
        let window = |prefix: &str, lo: f64, hi: f64, end: f64| {
            if !(lo > 0.0 && lo < hi && hi <= end) {
                Err(LabError::config(format!(
                    "{prefix}: need 0 < t_min < t_max <= t_end, got {lo}, {hi}, {end}"
                )))
            } else {
                Ok(())
            }
        };
        if let Some(p) = &self.simulate {
            positive("simulate.t_end", p.t_end)?;
            positive("simulate.snapshot_interval", p.snapshot_interval)?;
        }
        if let Some(p) = &self.decay {
            window("decay", p.t_min, p.t_max, p.t_end)?;
            if p.exponent_min >= p.exponent_max {
                return Err(LabError::config("decay: exponent_min must be below exponent_max"));
            }
            for (i, g) in p.stability_grids.iter().enumerate() {
                g.build().map_err(|e| {
                    LabError::config(format!("decay.stability_grids[{i}]: {}", strip(e)))
                })?;
            }
        }
        if let Some(p) = &self.scattering {
            if p.t_end < 64.0 {
                return Err(LabError::config("scattering.t_end must be at least 64"));
            }
            if !(p.z_weight >= 0.0) {
                return Err(LabError::config("scattering.z_weight must be nonnegative"));
            }
            self.require_kind("scattering", &[EquationKind::ModifiedFkdv])?;
        }
        if let Some(p) = &self.longwave {
            if p.epsilons.len() < 2 {
                return Err(LabError::InsufficientData(
                    "longwave.epsilons needs at least two values".into(),
                ));
            }
            for (i, &e) in p.epsilons.iter().enumerate() {
                positive(&format!("longwave.epsilons[{i}]"), e)?;
            }
            positive("longwave.t_compare", p.t_compare)?;
            positive("longwave.sample_interval", p.sample_interval)?;
            if p.orders.is_empty() {
                return Err(LabError::config("longwave.orders must not be empty"));
            }
        }
        if let Some(p) = &self.shock {
            if p.ladder.len() < 2 {
                return Err(LabError::config("shock.ladder needs at least two grids"));
            }
            let l = self.grid.map(|g| g.box_length).unwrap_or(2.0 * PI);
            for (i, &n) in p.ladder.iter().enumerate() {
                make_grid(n, l).map_err(|e| {
                    LabError::config(format!("shock.ladder[{i}]: {}", strip(e)))
                })?;
            }
            positive("shock.blowup_factor", p.blowup_factor)?;
            positive("shock.horizon_factor", p.horizon_factor)?;
            positive("shock.fallback_t_end", p.fallback_t_end)?;
            positive("shock.sample_interval", p.sample_interval)?;
            if let Some(c) = &p.contrast {
                c.equation.build().map_err(|e| {
                    LabError::config(format!("shock.contrast.equation: {}", strip(e)))
                })?;
                positive("shock.contrast.amplitude", c.amplitude)?;
                positive("shock.contrast.horizon_factor", c.horizon_factor)?;
            }
        }
        if let Some(p) = &self.norms {
            window("norms", p.t_min, p.t_max, p.t_end)?;
            self.require_kind("norms", &[EquationKind::ModifiedFkdv])?;
        }
        let needs_setup = !matches!(self.study, Study::Lemmas);
        if needs_setup && (self.initial.is_none() || self.grid.is_none() || self.solver.is_none()) {
            return Err(LabError::config(format!(
                "study `{name}` needs [initial], [grid] and [solver]"
            )));
        }
        let needs_equation = !matches!(self.study, Study::Lemmas | Study::Longwave);
        if needs_equation != self.equation.is_some() {
            return Err(LabError::config(if needs_equation {
                format!("study `{name}` needs an [equation] section")
            } else {
                format!("section [equation] does not apply to study `{name}`")
            }));
        }
        Ok(())
    }

    fn require_kind(&self, study: &str, kinds: &[EquationKind]) -> Result<()> {
        match &self.equation {
            Some(eq) if kinds.contains(&eq.kind) => Ok(()),
            Some(eq) => Err(LabError::config(format!(
                "equation.kind `{}` is not supported by the {study} study",
                eq.kind
            ))),
            None => Err(LabError::config(format!("{study} study needs an [equation] section"))),
        }
    }

    pub(crate) fn equation_spec(&self) -> Result<EquationSpec> {
        super::section(&self.equation, "equation")?.build()
    }

    pub(crate) fn grid_spec(&self) -> Result<GridSpec> {
        super::section(&self.grid, "grid").copied()
    }

    pub(crate) fn solver_spec(&self) -> Result<SolverSpec> {
        super::section(&self.solver, "solver").copied()
    }

    pub(crate) fn initial_data(&self) -> Result<&InitialData> {
        super::section(&self.initial, "initial")
    }
}

fn strip(e: LabError) -> String {
    match e {
        LabError::Config(m) => m,
        other => other.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        for s in Study::ALL {
            ExperimentConfig::defaults(s).validate().unwrap();
        }
    }

    #[test]
    fn foreign_section_rejected() {
        let mut cfg = ExperimentConfig::defaults(Study::Decay);
        cfg.norms = ExperimentConfig::defaults(Study::Norms).norms;
        let err = cfg.validate().unwrap_err().to_string();
        assert!(err.contains("[norms]"), "{err}");
    }

    #[test]
    fn initial_profiles() {
        let g = make_grid(256, 20.0).unwrap();
        let f = InitialData::gaussian(0.1, 1.0).build(&g).unwrap().to_physical();
        assert!((f[128] - 0.1).abs() < 1e-15);
        let s = InitialData::Sech2 {
            amplitude: 2.0,
            width: 1.0,
            center: Some(12.5),
        };
        let v = s.build(&g).unwrap().to_physical();
        assert!((v[160] - 2.0).abs() < 1e-6, "{}", v[160]);
        let bad = InitialData::Samples { values: vec![0.0; 3] };
        assert!(bad.build(&g).is_err());
    }

    #[test]
    fn bad_alpha_is_reported_under_equation() {
        let mut cfg = ExperimentConfig::defaults(Study::Decay);
        cfg.equation.as_mut().unwrap().alpha = Some(0.5);
        let err = cfg.validate().unwrap_err().to_string();
        assert!(err.contains("equation") && err.contains("(-1, 0)"), "{err}");
    }
}
