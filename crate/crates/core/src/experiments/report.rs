use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::config::ExperimentConfig;
use crate::integrator::HaltReason;
use crate::spectral::{compute_norm, NormKind, SpectralField, DEFAULT_Z_WEIGHT};

/// Size of the initial datum, split into the three norms of the smallness
/// hypothesis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Epsilon0 {
    pub sobolev_index: f64,
    pub sobolev: f64,
    pub h11: f64,
    pub z_weight: f64,
    pub z: f64,
    pub total: f64,
    /// Boundary mass fraction when the weighted norm is unreliable.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h11_boundary_mass: Option<f64>,
}

pub fn measure_epsilon0(u0: &SpectralField, sobolev_index: f64) -> Epsilon0 {
    let sobolev = compute_norm(u0, NormKind::Sobolev(sobolev_index)).value;
    let h11 = compute_norm(u0, NormKind::H11);
    let z = compute_norm(u0, NormKind::Z(DEFAULT_Z_WEIGHT)).value;
    Epsilon0 {
        sobolev_index,
        sobolev,
        h11: h11.value,
        z_weight: DEFAULT_Z_WEIGHT,
        z,
        total: sobolev + h11.value + z,
        h11_boundary_mass: h11.warning.map(|w| w.boundary_mass_fraction),
    }
}

/// One pass/fail decision.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Verdict {
    pub name: String,
    pub passed: bool,
    /// Key into [`ExperimentReport::measured`].
    pub quantity: String,
    /// The tolerance the quantity was held to, in words.
    pub criterion: String,
    /// Series file the quantity was computed from.
    pub source: String,
}

/// A plot-ready table; the first column is always `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesTable {
    pub file: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl SeriesTable {
    pub fn new(file: impl Into<String>, columns: &[&str]) -> Self {
        debug_assert_eq!(columns.first(), Some(&"t"));
        SeriesTable {
            file: file.into(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let j = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[j]).collect())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub study: String,
    pub inputs: ExperimentConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon0: Option<Epsilon0>,
    /// Measured values; `null` marks a sentinel (no finite value exists,
    /// e.g. the rate of an identically vanishing sequence).
    pub measured: BTreeMap<String, Option<f64>>,
    pub verdicts: Vec<Verdict>,
    /// Halt reason of every member run, keyed by run label.
    pub halts: BTreeMap<String, HaltReason>,
    pub series: Vec<String>,
    pub notes: Vec<String>,
}

impl ExperimentReport {
    pub fn new(inputs: &ExperimentConfig) -> Self {
        ExperimentReport {
            study: inputs.study.as_str().to_string(),
            inputs: inputs.clone(),
            epsilon0: None,
            measured: BTreeMap::new(),
            verdicts: Vec::new(),
            halts: BTreeMap::new(),
            series: Vec::new(),
            notes: Vec::new(),
        }
    }

    /// Records a value; non-finite values are stored as the `null` sentinel.
    pub fn measure(&mut self, key: impl Into<String>, value: f64) {
        self.measured
            .insert(key.into(), value.is_finite().then_some(value));
    }

    pub fn value(&self, key: &str) -> Option<f64> {
        self.measured.get(key).copied().flatten()
    }

    pub fn verdict(
        &mut self,
        name: impl Into<String>,
        passed: bool,
        quantity: impl Into<String>,
        criterion: impl Into<String>,
        source: impl Into<String>,
    ) {
        let quantity = quantity.into();
        debug_assert!(
            self.measured.contains_key(&quantity),
            "verdict cites unmeasured `{quantity}`"
        );
        self.verdicts.push(Verdict {
            name: name.into(),
            passed,
            quantity,
            criterion: criterion.into(),
            source: source.into(),
        });
    }

    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.passed)
    }

    pub fn failed_verdicts(&self) -> impl Iterator<Item = &Verdict> {
        self.verdicts.iter().filter(|v| !v.passed)
    }
}

/// A report together with the tables it cites.
#[derive(Debug, Clone)]
pub struct StudyOutput {
    pub report: ExperimentReport,
    pub series: Vec<SeriesTable>,
}

impl StudyOutput {
    pub(crate) fn new(mut report: ExperimentReport, series: Vec<SeriesTable>) -> Self {
        report.series = series.iter().map(|s| s.file.clone()).collect();
        StudyOutput { report, series }
    }

    pub fn passed(&self) -> bool {
        self.report.passed()
    }
}
