//! Reproducible studies built on the solver and the diagnostics.
//!
//! Every study takes a resolved [`ExperimentConfig`] and returns a
//! [`StudyOutput`]: a report whose verdicts each cite a measured quantity
//! and the series table it was computed from. Studies never touch the
//! filesystem; writing is left to [`crate::output`].

mod config;
mod decay;
mod longwave;
mod norms;
mod report;
mod scattering;
mod shock;
mod simulate;

pub use config::{
    DecayParams, EquationConfig, ExperimentConfig, GridSpec, InitialData, LemmaParams,
    LongwaveParams, NormParams, ScatteringParams, ShockParams, SimulateParams, SolverSpec, Study,
};
pub use decay::run_decay_study;
pub use longwave::run_longwave_study;
pub use norms::run_norm_growth_study;
pub use report::{
    measure_epsilon0, Epsilon0, ExperimentReport, SeriesTable, StudyOutput, Verdict,
};
pub use scattering::run_scattering_study;
pub use shock::{predict_shock_time, run_shock_study};
pub use simulate::{check_conservation, run_simulate, ConservationResult};

use crate::error::{LabError, Result};

/// Runs the study named by `cfg.study`. Lemma checks are dispatched by
/// [`crate::lemmas::run_lemma_checks`] instead.
pub fn run_study(cfg: &ExperimentConfig) -> Result<StudyOutput> {
    match cfg.study {
        Study::Simulate => run_simulate(cfg),
        Study::Decay => run_decay_study(cfg),
        Study::Scattering => run_scattering_study(cfg),
        Study::Longwave => run_longwave_study(cfg),
        Study::Shock => run_shock_study(cfg),
        Study::Norms => run_norm_growth_study(cfg),
        Study::Lemmas => crate::lemmas::run_lemma_checks(cfg),
    }
}

pub(crate) fn section<'a, T>(value: &'a Option<T>, name: &str) -> Result<&'a T> {
    value
        .as_ref()
        .ok_or_else(|| LabError::config(format!("missing [{name}] section")))
}
