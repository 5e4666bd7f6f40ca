//! Pseudospectral laboratory for the fractional Korteweg–de Vries equation
//! with cubic nonlinearity, `u_t - |D|^α u_x = -u² u_x` with `-1 < α < 0`,
//! and its relatives (quadratic fKdV, Whitham-type, mKdV, modified Burgers).

pub mod cli;
pub mod config;
pub mod diagnostics;
pub mod equations;
pub mod error;
pub mod experiments;
pub mod integrator;
pub mod lemmas;
pub mod output;
pub mod spectral;

pub use error::{LabError, Result};
