//! Command-line surface.
//!
//! Exit status: 0 when every verdict passes, 1 when any verdict fails, 2 on a
//! usage, configuration or I/O error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use crate::config::parse_config;
use crate::error::{LabError, Result};
use crate::experiments::{run_study, ExperimentConfig, Study};
use crate::lemmas::LemmaCheck;
use crate::output::{unix_time, write_study};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "fkdv", version, about = "Fractional KdV laboratory", arg_required_else_help = true)]
pub struct Cli {
    /// Configuration file (TOML).
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, value_name = "DIR", default_value = "results")]
    pub out: PathBuf,
    /// Overrides the configured seed.
    #[arg(long, global = true, value_name = "N")]
    pub seed: Option<u64>,
    /// Size of the worker pool for independent runs.
    #[arg(long, global = true, value_name = "N")]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Plain run with norms at regular snapshots.
    Simulate,
    /// Power-law decay of the sup norms.
    Decay,
    /// Phase-corrected profile and its dyadic differences.
    Scattering,
    /// Long-wave comparison between the Whitham flow and its third-order model.
    Longwave,
    /// Gradient blow-up against the characteristics prediction.
    Shock,
    /// Growth of the high Sobolev and weighted norms.
    Norms,
    /// Numerical checks of the linear and multilinear estimates.
    Lemmas {
        /// Run a single check.
        #[arg(long, value_enum)]
        only: Option<LemmaCheck>,
    },
    /// Every study with its default configuration.
    All,
}

impl Command {
    fn study(&self) -> Option<Study> {
        Some(match self {
            Command::Simulate => Study::Simulate,
            Command::Decay => Study::Decay,
            Command::Scattering => Study::Scattering,
            Command::Longwave => Study::Longwave,
            Command::Shock => Study::Shock,
            Command::Norms => Study::Norms,
            Command::Lemmas { .. } => Study::Lemmas,
            Command::All => return None,
        })
    }
}

/// Parses `args` (including the program name) and runs; returns the exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_PASS,
                _ => EXIT_USAGE,
            };
        }
    };
    match execute(&cli) {
        Ok(true) => EXIT_PASS,
        Ok(false) => EXIT_FAIL,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

fn execute(cli: &Cli) -> Result<bool> {
    let configs = resolve_configs(cli)?;
    let pool = match cli.threads {
        Some(0) => return Err(LabError::config("--threads must be positive")),
        Some(n) => Some(
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| LabError::config(format!("cannot build thread pool: {e}")))?,
        ),
        None => None,
    };
    let nested = configs.len() > 1;
    let mut all_passed = true;
    for cfg in &configs {
        let dir = if nested {
            cli.out.join(cfg.study.as_str())
        } else {
            cli.out.clone()
        };
        let passed = match &pool {
            Some(p) => p.install(|| run_one(cfg, &dir))?,
            None => run_one(cfg, &dir)?,
        };
        all_passed &= passed;
    }
    Ok(all_passed)
}

fn resolve_configs(cli: &Cli) -> Result<Vec<ExperimentConfig>> {
    let mut configs = match (cli.command.study(), &cli.config) {
        (None, Some(_)) => {
            return Err(LabError::config("`all` runs default configurations; --config is not accepted"))
        }
        (None, None) => Study::ALL
            .into_iter()
            .filter(|s| *s != Study::Simulate)
            .map(ExperimentConfig::defaults)
            .collect(),
        (Some(study), None) => vec![ExperimentConfig::defaults(study)],
        (Some(study), Some(path)) => {
            let cfg = parse_config(path)?;
            if cfg.study != study {
                return Err(LabError::config(format!(
                    "{}: configures study `{}` but the subcommand is `{}`",
                    path.display(),
                    cfg.study.as_str(),
                    study.as_str()
                )));
            }
            vec![cfg]
        }
    };
    for cfg in &mut configs {
        if let Some(seed) = cli.seed {
            cfg.seed = seed;
        }
        if let (Command::Lemmas { only: Some(check) }, Some(l)) = (&cli.command, cfg.lemmas.as_mut()) {
            l.checks = vec![*check];
        }
        cfg.validate()?;
    }
    Ok(configs)
}

fn run_one(cfg: &ExperimentConfig, dir: &Path) -> Result<bool> {
    let started = unix_time();
    let out = run_study(cfg)?;
    write_study(dir, &out.report, &out.series, started)?;
    let stdout = std::io::stdout();
    let mut w = stdout.lock();
    for v in &out.report.verdicts {
        let value = out
            .report
            .value(&v.quantity)
            .map_or("null".to_string(), |x| format!("{x:.6e}"));
        let _ = writeln!(
            w,
            "{} {}: {} = {} ({}) [{}]",
            if v.passed { "PASS" } else { "FAIL" },
            v.name,
            v.quantity,
            value,
            v.criterion,
            v.source
        );
    }
    let _ = writeln!(
        w,
        "{}: {} -> {}",
        cfg.study.as_str(),
        if out.passed() { "all verdicts passed" } else { "verdicts failed" },
        dir.display()
    );
    Ok(out.passed())
}
