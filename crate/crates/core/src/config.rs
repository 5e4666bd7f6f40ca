//! Configuration files.
//!
//! A configuration is a TOML document. The top-level key `study` selects a
//! study; every other key overrides the study's defaults:
//!
//! ```toml
//! study = "decay"
//! seed = 7
//!
//! [equation]
//! kind = "modified_fkdv"
//! alpha = -0.5
//!
//! [initial]
//! profile = "gaussian"
//! amplitude = 0.1
//! width = 1.0
//!
//! [grid]
//! n_points = 8192
//! box_length = "256pi"
//!
//! [decay]
//! t_max = 80.0
//! ```
//!
//! Tables are merged key by key into the defaults, except that a table whose
//! tag (`kind` for `[equation]`, `profile` for `[initial]`) differs from the
//! default replaces it wholesale. Unknown keys are rejected and every error
//! names the offending key path.

use std::path::Path;

use toml::{Table, Value};

use crate::error::{LabError, Result};
use crate::experiments::{ExperimentConfig, Study};

/// Parses a length such as `12.5`, `"2pi"`, `"256*pi"`, `"0.5 pi"` or `"pi"`.
pub fn parse_length(text: &str) -> Result<f64> {
    let s = text.trim();
    let err = || LabError::config(format!("invalid length `{text}`"));
    let (number, has_pi) = match s.strip_suffix("pi").or_else(|| s.strip_suffix("π")) {
        Some(rest) => {
            let rest = rest.trim();
            let rest = match rest.strip_suffix('*') {
                Some(r) if !r.trim().is_empty() => r.trim(),
                Some(_) => return Err(err()),
                None => rest,
            };
            (rest, true)
        }
        None => (s, false),
    };
    let factor = if number.is_empty() {
        if !has_pi {
            return Err(err());
        }
        1.0
    } else {
        if number.starts_with('+') || number.contains(char::is_whitespace) {
            return Err(err());
        }
        number.parse::<f64>().map_err(|_| err())?
    };
    let value = if has_pi { factor * std::f64::consts::PI } else { factor };
    if !(value.is_finite() && value > 0.0) {
        return Err(LabError::config(format!("length `{text}` must be positive and finite")));
    }
    Ok(value)
}

/// Reads and resolves a configuration file.
pub fn parse_config(path: &Path) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| LabError::io(path, e))?;
    parse_config_str(&text).map_err(|e| match e {
        LabError::Config(m) => LabError::Format {
            path: path.to_path_buf(),
            message: m,
        },
        other => other,
    })
}

/// Resolves a configuration from TOML text.
pub fn parse_config_str(text: &str) -> Result<ExperimentConfig> {
    let table: Table = text
        .parse()
        .map_err(|e: toml::de::Error| LabError::config(format!("malformed TOML: {}", e.message())))?;
    let study = match table.get("study") {
        Some(Value::String(s)) => Study::parse(s).map_err(|e| keyed("study", e))?,
        Some(_) => return Err(LabError::config("study: expected a string")),
        None => return Err(LabError::config("study: missing key")),
    };
    resolve(study, table)
}

/// Resolves `overrides` over the defaults of `study`.
pub fn resolve(study: Study, overrides: Table) -> Result<ExperimentConfig> {
    let defaults = ExperimentConfig::defaults(study);
    let mut base = match Value::try_from(&defaults) {
        Ok(Value::Table(t)) => t,
        _ => return Err(LabError::config("internal: defaults are not a table")),
    };
    merge(&mut base, overrides, "");
    let cfg: ExperimentConfig = serde_path_to_error::deserialize(Value::Table(base)).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner().to_string();
        LabError::config(if path == "." || path.is_empty() {
            inner
        } else {
            format!("{path}: {inner}")
        })
    })?;
    cfg.validate()?;
    Ok(cfg)
}

fn merge(base: &mut Table, overrides: Table, path: &str) {
    for (key, value) in overrides {
        let here = if path.is_empty() {
            key.clone()
        } else {
            format!("{path}.{key}")
        };
        match (base.get_mut(&key), value) {
            (Some(Value::Table(b)), Value::Table(o)) => {
                let tag = ["kind", "profile"].into_iter().find(|t| b.contains_key(*t));
                let replaced = tag.is_some_and(|t| o.get(t).is_some_and(|v| Some(v) != b.get(t)));
                if replaced {
                    *b = o;
                } else {
                    merge(b, o, &here);
                }
            }
            (_, value) => {
                base.insert(key, value);
            }
        }
    }
}

fn keyed(key: &str, e: LabError) -> LabError {
    match e {
        LabError::Config(m) => LabError::config(format!("{key}: {m}")),
        other => other,
    }
}

/// Resolved configuration as TOML text, suitable for reruns.
pub fn to_toml(cfg: &ExperimentConfig) -> Result<String> {
    toml::to_string(cfg).map_err(|e| LabError::config(format!("cannot serialize configuration: {e}")))
}

#[cfg(test)]
mod tests {
    use std::f64::consts::PI;

    use proptest::prelude::*;

    use super::*;
    use crate::equations::EquationKind;
    use crate::experiments::InitialData;

    #[test]
    fn lengths() {
        assert_eq!(parse_length("2pi").unwrap(), 2.0 * PI);
        assert_eq!(parse_length("256*pi").unwrap(), 256.0 * PI);
        assert_eq!(parse_length(" 0.5 pi ").unwrap(), 0.5 * PI);
        assert_eq!(parse_length("pi").unwrap(), PI);
        assert_eq!(parse_length("12.5").unwrap(), 12.5);
        for bad in ["", "pi2", "-1", "0", "abc", "1 2pi", "inf", "NaN", "*pi"] {
            assert!(parse_length(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn minimal_config_resolves_defaults() {
        let cfg = parse_config_str("study = \"decay\"\n[equation]\nalpha = -0.5\n").unwrap();
        assert_eq!(cfg, ExperimentConfig::defaults(Study::Decay));
        let grid = cfg.grid.unwrap();
        assert_eq!(grid.n_points, 8192);
        assert_eq!(grid.box_length, 256.0 * PI);
    }

    #[test]
    fn alpha_out_of_range_rejected() {
        let err = parse_config_str("study = \"decay\"\n[equation]\nkind = \"modified_fkdv\"\nalpha = 0.5\n")
            .unwrap_err()
            .to_string();
        assert!(err.contains("equation") && err.contains("(-1, 0)"), "{err}");
    }

    #[test]
    fn non_power_of_two_rejected() {
        let err = parse_config_str("study = \"decay\"\n[grid]\nn_points = 1000\n")
            .unwrap_err()
            .to_string();
        assert!(err.contains("grid") && err.contains("power of two"), "{err}");
    }

    #[test]
    fn unknown_key_reports_path() {
        let err = parse_config_str("study = \"decay\"\n[grid]\nn_point = 1024\n")
            .unwrap_err()
            .to_string();
        assert!(err.contains("grid") && err.contains("n_point"), "{err}");
        let err = parse_config_str("study = \"decay\"\ncolour = 1\n").unwrap_err().to_string();
        assert!(err.contains("colour"), "{err}");
        let err = parse_config_str("study = \"decay\"\n[decay]\nt_min = \"five\"\n")
            .unwrap_err()
            .to_string();
        assert!(err.contains("decay.t_min"), "{err}");
    }

    #[test]
    fn malformed_and_missing() {
        assert!(parse_config_str("study = ").is_err());
        assert!(parse_config_str("seed = 1").unwrap_err().to_string().contains("study"));
        assert!(parse_config_str("study = \"nope\"").is_err());
        let err = parse_config(Path::new("/nonexistent/x.toml")).unwrap_err();
        assert!(matches!(err, LabError::Io { .. }));
    }

    #[test]
    fn tagged_tables_replace() {
        let cfg = parse_config_str(
            "study = \"simulate\"\n[equation]\nkind = \"mkdv\"\nepsilon = 0.1\n[initial]\nprofile = \"sine\"\namplitude = 0.2\nmode = 3\n",
        )
        .unwrap();
        let eq = cfg.equation.unwrap();
        assert_eq!(eq.kind, EquationKind::Mkdv);
        assert_eq!(eq.alpha, None);
        assert_eq!(cfg.initial, Some(InitialData::Sine { amplitude: 0.2, mode: 3 }));
    }

    #[test]
    fn resolved_config_round_trips() {
        for s in Study::ALL {
            let cfg = ExperimentConfig::defaults(s);
            let text = to_toml(&cfg).unwrap();
            assert_eq!(parse_config_str(&text).unwrap(), cfg, "{text}");
        }
    }

    proptest! {
        #[test]
        fn length_parser_never_panics(s in "\\PC{0,12}") {
            let _ = parse_length(&s);
        }

        #[test]
        fn pi_multiples(k in 1u32..10_000) {
            prop_assert_eq!(parse_length(&format!("{k}pi")).unwrap(), k as f64 * PI);
        }
    }
}
