//! Replays the checked-in fuzz corpus through the parsers on stable.

use std::fs;
use std::path::PathBuf;

use fkdv::config::{parse_config_str, parse_length, to_toml};
use fkdv::output::{parse_report, parse_series};

fn seeds(target: &str) -> Vec<Vec<u8>> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<_> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| fs::read(e.unwrap().path()).unwrap())
        .collect();
    assert!(!out.is_empty(), "no seeds for {target}");
    out.sort();
    out
}

#[test]
fn config_seeds() {
    let mut accepted = 0;
    for s in seeds("parse_config") {
        if let Ok(cfg) = parse_config_str(std::str::from_utf8(&s).unwrap()) {
            assert_eq!(parse_config_str(&to_toml(&cfg).unwrap()).unwrap(), cfg);
            accepted += 1;
        }
    }
    assert!(accepted > 0);
}

#[test]
fn length_seeds() {
    for s in seeds("parse_length") {
        if let Ok(v) = parse_length(std::str::from_utf8(&s).unwrap()) {
            assert!(v.is_finite() && v > 0.0);
        }
    }
}

#[test]
fn series_and_report_seeds() {
    let parsed = seeds("parse_series")
        .iter()
        .filter_map(|s| parse_series(s, "seed.csv").ok())
        .count();
    assert!(parsed >= 2);
    for s in seeds("parse_report") {
        parse_report(&s).unwrap();
    }
}
