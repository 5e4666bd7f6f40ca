use std::fs;

use fkdv::config::{parse_config_str, to_toml};
use fkdv::experiments::{run_study, ExperimentConfig, ExperimentReport, SeriesTable, Study};
use fkdv::output::{parse_report, parse_series, read_series, write_series, write_study};
use proptest::prelude::*;

fn finite() -> impl Strategy<Value = f64> {
    prop_oneof![
        any::<f64>().prop_filter("finite", |v| v.is_finite()),
        -1e3f64..1e3,
        Just(0.0),
        Just(-0.0),
    ]
}

proptest! {
    #[test]
    fn series_round_trip_is_exact(rows in prop::collection::vec(prop::collection::vec(finite(), 3), 0..20)) {
        let dir = tempfile::tempdir().unwrap();
        let mut t = SeriesTable::new("s.csv", &["t", "a", "b"]);
        for r in &rows {
            t.push(r.clone());
        }
        let p = dir.path().join("s.csv");
        write_series(&t, &p).unwrap();
        let back = read_series(&p).unwrap();
        prop_assert_eq!(back.columns, t.columns);
        prop_assert_eq!(back.rows.len(), rows.len());
        for (x, y) in back.rows.iter().flatten().zip(rows.iter().flatten()) {
            prop_assert_eq!(x.to_bits(), y.to_bits());
        }
    }

    #[test]
    fn parsers_never_panic(bytes in prop::collection::vec(any::<u8>(), 0..200)) {
        let _ = parse_series(&bytes, "x.csv");
        let _ = parse_report(&bytes);
        if let Ok(s) = std::str::from_utf8(&bytes) {
            let _ = parse_config_str(s);
        }
    }
}

#[test]
fn study_outputs_round_trip_and_repeat() {
    let cfg = parse_config_str(
        "study = \"simulate\"\n[grid]\nn_points = 256\nbox_length = \"32pi\"\n[simulate]\nt_end = 3.0\nsnapshot_interval = 0.5\n",
    )
    .unwrap();
    assert_eq!(parse_config_str(&to_toml(&cfg).unwrap()).unwrap(), cfg);
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    let mut written = Vec::new();
    for d in &dirs {
        let out = run_study(&cfg).unwrap();
        written.push(write_study(d.path(), &out.report, &out.series, 0.0).unwrap());
        let report: ExperimentReport = parse_report(&fs::read(d.path().join("report.json")).unwrap()).unwrap();
        assert_eq!(report, out.report);
        for t in &out.series {
            assert_eq!(&read_series(&d.path().join(&t.file)).unwrap(), t);
        }
    }
    for (a, b) in written[0].iter().zip(&written[1]) {
        if a.extension().is_some_and(|e| e == "csv" || a.ends_with("report.json")) {
            assert_eq!(fs::read(a).unwrap(), fs::read(b).unwrap(), "{}", a.display());
        }
    }
    assert_eq!(ExperimentConfig::defaults(Study::Simulate).study, Study::Simulate);
}
