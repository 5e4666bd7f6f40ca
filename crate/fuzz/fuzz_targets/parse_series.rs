#![no_main]
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(t) = fkdv::output::parse_series(data, "fuzz.csv") {
        assert_eq!(t.columns[0], "t");
        assert!(t.rows.iter().all(|r| r.len() == t.columns.len()));
    }
});
