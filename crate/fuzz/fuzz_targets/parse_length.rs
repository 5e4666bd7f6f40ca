#![no_main]
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &str| {
    if let Ok(v) = fkdv::config::parse_length(data) {
        assert!(v.is_finite() && v > 0.0);
    }
});
