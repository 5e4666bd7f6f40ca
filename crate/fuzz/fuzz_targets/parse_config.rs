#![no_main]
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &str| {
    if let Ok(cfg) = fkdv::config::parse_config_str(data) {
        // Anything accepted must survive a write/read cycle unchanged.
        let text = fkdv::config::to_toml(&cfg).expect("resolved config serializes");
        assert_eq!(fkdv::config::parse_config_str(&text).expect("re-parse"), cfg);
    }
});
