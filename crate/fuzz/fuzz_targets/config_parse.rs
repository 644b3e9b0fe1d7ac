#![no_main]

use libfuzzer_sys::fuzz_target;
use patankar::harness::RunConfig;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(config) = RunConfig::from_toml(text) else { return };
    // accepted configs survive a round trip and expand without panicking
    let again = RunConfig::from_toml(&config.to_toml()).expect("round trip");
    assert_eq!(again.hash(), config.hash());
    for job in config.expand().iter().take(64) {
        let _ = job.run_id();
        let _ = job.build_problem();
    }
});
