#![no_main]

use libfuzzer_sys::fuzz_target;
use patankar::integrators::{Integrator, IntegratorId};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(id) = text.parse::<IntegratorId>() else { return };
    let shown = id.to_string();
    assert_eq!(shown.parse::<IntegratorId>().expect("display parses"), id);
    let _ = Integrator::new(id);
});
