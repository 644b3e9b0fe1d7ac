#![no_main]

use libfuzzer_sys::fuzz_target;
use patankar::problems::{Boundary, ProblemId};
use patankar::space::FluxId;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(id) = text.parse::<ProblemId>() {
        assert_eq!(id.to_string().parse::<ProblemId>().unwrap(), id);
    }
    if let Ok(id) = text.parse::<FluxId>() {
        assert_eq!(id.as_str().parse::<FluxId>().unwrap(), id);
    }
    if let Ok(b) = text.parse::<Boundary>() {
        assert_eq!(b.to_string().parse::<Boundary>().unwrap(), b);
    }
});
