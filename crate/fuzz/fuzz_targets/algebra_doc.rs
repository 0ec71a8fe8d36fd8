#![no_main]

use addcubic::localalg::{cubic_from_pair, parse_algebra_document, validate_pair};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(pair) = parse_algebra_document(text) else { return };
    if pair.dim() > 8 {
        return;
    }
    if validate_pair(&pair).ok() {
        cubic_from_pair(&pair).expect("valid pairs have a cubic");
    }
});
