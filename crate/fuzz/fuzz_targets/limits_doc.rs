#![no_main]

use addcubic::cli::parse_limits_document;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        let _ = parse_limits_document(text);
    }
});
