#![no_main]

use addcubic::polyring::{parse_poly, parse_poly_auto};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok((p, vars)) = parse_poly_auto(text) {
        let printed = p.to_string();
        assert_eq!(parse_poly(&printed, &vars).expect("printed form parses"), p);
    }
});
