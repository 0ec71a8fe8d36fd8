#![no_main]

use addcubic::cli::{certificate_from_entry, Report};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(report) = serde_json::from_slice::<Report>(data) else { return };
    if let (Some(e), Some(n), Some(k), Some(s)) = (&report.certificate, report.n, report.k, report.s) {
        if n <= 12 {
            let _ = certificate_from_entry(e, n, k, s);
        }
    }
    for a in &report.algebras {
        if a.document.dim <= 8 {
            let _ = a.document.to_pair();
        }
    }
});
