#![no_main]

use kmertens::precision::{parse_decimal, printed_half_ulp};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(v) = parse_decimal(256, s) {
        assert!(v.is_finite());
        if let Ok(h) = printed_half_ulp(256, s) {
            assert!(h > 0);
        }
    }
});
