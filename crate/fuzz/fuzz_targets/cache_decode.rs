#![no_main]

use std::path::Path;

use kmertens::sieve::cache;
use libfuzzer_sys::fuzz_target;

// Any byte string either decodes to a ledger that re-encodes to the same
// image, or is rejected with an error.
fuzz_target!(|data: &[u8]| {
    if let Ok(ledger) = cache::decode(data, Path::new("fuzz"), None) {
        let key = hex_key(&data[12..44]);
        let again = cache::encode(&ledger, &key).expect("decoded ledger encodes");
        let back = cache::decode(&again, Path::new("fuzz"), Some(&key)).expect("re-encoded image decodes");
        assert_eq!(back, ledger);
    }
});

fn hex_key(b: &[u8]) -> String {
    b.iter().map(|x| format!("{x:02x}")).collect()
}
