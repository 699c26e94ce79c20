#![no_main]

use kmertens::verify::{ConfigLayer, RunConfig};
use libfuzzer_sys::fuzz_target;

// Parsing and resolving never panic; a resolved config always yields a
// sorted checkpoint list ending at the limit and a stable hash.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(layer) = ConfigLayer::parse(text) else { return };
    let Ok(c) = RunConfig::resolve(Some(&layer), &ConfigLayer::default()) else { return };
    let cps = c.checkpoints().expect("validated config has checkpoints");
    assert!(cps.windows(2).all(|w| w[0] < w[1]));
    assert_eq!(cps.last(), Some(&c.sieve_limit));
    assert_eq!(c.hash().unwrap(), c.clone().hash().unwrap());
});
