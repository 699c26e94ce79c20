#![no_main]

use kmertens::semiprime::{ratio_table_check, parse_alpha_table};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(table) = parse_alpha_table(text) {
        assert!(table.rows.windows(2).all(|w| w[0].j < w[1].j));
        let _ = ratio_table_check(&table);
    }
});
