#![no_main]

use hfree::io::{parse_ef, write_ef};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(ef) = parse_ef(text) {
        let out = write_ef(&ef);
        let again = parse_ef(&out).expect("written formulation parses");
        assert_eq!(write_ef(&again), out);
    }
});
