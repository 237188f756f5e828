#![no_main]

use hfree::io::{parse_objective, write_objective};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(c) = parse_objective(text) {
        assert_eq!(parse_objective(&write_objective(&c)).expect("written vector parses"), c);
    }
});
