#![no_main]

use hfree::io::{parse_dimacs, write_dimacs};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(f) = parse_dimacs(text) {
        assert_eq!(parse_dimacs(&write_dimacs(&f)).expect("written formula parses"), f);
        let _ = f.occurrences();
    }
});
