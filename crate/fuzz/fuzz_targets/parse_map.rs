#![no_main]

use hfree::io::{parse_map, write_map};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(map) = parse_map(text) {
        assert_eq!(parse_map(&write_map(&map)).expect("written map parses"), map);
    }
});
