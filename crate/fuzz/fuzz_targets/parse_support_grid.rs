#![no_main]

use hfree::io::parse_support_grid;
use hfree::xc::support_grid;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(s) = parse_support_grid(text) {
        assert_eq!(parse_support_grid(&support_grid(&s)).expect("grid parses"), s);
    }
});
