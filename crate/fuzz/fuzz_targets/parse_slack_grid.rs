#![no_main]

use hfree::io::{parse_slack_grid, parse_support_grid};
use hfree::xc::{rectangle_cover_support, support_grid, verify_cover};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(m) = parse_slack_grid(text) {
        let support: Vec<Vec<bool>> = m.iter().map(|r| r.iter().map(|x| !x.is_zero()).collect()).collect();
        assert_eq!(parse_support_grid(&support_grid(&support)).expect("grid parses"), support);
        if support.len() <= 8 && support.first().map_or(0, Vec::len) <= 8 {
            let res = rectangle_cover_support(&support, 10_000);
            assert!(verify_cover(&support, &res));
        }
    }
});
