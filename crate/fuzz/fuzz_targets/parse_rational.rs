#![no_main]

use hfree::Rational;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &str| {
    if let Ok(x) = data.parse::<Rational>() {
        let back: Rational = x.to_string().parse().expect("display output parses");
        assert_eq!(back, x);
        let _ = &x * &x - &x;
    }
});
