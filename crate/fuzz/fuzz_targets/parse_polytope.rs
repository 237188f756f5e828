#![no_main]

use hfree::io::{parse_polytope, write_polytope};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(p) = parse_polytope(text) {
        let out = write_polytope(&p.name, p.dim, p.hrep.as_ref(), p.vrep.as_ref());
        let again = parse_polytope(&out).expect("written polytope parses");
        assert_eq!(again.dim, p.dim);
        assert_eq!(again.hrep, p.hrep);
        assert_eq!(again.vrep, p.vrep);
    }
});
