#![no_main]

use kodaira::format::parse_lattice_config;
use kodaira::lattice::shioda_tate_discr;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(cfg) = parse_lattice_config(text) {
        let _ = shioda_tate_discr(&cfg);
    }
});
