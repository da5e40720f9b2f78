#![no_main]

use kodaira::format::parse_model;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(mf) = parse_model(text) {
        // Accepted finite models must round-trip and classify without panicking.
        if let Some(m) = mf.finite() {
            let again = parse_model(&m.format(&mf.var)).expect("formatted model parses");
            assert_eq!(again.finite(), Some(m));
            let _ = kodaira::classify_all(m, 2);
        }
    }
});
