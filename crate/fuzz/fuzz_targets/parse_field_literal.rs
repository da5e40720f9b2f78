#![no_main]

use kodaira::format::parse_field_literal;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(text) = std::str::from_utf8(data) {
        let _ = parse_field_literal(text);
    }
});
