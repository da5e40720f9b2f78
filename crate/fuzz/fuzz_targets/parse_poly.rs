#![no_main]

use kodaira::format::parse_poly;
use kodaira::Field;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Some((&sel, rest)) = data.split_first() else { return };
    let Ok(text) = std::str::from_utf8(rest) else { return };
    let (p, k) = [(2, 1), (2, 3), (3, 2), (5, 1), (7, 1)][sel as usize % 5];
    let field = Field::new(p, k).expect("valid field");
    if let Ok(f) = parse_poly(text, &field, "t") {
        let back = parse_poly(&f.format("t"), &field, "t").expect("formatted polynomial parses");
        assert_eq!(back, f);
    }
});
