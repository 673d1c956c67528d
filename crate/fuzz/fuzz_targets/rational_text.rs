#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(value) = isospec::rational::parse_rational(text) {
        let formatted = isospec::rational::format_rational(&value);
        let again = isospec::rational::parse_rational(&formatted).expect("round trip must parse");
        assert_eq!(value, again);
    }
});
