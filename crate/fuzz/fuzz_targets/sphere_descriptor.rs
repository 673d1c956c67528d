#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(quotient) = isospec::descriptor::parse_sphere(text) {
        let json = isospec::descriptor::sphere_to_json(&quotient);
        let again = isospec::descriptor::parse_sphere(&json).expect("round trip must parse");
        assert_eq!(quotient, again);
    }
});
