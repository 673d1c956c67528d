#![no_main]

//! Flat descriptors from untrusted JSON must never panic, and accepted
//! descriptors must survive a serialize/reparse round trip.

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(quotient) = isospec::descriptor::parse_flat(text) {
        let json = isospec::descriptor::flat_to_json(&quotient);
        let again = isospec::descriptor::parse_flat(&json).expect("round trip must parse");
        assert_eq!(quotient, again);
    }
});
