#![no_main]

//! Accepted segments satisfy the invariants re-checked by the constructor:
//! strictly ascending entries, positive multiplicities, nothing above the
//! cutoff.

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(segment) = isospec::descriptor::segment_from_json(text) {
        let json = isospec::descriptor::segment_to_json(&segment);
        let again = isospec::descriptor::segment_from_json(&json).expect("round trip must parse");
        assert_eq!(segment, again);
        for window in segment.entries().windows(2) {
            assert!(window[0].0 < window[1].0);
        }
    }
});
