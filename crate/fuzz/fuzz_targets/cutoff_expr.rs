#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(cutoff) = isospec::descriptor::parse_cutoff(text) {
        // Accepted cutoffs are nonnegative by construction.
        assert!(cutoff >= isospec::eigenvalue::Eigenvalue::zero());
    }
});
