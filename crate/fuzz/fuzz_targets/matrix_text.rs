#![no_main]

use ldlc_pkc::matrix_core::text::{format_matrix, parse_matrix};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(m) = parse_matrix(text) {
        // accepted input re-serializes to something that parses to the same matrix
        assert_eq!(parse_matrix(&format_matrix(&m)).unwrap(), m);
    }
});
