#![no_main]

use ldlc_pkc::ldlc::SparseParityMatrix;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(h) = SparseParityMatrix::parse(text) {
        assert_eq!(SparseParityMatrix::parse(&h.to_text()).unwrap(), h);
    }
});
