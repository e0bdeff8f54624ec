#![no_main]

use ldlc_pkc::cca2::FoCiphertext;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok((params, ct)) = FoCiphertext::parse(text) {
        assert_eq!(FoCiphertext::parse(&ct.to_text(&params)).unwrap(), (params, ct));
    }
});
