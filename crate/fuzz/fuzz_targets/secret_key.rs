#![no_main]

use ldlc_pkc::pkc::SecretKey;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(sk) = SecretKey::parse(text) {
        assert_eq!(SecretKey::parse(&sk.to_text()).unwrap(), sk);
    }
});
