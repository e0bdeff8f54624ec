#![no_main]

use std::sync::OnceLock;

use ldlc_pkc::decoder::{bp_decode_with_inverse, DecoderConfig};
use ldlc_pkc::ldlc::{generate, LatinSquareParams, LdlcCode};
use libfuzzer_sys::fuzz_target;

fn code() -> &'static LdlcCode {
    static CODE: OnceLock<LdlcCode> = OnceLock::new();
    CODE.get_or_init(|| generate(&LatinSquareParams::new(8, vec![2, 1, 1], 1)).unwrap())
}

// Arbitrary observations, including non-finite values, must never panic.
fuzz_target!(|data: &[u8]| {
    let code = code();
    if data.len() < 8 * 9 {
        return;
    }
    let words: Vec<f64> = data.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().unwrap())).collect();
    let (sigma2, y) = (words[0].abs(), &words[1..9]);
    let cfg = DecoderConfig {
        max_iterations: 4,
        ..DecoderConfig::default()
    };
    let _ = bp_decode_with_inverse(code.h(), &code.h_inverse(), y, sigma2, &cfg);
});
