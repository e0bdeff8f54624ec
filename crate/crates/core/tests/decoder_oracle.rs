use num_bigint::BigInt;
use num_rational::BigRational;

use ldlc_pkc::decoder::DecoderConfig;
use ldlc_pkc::ldlc::{generate, LatinSquareParams};
use ldlc_pkc::matrix_core::{cvp_exhaustive, distance_sq, inverse_rational, CvpResult, IntMatrix};
use ldlc_pkc::pkc::{code_sigma_max, decrypt_detailed, encrypt_with_noise, keys_from_code, sample_noise};

fn certified_cvp(b: &IntMatrix, t: &[BigRational]) -> CvpResult {
    for window in 1..=3 {
        let r = cvp_exhaustive(b, t, window).unwrap();
        if r.certified {
            return r;
        }
    }
    panic!("no certified closest vector within window 3");
}

/// Runs seeded BP decodings at `σ = 0.3·σ_max` on an n = 8 code and compares every
/// outcome with the certified exhaustive closest vector.
#[test]
fn bp_matches_exhaustive_cvp() {
    let code = generate(&LatinSquareParams::new(8, vec![2, 1, 1], 17)).unwrap();
    let g = code.g_int().clone();
    let g_inv = inverse_rational(&g).unwrap();
    let sigma_int = 0.3 * code_sigma_max(&code);
    let (pk, sk) = keys_from_code(code, sigma_int, DecoderConfig::default()).unwrap();

    let trials = 200;
    let mut agree = 0;
    for t in 0..trials {
        let m: Vec<BigInt> = (0..8).map(|i| BigInt::from((t * 7 + i * 13) % 41 - 20)).collect();
        let e = sample_noise(8, sigma_int, 1000 + t as u64).unwrap();
        let ct = encrypt_with_noise(&pk, &m, &e).unwrap();
        let target: Vec<BigRational> = ct.c.iter().cloned().map(BigRational::from_integer).collect();
        let oracle = certified_cvp(&g, &target);
        let d = decrypt_detailed(&sk, &ct).unwrap();
        if d.x_hat == oracle.point {
            agree += 1;
            continue;
        }
        // A disagreement must be flagged or land strictly farther than the oracle.
        let coeffs: Vec<BigInt> = g_inv
            .left_mul_vec(&d.x_hat)
            .unwrap()
            .into_iter()
            .map(|q| {
                assert!(q.is_integer(), "decoder output is not a lattice point");
                q.to_integer()
            })
            .collect();
        let bp_dist = distance_sq(&g, &coeffs, &target).unwrap();
        assert!(
            !d.converged || bp_dist > oracle.distance_sq,
            "trial {t}: silent wrong success"
        );
    }
    println!("decoder/oracle agreement: {agree}/{trials}");
    assert!(agree * 100 >= 95 * trials);
}

#[test]
fn degenerate_observations_are_errors() {
    use ldlc_pkc::decoder::bp_decode;
    let code = generate(&LatinSquareParams::new(8, vec![2, 1, 1], 1)).unwrap();
    let cfg = DecoderConfig::default();
    let y = vec![0.25; 8];
    for sigma2 in [0.0, -1.0, 1e-300, f64::NAN, f64::INFINITY] {
        assert!(bp_decode(code.h(), &y, sigma2, &cfg).is_err(), "sigma2 = {sigma2}");
    }
    let mut bad = y.clone();
    bad[3] = f64::NAN;
    assert!(bp_decode(code.h(), &bad, 0.01, &cfg).is_err());
    assert!(bp_decode(code.h(), &y[..7], 0.01, &cfg).is_err());
}
