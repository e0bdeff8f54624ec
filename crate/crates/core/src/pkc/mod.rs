//! The public-key scheme: HNF public key, rounded-Gaussian encryption,
//! belief-propagation decryption.

mod format;

use std::f64::consts::{E, PI};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

pub use format::{key_size_report, KeyParams, KeySizeReport, FORMAT_VERSION};

use crate::decoder::{BpDecoder, DecoderConfig, DecoderError};
use crate::ldlc::{generate, LatinSquareParams, LdlcCode, LdlcError};
use crate::matrix_core::num::{log2_abs, ratio_to_f64, round_div};
use crate::matrix_core::text::FormatError;
use crate::matrix_core::{det, hnf_with_modulus, IntMatrix, LatticeError};

/// Noise below this many integer units is rejected at key generation.
pub const MIN_SIGMA_INT: f64 = 4.0;

/// Fresh codes tried when the noise floor is not met.
pub const KEYGEN_ATTEMPTS: u64 = 16;

#[derive(Clone, Debug, PartialEq)]
pub struct PublicKey {
    pub n: usize,
    pub d: usize,
    pub g_prime: IntMatrix,
    /// `D`: the working lattice is `L(G_int)` with `det = D^(n−1)`.
    pub scale: BigInt,
    pub sigma_int: f64,
    pub format_version: u32,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SecretKey {
    pub code: LdlcCode,
    /// `G_int = U_inv·G'`.
    pub u_inv: IntMatrix,
    pub decoder_cfg: DecoderConfig,
    pub sigma_int: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NoiseParams {
    /// Always 0.
    pub mean: f64,
    /// `σ / σ_max`.
    pub gamma: f64,
    pub sigma_max_int: f64,
}

impl NoiseParams {
    pub fn new(gamma: f64, sigma_max_int: f64) -> Result<Self, PkcError> {
        if !(gamma > 0.0 && gamma < 1.0) {
            return Err(PkcError::ParameterViolation(format!("gamma = {gamma} must lie in (0, 1)")));
        }
        Ok(NoiseParams {
            mean: 0.0,
            gamma,
            sigma_max_int,
        })
    }

    pub fn sigma_int(&self) -> f64 {
        self.gamma * self.sigma_max_int
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ciphertext {
    pub c: Vec<BigInt>,
    pub format_version: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub enum PkcError {
    ParameterViolation(String),
    Ldlc(LdlcError),
    Lattice(LatticeError),
    Decoder(DecoderError),
    /// The decoder did not stabilise; `best` is its final plaintext estimate.
    DecodeFailure { best: Vec<BigInt> },
    Format(FormatError),
}

impl fmt::Display for PkcError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PkcError::ParameterViolation(m) => write!(f, "parameter violation: {m}"),
            PkcError::Ldlc(e) => write!(f, "{e}"),
            PkcError::Lattice(e) => write!(f, "{e}"),
            PkcError::Decoder(e) => write!(f, "{e}"),
            PkcError::DecodeFailure { .. } => write!(f, "decoder did not converge"),
            PkcError::Format(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for PkcError {}

impl From<LdlcError> for PkcError {
    fn from(e: LdlcError) -> Self {
        match e {
            LdlcError::Lattice(l) => PkcError::Lattice(l),
            other => PkcError::Ldlc(other),
        }
    }
}

impl From<LatticeError> for PkcError {
    fn from(e: LatticeError) -> Self {
        PkcError::Lattice(e)
    }
}

impl From<DecoderError> for PkcError {
    fn from(e: DecoderError) -> Self {
        PkcError::Decoder(e)
    }
}

impl From<FormatError> for PkcError {
    fn from(e: FormatError) -> Self {
        PkcError::Format(e)
    }
}

/// `σ_max = |det G|^(1/n) / √(2πe)`, the largest decodable noise deviation.
pub fn sigma_max(g: &IntMatrix) -> Result<f64, LatticeError> {
    let n = g.require_square()?;
    let d = det(g)?;
    if d.is_zero() {
        return Err(LatticeError::SingularMatrix);
    }
    Ok(sigma_max_from_log2_det(log2_abs(&d), n))
}

/// `σ_max` from `log2 |det|`; stays accurate for determinants of any size.
pub fn sigma_max_from_log2_det(log2_det: f64, n: usize) -> f64 {
    (log2_det / n as f64 - 0.5 * (2.0 * PI * E).log2()).exp2()
}

/// `σ_max` of `L(G_int)` for a code, using `det G_int = D^(n−1)`.
pub fn code_sigma_max(code: &LdlcCode) -> f64 {
    sigma_max_from_log2_det((code.n() - 1) as f64 * log2_abs(code.scale()), code.n())
}

/// Generates a code, its HNF public key and the matching secret key.
///
/// A code whose noise deviation would fall below [`MIN_SIGMA_INT`] is discarded
/// and a new one drawn from a derived seed.
pub fn keygen(params: &LatinSquareParams, gamma: f64) -> Result<(PublicKey, SecretKey), PkcError> {
    NoiseParams::new(gamma, 1.0)?;
    params.check()?;
    for attempt in 0..KEYGEN_ATTEMPTS {
        let mut p = params.clone();
        p.seed = params.seed.wrapping_add(attempt.wrapping_mul(0x9E37_79B9_7F4A_7C15));
        let code = generate(&p)?;
        let noise = NoiseParams::new(gamma, code_sigma_max(&code))?;
        if noise.sigma_int() < MIN_SIGMA_INT {
            continue;
        }
        return keys_from_code(code, noise.sigma_int(), DecoderConfig::default());
    }
    Err(LdlcError::GenerationFailure {
        attempts: KEYGEN_ATTEMPTS as usize,
    }
    .into())
}

/// Builds the key pair of a given code: `G' = HNF(G_int)` and `U_inv = G_int·G'⁻¹`.
pub fn keys_from_code(code: LdlcCode, sigma_int: f64, decoder_cfg: DecoderConfig) -> Result<(PublicKey, SecretKey), PkcError> {
    // D·ℤⁿ ⊆ L(G_int) because D·e_i = (e_i·H)·G_int
    let g_prime = hnf_with_modulus(code.g_int(), code.scale())?;
    let u_inv = right_divide_lower(code.g_int(), &g_prime)?;
    let pk = PublicKey {
        n: code.n(),
        d: code.params().d,
        g_prime,
        scale: code.scale().clone(),
        sigma_int,
        format_version: FORMAT_VERSION,
    };
    let sk = SecretKey {
        code,
        u_inv,
        decoder_cfg,
        sigma_int,
    };
    Ok((pk, sk))
}

/// Solves `X·L = A` for lower-triangular `L`, requiring an integral `X`.
fn right_divide_lower(a: &IntMatrix, l: &IntMatrix) -> Result<IntMatrix, LatticeError> {
    let n = l.require_square()?;
    let mut x = IntMatrix::zeros(a.rows(), n);
    for j in (0..n).rev() {
        let below: Vec<usize> = (j + 1..n).filter(|&k| !l[(k, j)].is_zero()).collect();
        for r in 0..a.rows() {
            let mut acc = a[(r, j)].clone();
            for &k in &below {
                acc -= &x[(r, k)] * &l[(k, j)];
            }
            let (q, rem) = acc.div_rem(&l[(j, j)]);
            if !rem.is_zero() {
                return Err(LatticeError::InvalidParameter("bases generate different lattices".into()));
            }
            x[(r, j)] = q;
        }
    }
    Ok(x)
}

/// `e_i = round(z_i·σ)` with `z_i` standard normal from Box–Muller on a
/// ChaCha20 stream seeded by `seed`.
pub fn sample_noise(n: usize, sigma_int: f64, seed: u64) -> Result<Vec<BigInt>, PkcError> {
    if !(sigma_int >= MIN_SIGMA_INT && sigma_int.is_finite()) {
        return Err(PkcError::ParameterViolation(format!(
            "sigma_int = {sigma_int} is below the floor {MIN_SIGMA_INT}"
        )));
    }
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let u1: f64 = 1.0 - rng.gen::<f64>();
        let u2: f64 = rng.gen();
        let radius = (-2.0 * u1.ln()).sqrt();
        for z in [radius * (2.0 * PI * u2).cos(), radius * (2.0 * PI * u2).sin()] {
            if out.len() < n {
                out.push(BigInt::from((z * sigma_int).round() as i64));
            }
        }
    }
    Ok(out)
}

/// `c = m·G' + e` with noise drawn from `seed`.
pub fn encrypt(pk: &PublicKey, m: &[BigInt], seed: u64) -> Result<Ciphertext, PkcError> {
    let e = sample_noise(pk.n, pk.sigma_int, seed)?;
    encrypt_with_noise(pk, m, &e)
}

/// `c = m·G' + e` for a caller-chosen `e`.
pub fn encrypt_with_noise(pk: &PublicKey, m: &[BigInt], e: &[BigInt]) -> Result<Ciphertext, PkcError> {
    if e.len() != pk.n {
        return Err(LatticeError::DimensionMismatch {
            expected: pk.n,
            found: e.len(),
        }
        .into());
    }
    let x = pk.g_prime.left_mul_vec(m)?;
    Ok(Ciphertext {
        c: x.iter().zip(e).map(|(a, b)| a + b).collect(),
        format_version: FORMAT_VERSION,
    })
}

/// Everything the decryption pipeline learns about a ciphertext.
#[derive(Clone, Debug, PartialEq)]
pub struct Decryption {
    pub m_hat: Vec<BigInt>,
    /// Parity coordinates `x̂·H/D` of the decoded lattice point.
    pub v_hat: Vec<BigInt>,
    /// The decoded point of `L(G_int)`.
    pub x_hat: Vec<BigInt>,
    pub converged: bool,
    pub iterations: usize,
}

/// Runs the full pipeline and reports the outcome whether or not the decoder converged.
pub fn decrypt_detailed(sk: &SecretKey, ct: &Ciphertext) -> Result<Decryption, PkcError> {
    let code = &sk.code;
    let n = code.n();
    if ct.c.len() != n {
        return Err(LatticeError::DimensionMismatch {
            expected: n,
            found: ct.c.len(),
        }
        .into());
    }
    let d = code.scale();
    // exact pre-reduction: c_red/D lands near the origin of the code lattice
    let w: Vec<BigInt> = code.h().left_mul_int(&ct.c)?.iter().map(|x| round_div(x, d)).collect();
    let shift = code.g_int().left_mul_vec(&w)?;
    let c_red: Vec<BigInt> = ct.c.iter().zip(&shift).map(|(a, b)| a - b).collect();
    let y: Vec<f64> = c_red.iter().map(|x| ratio_to_f64(x, d)).collect();
    let sigma = sk.sigma_int / ratio_to_f64(d, &BigInt::from(1));
    let mut dec = BpDecoder::new(code.h(), &y, sigma * sigma, &sk.decoder_cfg)?;
    let (est, converged, iterations) = dec.run(&sk.decoder_cfg);
    let v_hat: Vec<BigInt> = est.v_hat.iter().zip(&w).map(|(a, b)| a + b).collect();
    let x_hat = code.g_int().left_mul_vec(&v_hat)?;
    let m_hat = sk.u_inv.left_mul_vec(&v_hat)?;
    Ok(Decryption {
        m_hat,
        v_hat,
        x_hat,
        converged,
        iterations,
    })
}

/// Recovers the plaintext, or `DecodeFailure` carrying the best estimate.
pub fn decrypt(sk: &SecretKey, ct: &Ciphertext) -> Result<Vec<BigInt>, PkcError> {
    let r = decrypt_detailed(sk, ct)?;
    if r.converged {
        Ok(r.m_hat)
    } else {
        Err(PkcError::DecodeFailure { best: r.m_hat })
    }
}

/// `U = G'·H/D`, the unimodular transform with `G' = U·G_int`.
pub fn hnf_transform(pk: &PublicKey, sk: &SecretKey) -> Result<IntMatrix, PkcError> {
    let d = sk.code.scale();
    let rows = (0..pk.n)
        .map(|i| {
            let p = sk.code.h().left_mul_int(pk.g_prime.row(i))?;
            p.into_iter()
                .map(|x| {
                    let (q, r) = x.div_rem(d);
                    if r.is_zero() {
                        Ok(q)
                    } else {
                        Err(LatticeError::InvalidParameter("public key is not in the code lattice".into()))
                    }
                })
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(IntMatrix::from_rows(rows)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_poltyrev_value() {
        let s = sigma_max(&IntMatrix::identity(5)).unwrap();
        let expected = 1.0 / (2.0 * PI * E);
        assert!((s * s - expected).abs() / expected < 1e-12);
        let s = sigma_max(&IntMatrix::from_i64(&[[4, 0], [0, 1]])).unwrap();
        assert!((s * s - 4.0 / (2.0 * PI * E)).abs() < 1e-12);
    }

    #[test]
    fn noise_is_deterministic() {
        assert_eq!(sample_noise(9, 5.0, 3).unwrap(), sample_noise(9, 5.0, 3).unwrap());
        assert_ne!(sample_noise(9, 5.0, 3).unwrap(), sample_noise(9, 5.0, 4).unwrap());
        assert!(sample_noise(4, 3.9, 0).is_err());
    }

    #[test]
    fn small_round_trip() {
        let (pk, sk) = keygen(&LatinSquareParams::new(8, vec![2, 1, 1], 11), 0.3).unwrap();
        assert!(crate::matrix_core::is_hnf(&pk.g_prime));
        let m: Vec<BigInt> = (0..8).map(|i| BigInt::from(i * 31 % 256)).collect();
        let ct = encrypt(&pk, &m, 5).unwrap();
        assert_eq!(decrypt(&sk, &ct).unwrap(), m);
        let u = hnf_transform(&pk, &sk).unwrap();
        assert!(u.mul(&sk.u_inv).unwrap().is_identity());
    }
}
