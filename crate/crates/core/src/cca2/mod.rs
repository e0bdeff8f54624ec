//! Fujisaki–Okamoto conversion of the public-key scheme.
//!
//! `c1 = m'·G' + e` with `m' = E(e, m)`, and `c2 = m ⊕ stream(F(e))` under a
//! keyed tag. Decryption recovers `e` exactly, so every check is an equality.

use std::fmt::Write as _;

use num_bigint::BigInt;
use sha3::digest::{ExtendableOutput, Update, XofReader};
use sha3::Shake256;

use crate::matrix_core::text::{write_int_row, FormatError, LineReader};
use crate::pkc::{decrypt_detailed, sample_noise, Ciphertext, KeyParams, PkcError, PublicKey, SecretKey, FORMAT_VERSION};

/// Bytes of the symmetric key and of the integrity tag.
pub const KEY_BYTES: usize = 32;

/// Entries of `m'` lie in `[0, 2^16)`.
pub const MESSAGE_BITS: u32 = 16;

/// Hash-XOF instantiation of the two random oracles.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleSuite {
    pub e_domain: &'static [u8],
    pub f_domain: &'static [u8],
    pub stream_domain: &'static [u8],
    pub tag_domain: &'static [u8],
}

impl Default for OracleSuite {
    fn default() -> Self {
        OracleSuite {
            e_domain: b"LDLC-PKC/v1/E",
            f_domain: b"LDLC-PKC/v1/F",
            stream_domain: b"LDLC-PKC/v1/stream",
            tag_domain: b"LDLC-PKC/v1/tag",
        }
    }
}

impl OracleSuite {
    fn xof(&self, domain: &[u8], parts: &[&[u8]]) -> impl XofReader {
        let mut h = Shake256::default();
        h.update(&(domain.len() as u64).to_le_bytes());
        h.update(domain);
        for p in parts {
            h.update(&(p.len() as u64).to_le_bytes());
            h.update(p);
        }
        h.finalize_xof()
    }

    /// `E(e, m)`: `n` entries in `[0, 2^16)`.
    pub fn e(&self, noise: &[BigInt], m: &[u8]) -> Vec<BigInt> {
        let mut r = self.xof(self.e_domain, &[&noise_bytes(noise), m]);
        (0..noise.len())
            .map(|_| {
                let mut b = [0u8; 2];
                r.read(&mut b);
                BigInt::from(u16::from_le_bytes(b))
            })
            .collect()
    }

    /// `F(e)`: the symmetric key.
    pub fn f(&self, noise: &[BigInt]) -> [u8; KEY_BYTES] {
        let mut k = [0u8; KEY_BYTES];
        self.xof(self.f_domain, &[&noise_bytes(noise)]).read(&mut k);
        k
    }

    fn keystream_xor(&self, key: &[u8; KEY_BYTES], data: &[u8]) -> Vec<u8> {
        let mut stream = vec![0u8; data.len()];
        self.xof(self.stream_domain, &[key]).read(&mut stream);
        stream.iter().zip(data).map(|(s, d)| s ^ d).collect()
    }

    fn tag(&self, key: &[u8; KEY_BYTES], c2: &[u8]) -> [u8; KEY_BYTES] {
        let mut t = [0u8; KEY_BYTES];
        self.xof(self.tag_domain, &[key, c2]).read(&mut t);
        t
    }
}

/// Canonical bytes of a noise vector: its text row.
pub fn noise_bytes(e: &[BigInt]) -> Vec<u8> {
    let mut s = String::new();
    write_int_row(&mut s, e);
    s.into_bytes()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FoCiphertext {
    pub c1: Ciphertext,
    pub c2: Vec<u8>,
    pub tag: [u8; KEY_BYTES],
    pub format_version: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FoOutcome {
    Accept(Vec<u8>),
    Reject,
}

pub fn fo_encrypt(pk: &PublicKey, m: &[u8], seed: u64) -> Result<FoCiphertext, PkcError> {
    fo_encrypt_with(&OracleSuite::default(), pk, m, seed)
}

pub fn fo_encrypt_with(oracles: &OracleSuite, pk: &PublicKey, m: &[u8], seed: u64) -> Result<FoCiphertext, PkcError> {
    if m.is_empty() {
        return Err(PkcError::ParameterViolation("message must be nonempty".into()));
    }
    let e = sample_noise(pk.n, pk.sigma_int, seed)?;
    let m_prime = oracles.e(&e, m);
    let c1 = crate::pkc::encrypt_with_noise(pk, &m_prime, &e)?;
    let key = oracles.f(&e);
    let c2 = oracles.keystream_xor(&key, m);
    let tag = oracles.tag(&key, &c2);
    Ok(FoCiphertext {
        c1,
        c2,
        tag,
        format_version: FORMAT_VERSION,
    })
}

pub fn fo_decrypt(sk: &SecretKey, ct: &FoCiphertext) -> Result<FoOutcome, PkcError> {
    fo_decrypt_with(&OracleSuite::default(), sk, ct)
}

/// Rejects unless the decoded noise reproduces `c1` exactly.
///
/// With `ê = c1 − m̂'·G'`, the recheck `E(ê, m̂)·G' + ê = c1` is equivalent to
/// `E(ê, m̂) = m̂'` since `G'` is nonsingular; `m̂'·G' = v̂·G_int` needs only the secret key.
pub fn fo_decrypt_with(oracles: &OracleSuite, sk: &SecretKey, ct: &FoCiphertext) -> Result<FoOutcome, PkcError> {
    if ct.c2.is_empty() {
        return Ok(FoOutcome::Reject);
    }
    let d = decrypt_detailed(sk, &ct.c1)?;
    if !d.converged {
        return Ok(FoOutcome::Reject);
    }
    let e_hat: Vec<BigInt> = ct.c1.c.iter().zip(&d.x_hat).map(|(c, x)| c - x).collect();
    let key = oracles.f(&e_hat);
    if !constant_time_eq(&oracles.tag(&key, &ct.c2), &ct.tag) {
        return Ok(FoOutcome::Reject);
    }
    let m = oracles.keystream_xor(&key, &ct.c2);
    if oracles.e(&e_hat, &m) != d.m_hat {
        return Ok(FoOutcome::Reject);
    }
    Ok(FoOutcome::Accept(m))
}

fn constant_time_eq(a: &[u8], b: &[u8]) -> bool {
    a.len() == b.len() && a.iter().zip(b).fold(0u8, |acc, (x, y)| acc | (x ^ y)) == 0
}

impl FoCiphertext {
    pub fn to_text(&self, params: &KeyParams) -> String {
        let mut s = String::from("LDLC-PKC v1 fo\n");
        self.c1.write_text(params, &mut s);
        writeln!(s, "c2={}", hex::encode(&self.c2)).expect("write to String");
        writeln!(s, "tag={}", hex::encode(self.tag)).expect("write to String");
        s
    }

    pub fn parse(text: &str) -> Result<(KeyParams, Self), FormatError> {
        let mut r = LineReader::new(text);
        if r.next_line("file header")? != "LDLC-PKC v1 fo" {
            return Err(FormatError::new(r.line_no(), "expected `LDLC-PKC v1 fo`"));
        }
        let (params, c1) = Ciphertext::read(&mut r)?;
        let c2 = hex_field(&mut r, "c2")?;
        if c2.is_empty() {
            return Err(FormatError::new(r.line_no(), "c2 must be nonempty"));
        }
        let tag = hex_field(&mut r, "tag")?
            .try_into()
            .map_err(|_| FormatError::new(r.line_no(), format!("tag must be {KEY_BYTES} bytes")))?;
        r.expect_end()?;
        Ok((
            params,
            FoCiphertext {
                c1,
                c2,
                tag,
                format_version: FORMAT_VERSION,
            },
        ))
    }
}

/// `key=<lowercase hex>`.
fn hex_field(r: &mut LineReader<'_>, key: &str) -> Result<Vec<u8>, FormatError> {
    let line = r.next_line(key)?;
    let at = r.line_no();
    let value = line
        .strip_prefix(key)
        .and_then(|v| v.strip_prefix('='))
        .ok_or_else(|| FormatError::new(at, format!("expected `{key}=`")))?;
    if value.bytes().any(|b| b.is_ascii_uppercase()) {
        return Err(FormatError::new(at, "hex must be lowercase"));
    }
    hex::decode(value).map_err(|e| FormatError::new(at, format!("bad hex: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oracles_are_domain_separated() {
        let o = OracleSuite::default();
        let e: Vec<BigInt> = [3, -1, 0, 7].iter().map(|&x| BigInt::from(x)).collect();
        assert_eq!(o.e(&e, b"x"), o.e(&e, b"x"));
        assert_ne!(o.e(&e, b"x"), o.e(&e, b"y"));
        let k = o.f(&e);
        let mut first = [0u8; KEY_BYTES];
        o.xof(o.e_domain, &[&noise_bytes(&e)]).read(&mut first);
        assert_ne!(first, k);
        assert!(o.e(&e, b"x").iter().all(|v| *v < BigInt::from(1u32 << MESSAGE_BITS)));
    }

    #[test]
    fn keystream_is_an_involution() {
        let o = OracleSuite::default();
        let key = [9u8; KEY_BYTES];
        let c = o.keystream_xor(&key, b"hello");
        assert_ne!(c, b"hello");
        assert_eq!(o.keystream_xor(&key, &c), b"hello");
    }
}
