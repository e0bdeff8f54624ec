//! `LDLC-PKC v1` key and ciphertext files.
//!
//! ```text
//! LDLC-PKC v1 <pk|sk|ct>
//! n=<n> d=<d> D=<D> sigma_int=<num>/<den>
//! ```
//! followed by the body: `G'` (pk); the code line, decoder line, sparse `H`
//! and `U_inv` (sk); a `1 × n` block (ct).

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};

use super::{Ciphertext, PkcError, PublicKey, SecretKey};
use crate::decoder::DecoderConfig;
use crate::ldlc::{parse_sequence, LatinSquareParams, LdlcCode, SparseParityMatrix};
use crate::matrix_core::num::{format_f64_ratio, parse_ratio, rational_to_f64};
use crate::matrix_core::text::{parse_fields, parse_int, write_int_matrix, FormatError, LineReader, MAX_TEXT_DIM};
use crate::matrix_core::IntMatrix;

pub const FORMAT_VERSION: u32 = 1;

const MAGIC: &str = "LDLC-PKC v1";

/// The parameter line shared by every file kind.
#[derive(Clone, Debug, PartialEq)]
pub struct KeyParams {
    pub n: usize,
    pub d: usize,
    pub scale: BigInt,
    pub sigma_int: f64,
}

impl PublicKey {
    pub fn params(&self) -> KeyParams {
        KeyParams {
            n: self.n,
            d: self.d,
            scale: self.scale.clone(),
            sigma_int: self.sigma_int,
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = header("pk", &self.params());
        write_int_matrix(&mut s, &self.g_prime);
        s
    }

    pub fn parse(text: &str) -> Result<Self, FormatError> {
        let mut r = LineReader::new(text);
        let p = read_header(&mut r, "pk")?;
        let at = r.line_no() + 1;
        let g_prime = r.int_matrix()?;
        r.expect_end()?;
        if g_prime.rows() != p.n || g_prime.cols() != p.n {
            return Err(FormatError::new(at, format!("public basis must be {0} × {0}", p.n)));
        }
        Ok(PublicKey {
            n: p.n,
            d: p.d,
            g_prime,
            scale: p.scale,
            sigma_int: p.sigma_int,
            format_version: FORMAT_VERSION,
        })
    }
}

impl SecretKey {
    pub fn params(&self) -> KeyParams {
        KeyParams {
            n: self.code.n(),
            d: self.code.params().d,
            scale: self.code.scale().clone(),
            sigma_int: self.sigma_int,
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = header("sk", &self.params());
        let p = self.code.params();
        let seq: Vec<String> = p.gen_seq.iter().map(i64::to_string).collect();
        writeln!(s, "seq={} seed={}", seq.join(","), p.seed).expect("write to String");
        let c = &self.decoder_cfg;
        let delta = c.delta.map_or_else(|| "auto".to_string(), format_f64_ratio);
        writeln!(
            s,
            "delta={delta} half_width={} max_iter={} window={} support={} parallel={}",
            format_f64_ratio(c.half_width),
            c.max_iterations,
            c.stability_window,
            format_f64_ratio(c.support_sigmas),
            u8::from(c.parallel)
        )
        .expect("write to String");
        self.code.h().write_text(&mut s);
        write_int_matrix(&mut s, &self.u_inv);
        s
    }

    /// Parses a secret key and rebuilds `G_int` from `H`.
    pub fn parse(text: &str) -> Result<Self, FormatError> {
        let mut r = LineReader::new(text);
        let p = read_header(&mut r, "sk")?;

        let line = r.next_line("code line")?;
        let at = r.line_no();
        let f = parse_fields(line, at, &["seq", "seed"])?;
        let seq = parse_sequence(f[0]).ok_or_else(|| FormatError::new(at, "bad generating sequence"))?;
        let seed = parse_int(f[1], at)?
            .to_u64()
            .ok_or_else(|| FormatError::new(at, "seed must fit in 64 bits"))?;
        let params = LatinSquareParams::new(p.n, seq, seed);
        if params.d != p.d {
            return Err(FormatError::new(at, "sequence length disagrees with d"));
        }
        params.check().map_err(|e| FormatError::new(at, e.to_string()))?;

        let line = r.next_line("decoder line")?;
        let at = r.line_no();
        let f = parse_fields(line, at, &["delta", "half_width", "max_iter", "window", "support", "parallel"])?;
        let delta = match f[0] {
            "auto" => None,
            v => Some(real(v, at)?),
        };
        let count = |v: &str| {
            parse_int(v, at)?
                .to_usize()
                .filter(|&x| x <= 1_000_000)
                .ok_or_else(|| FormatError::new(at, format!("count `{v}` out of range")))
        };
        let decoder_cfg = DecoderConfig {
            delta,
            half_width: real(f[1], at)?,
            max_iterations: count(f[2])?,
            stability_window: count(f[3])?,
            support_sigmas: real(f[4], at)?,
            parallel: match f[5] {
                "0" => false,
                "1" => true,
                _ => return Err(FormatError::new(at, "parallel must be 0 or 1")),
            },
        };
        decoder_cfg.check().map_err(|e| FormatError::new(at, e.to_string()))?;

        let at = r.line_no() + 1;
        let h = SparseParityMatrix::read(&mut r)?;
        if h.n() != p.n || h.degree() != p.d {
            return Err(FormatError::new(at, "parity matrix disagrees with n or d"));
        }
        let code = LdlcCode::from_parity(params, h).map_err(|e| FormatError::new(at, e.to_string()))?;
        if code.scale() != &p.scale {
            return Err(FormatError::new(at, "det H disagrees with D"));
        }
        let at = r.line_no() + 1;
        let u_inv = r.int_matrix()?;
        r.expect_end()?;
        if u_inv.rows() != p.n || u_inv.cols() != p.n {
            return Err(FormatError::new(at, format!("U_inv must be {0} × {0}", p.n)));
        }
        Ok(SecretKey {
            code,
            u_inv,
            decoder_cfg,
            sigma_int: p.sigma_int,
        })
    }
}

impl Ciphertext {
    pub fn to_text(&self, params: &KeyParams) -> String {
        let mut s = String::new();
        self.write_text(params, &mut s);
        s
    }

    pub fn write_text(&self, params: &KeyParams, out: &mut String) {
        out.push_str(&header("ct", params));
        let row = IntMatrix::from_rows(vec![self.c.clone()]).expect("one row");
        write_int_matrix(out, &row);
    }

    pub fn parse(text: &str) -> Result<(KeyParams, Self), FormatError> {
        let mut r = LineReader::new(text);
        let out = Self::read(&mut r)?;
        r.expect_end()?;
        Ok(out)
    }

    pub fn read(r: &mut LineReader<'_>) -> Result<(KeyParams, Self), FormatError> {
        let p = read_header(r, "ct")?;
        let at = r.line_no() + 1;
        let m = r.int_matrix()?;
        if m.rows() != 1 || m.cols() != p.n {
            return Err(FormatError::new(at, format!("ciphertext must be 1 × {}", p.n)));
        }
        let c = m.row(0).to_vec();
        Ok((
            p,
            Ciphertext {
                c,
                format_version: FORMAT_VERSION,
            },
        ))
    }
}

fn header(kind: &str, p: &KeyParams) -> String {
    format!(
        "{MAGIC} {kind}\nn={} d={} D={} sigma_int={}\n",
        p.n,
        p.d,
        p.scale,
        format_f64_ratio(p.sigma_int)
    )
}

fn read_header(r: &mut LineReader<'_>, kind: &str) -> Result<KeyParams, FormatError> {
    let line = r.next_line("file header")?;
    if line != format!("{MAGIC} {kind}") {
        return Err(FormatError::new(r.line_no(), format!("expected `{MAGIC} {kind}`")));
    }
    let line = r.next_line("parameter line")?;
    let at = r.line_no();
    let f = parse_fields(line, at, &["n", "d", "D", "sigma_int"])?;
    let dim = |v: &str| {
        parse_int(v, at)?
            .to_usize()
            .filter(|&x| (1..=MAX_TEXT_DIM).contains(&x))
            .ok_or_else(|| FormatError::new(at, format!("`{v}` out of range 1..={MAX_TEXT_DIM}")))
    };
    let n = dim(f[0])?;
    let d = dim(f[1])?;
    let scale = parse_int(f[2], at)?;
    if scale <= BigInt::one() {
        return Err(FormatError::new(at, "D must be at least 2"));
    }
    let sigma_int = real(f[3], at)?;
    Ok(KeyParams { n, d, scale, sigma_int })
}

/// A positive finite real written as `num/den`.
fn real(v: &str, at: usize) -> Result<f64, FormatError> {
    let q = v
        .split_once('/')
        .and_then(|(a, b)| parse_int(a, at).ok().zip(parse_int(b, at).ok()))
        .filter(|(_, b)| b.is_positive())
        .and_then(|_| parse_ratio(v))
        .ok_or_else(|| FormatError::new(at, format!("expected a ratio `num/den`, found `{v}`")))?;
    let x = rational_to_f64(&q);
    if !(x > 0.0 && x.is_finite()) {
        return Err(FormatError::new(at, format!("`{v}` must be positive and finite")));
    }
    Ok(x)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KeySizeReport {
    /// Bits of the serialized public key file.
    pub serialized_bits: u64,
    /// `Σ_j (n − j)·ceil(log2 diag_j)`.
    pub bound_bits: u64,
}

/// Serialized size of the public key against the HNF information bound.
pub fn key_size_report(pk: &PublicKey) -> Result<KeySizeReport, PkcError> {
    let n = pk.n;
    let mut bound = 0u64;
    for j in 0..n {
        let diag = &pk.g_prime[(j, j)];
        if !diag.is_positive() {
            return Err(PkcError::ParameterViolation("public basis is not in HNF".into()));
        }
        bound += (n - j) as u64 * ceil_log2(diag);
    }
    Ok(KeySizeReport {
        serialized_bits: 8 * pk.to_text().len() as u64,
        bound_bits: bound,
    })
}

/// `ceil(log2 x)` for `x ≥ 1`.
pub(crate) fn ceil_log2(x: &BigInt) -> u64 {
    let m: BigInt = x - 1;
    if m.is_positive() {
        m.bits()
    } else {
        0
    }
}
