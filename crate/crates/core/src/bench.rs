//! Measurement sweeps shared by the command-line tool and the test suite.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;

use crate::attacks::{ggh_bases, AttackError, GghParams};
use crate::decoder::DecoderConfig;
use crate::ldlc::{generate, LatinSquareParams, LdlcCode};
use crate::matrix_core::text::write_int_matrix;
use crate::pkc::{code_sigma_max, decrypt_detailed, encrypt, key_size_report, keygen, keys_from_code, PkcError};

/// Messages drawn in simulations have entries in `[−MESSAGE_RANGE, MESSAGE_RANGE)`.
pub const MESSAGE_RANGE: i64 = 1 << 12;

#[derive(Clone, Debug, PartialEq)]
pub struct SimulationRow {
    pub gamma: f64,
    pub trials: usize,
    pub successes: usize,
    /// Mean decoder iterations over all trials, converged or not.
    pub mean_iterations: f64,
}

impl SimulationRow {
    pub const CSV_HEADER: &'static str = "gamma,trials,successes,mean_iterations";

    pub fn csv(&self) -> String {
        format!("{},{},{},{:.4}", self.gamma, self.trials, self.successes, self.mean_iterations)
    }
}

/// Seeded random plaintext for trial `index`.
pub fn trial_message(n: usize, seed: u64, index: u64) -> Vec<BigInt> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed ^ index.wrapping_mul(0xD134_2543_DE82_EF95));
    (0..n).map(|_| BigInt::from(rng.gen_range(-MESSAGE_RANGE..MESSAGE_RANGE))).collect()
}

/// End-to-end encryption round trips with `σ = gamma·σ_max` on a fixed code.
/// A trial succeeds when the decoder converges to the original plaintext.
pub fn simulate(code: &LdlcCode, gamma: f64, trials: usize, seed: u64, parallel: bool) -> Result<SimulationRow, PkcError> {
    let sigma_int = gamma * code_sigma_max(code);
    let (pk, sk) = keys_from_code(code.clone(), sigma_int, DecoderConfig::default())?;
    let trial = |t: usize| -> Result<(bool, usize), PkcError> {
        let m = trial_message(pk.n, seed, t as u64);
        let ct = encrypt(&pk, &m, seed.wrapping_add(t as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))?;
        let d = decrypt_detailed(&sk, &ct)?;
        Ok((d.converged && d.m_hat == m, d.iterations))
    };
    let outcomes: Vec<(bool, usize)> = if parallel {
        (0..trials).into_par_iter().map(trial).collect::<Result<_, _>>()?
    } else {
        (0..trials).map(trial).collect::<Result<_, _>>()?
    };
    let successes = outcomes.iter().filter(|o| o.0).count();
    let iterations: usize = outcomes.iter().map(|o| o.1).sum();
    Ok(SimulationRow {
        gamma,
        trials,
        successes,
        mean_iterations: if trials == 0 { 0.0 } else { iterations as f64 / trials as f64 },
    })
}

/// Sweeps `gammas` on one generated code.
pub fn simulate_sweep(
    params: &LatinSquareParams,
    gammas: &[f64],
    trials: usize,
    parallel: bool,
) -> Result<Vec<SimulationRow>, PkcError> {
    let code = generate(params)?;
    gammas
        .iter()
        .map(|&g| simulate(&code, g, trials, params.seed, parallel))
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct KeySizeRow {
    pub n: usize,
    pub hnf_bits: u64,
    pub ggh_bits: u64,
    /// `100·(1 − hnf_bits/ggh_bits)`.
    pub reduction_percent: f64,
}

impl KeySizeRow {
    pub const CSV_HEADER: &'static str = "n,hnf_bits,ggh_bits,reduction_percent";

    pub fn csv(&self) -> String {
        format!("{},{},{},{:.2}", self.n, self.hnf_bits, self.ggh_bits, self.reduction_percent)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct KeySizeConfig {
    pub gen_seq: Vec<i64>,
    pub gamma: f64,
    pub ggh_l: i64,
    /// `None` mixes for `n` rounds.
    pub ggh_mixing_rounds: Option<usize>,
}

impl Default for KeySizeConfig {
    fn default() -> Self {
        KeySizeConfig {
            gen_seq: vec![2, 1, 1],
            gamma: 0.5,
            ggh_l: 4,
            ggh_mixing_rounds: None,
        }
    }
}

#[derive(Debug)]
pub enum BenchError {
    Pkc(PkcError),
    Attack(AttackError),
}

impl std::fmt::Display for BenchError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BenchError::Pkc(e) => write!(f, "{e}"),
            BenchError::Attack(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for BenchError {}

/// Serialized sizes of an HNF public key and a GGH public basis in dimension `n`.
pub fn keysize_row(n: usize, cfg: &KeySizeConfig, seed: u64) -> Result<KeySizeRow, BenchError> {
    let (pk, _) = keygen(&LatinSquareParams::new(n, cfg.gen_seq.clone(), seed), cfg.gamma).map_err(BenchError::Pkc)?;
    let hnf_bits = key_size_report(&pk).map_err(BenchError::Pkc)?.serialized_bits;
    let ggh = GghParams::new(n, cfg.ggh_l, 1).with_mixing_rounds(cfg.ggh_mixing_rounds.unwrap_or(n));
    let (_, b) = ggh_bases(&ggh, seed).map_err(BenchError::Attack)?;
    let mut text = String::new();
    write_int_matrix(&mut text, &b);
    let ggh_bits = 8 * text.len() as u64;
    Ok(KeySizeRow {
        n,
        hnf_bits,
        ggh_bits,
        reduction_percent: 100.0 * (1.0 - hnf_bits as f64 / ggh_bits as f64),
    })
}
