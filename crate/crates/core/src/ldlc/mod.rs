//! Latin-square low-density lattice codes over an integer generating sequence.
//!
//! The code lattice is `{ y : y·H ∈ ℤⁿ }`. Its integer multiple `D·L` is
//! generated by `G_int = D·H⁻¹` where `D = |det H|`.

mod code;
mod sparse;

use std::fmt;

pub use code::{encode, generate, generate_parity, membership, validate, Check, LdlcCode, ValidationReport};
pub use sparse::SparseParityMatrix;

use crate::matrix_core::LatticeError;

pub const DEFAULT_RETRY_BUDGET: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatinSquareParams {
    pub n: usize,
    pub d: usize,
    /// Magnitudes `h_1 ≥ h_2 ≥ … ≥ h_d ≥ 1`.
    pub gen_seq: Vec<i64>,
    pub seed: u64,
}

impl LatinSquareParams {
    pub fn new(n: usize, gen_seq: Vec<i64>, seed: u64) -> Self {
        LatinSquareParams {
            n,
            d: gen_seq.len(),
            gen_seq,
            seed,
        }
    }

    /// `α = Σ_{i≥2} h_i² / h_1²`.
    pub fn alpha(&self) -> f64 {
        match self.gen_seq.split_first() {
            Some((&h1, rest)) if h1 != 0 => {
                rest.iter().map(|&h| (h * h) as f64).sum::<f64>() / (h1 * h1) as f64
            }
            _ => f64::INFINITY,
        }
    }

    pub fn check(&self) -> Result<(), LdlcError> {
        let violation = |m: String| Err(LdlcError::ParameterViolation(m));
        if self.d < 2 {
            return violation(format!("degree d = {} must be at least 2", self.d));
        }
        if self.gen_seq.len() != self.d {
            return violation(format!("sequence has {} values for d = {}", self.gen_seq.len(), self.d));
        }
        if self.d > self.n {
            return violation(format!("degree d = {} exceeds n = {}", self.d, self.n));
        }
        if self.gen_seq.iter().any(|&h| !(1..=1 << 20).contains(&h)) {
            return violation("sequence values must lie in 1..=2^20".into());
        }
        if self.gen_seq.windows(2).any(|w| w[0] < w[1]) {
            return violation("sequence must be non-increasing".into());
        }
        // exact α < 1  ⇔  Σ_{i≥2} h_i² < h_1²
        let h1 = self.gen_seq[0];
        if self.gen_seq[1..].iter().map(|&h| h * h).sum::<i64>() >= h1 * h1 {
            return violation(format!("alpha = {} is not below 1", self.alpha()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LdlcError {
    ParameterViolation(String),
    GenerationFailure { attempts: usize },
    Lattice(LatticeError),
}

impl fmt::Display for LdlcError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LdlcError::ParameterViolation(m) => write!(f, "parameter violation: {m}"),
            LdlcError::GenerationFailure { attempts } => {
                write!(f, "no usable parity matrix after {attempts} attempts")
            }
            LdlcError::Lattice(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for LdlcError {}

impl From<LatticeError> for LdlcError {
    fn from(e: LatticeError) -> Self {
        LdlcError::Lattice(e)
    }
}

/// Parses a comma-separated generating sequence such as `2,1,1`.
pub fn parse_sequence(s: &str) -> Option<Vec<i64>> {
    s.split(',').map(|t| t.trim().parse().ok()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alpha_arithmetic() {
        assert_eq!(LatinSquareParams::new(8, vec![2, 1, 1], 0).alpha(), 0.5);
        assert!(LatinSquareParams::new(8, vec![2, 1, 1], 0).check().is_ok());
        assert!(LatinSquareParams::new(8, vec![1, 1], 0).check().is_err());
        assert!(LatinSquareParams::new(8, vec![2, 1, 1, 1, 1], 0).check().is_err());
        assert!(LatinSquareParams::new(2, vec![3, 1, 1], 0).check().is_err());
        assert!(LatinSquareParams::new(8, vec![1, 2], 0).check().is_err());
    }
}
