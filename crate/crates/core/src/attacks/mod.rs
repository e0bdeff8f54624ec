//! The GGH baseline and the classical attacks on CVP-based encryption.
//!
//! Every attack returns an [`AttackReport`]. An attack only claims
//! [`AttackStatus::Recovered`] when re-encrypting its candidate leaves a
//! residual inside the caller's noise bound; known-answer harnesses then call
//! [`AttackReport::confirm`] against the hidden plaintext.

mod broadcast;
mod cvp;
mod ggh;
mod modular;

use std::fmt;
use std::time::Duration;

use num_bigint::BigInt;
use rayon::prelude::*;

pub use broadcast::{broadcast_intersection, broadcast_sum, BroadcastInstance, BROADCAST_EXACT_DIM};
pub use cvp::{
    embedding_attack, nearest_plane_attack, roundoff_attack, roundoff_search_space, NearestPlaneAttack, RoundoffAttack,
    RoundoffEstimate,
};
pub use ggh::{
    decrypt_with_basis, ggh_bases, ggh_decrypt, ggh_encrypt, ggh_encrypt_with_noise, ggh_keygen, ggh_noise, mix, residual_within,
    GghKeypair, GghParams,
};
pub use modular::{nguyen_modular_attack, solve_mod, ModSolution, ModularReduction, CANDIDATE_CAP};

use crate::matrix_core::LatticeError;

#[derive(Debug, Clone, PartialEq)]
pub enum AttackError {
    ParameterViolation(String),
    GenerationFailure { attempts: usize },
    Lattice(LatticeError),
}

impl fmt::Display for AttackError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AttackError::ParameterViolation(m) => write!(f, "parameter violation: {m}"),
            AttackError::GenerationFailure { attempts } => write!(f, "no nonsingular basis after {attempts} draws"),
            AttackError::Lattice(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for AttackError {}

impl From<LatticeError> for AttackError {
    fn from(e: LatticeError) -> Self {
        AttackError::Lattice(e)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AttackStatus {
    Recovered,
    Failed,
    /// The attack's structural precondition does not hold for this instance.
    Inapplicable,
}

impl fmt::Display for AttackStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AttackStatus::Recovered => "RECOVERED",
            AttackStatus::Failed => "FAILED",
            AttackStatus::Inapplicable => "INAPPLICABLE",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AttackReport {
    pub attack: &'static str,
    pub status: AttackStatus,
    pub recovered: Option<Vec<BigInt>>,
    pub detail: String,
    pub wall_time: Duration,
}

impl AttackReport {
    pub(crate) fn new(attack: &'static str, status: AttackStatus, recovered: Option<Vec<BigInt>>, detail: impl Into<String>) -> Self {
        AttackReport {
            attack,
            status,
            recovered,
            detail: detail.into(),
            wall_time: Duration::ZERO,
        }
    }

    pub fn success(&self) -> bool {
        self.status == AttackStatus::Recovered
    }

    /// Checks a claimed recovery against the true plaintext; a mismatch is
    /// downgraded to `Failed`.
    pub fn confirm(mut self, truth: &[BigInt]) -> Self {
        if self.success() && self.recovered.as_deref() != Some(truth) {
            self.status = AttackStatus::Failed;
            self.detail = format!("candidate passed the residual check but is not the plaintext; {}", self.detail);
        }
        self
    }

    pub(crate) fn timed(mut self, start: std::time::Instant) -> Self {
        self.wall_time = start.elapsed();
        self
    }

    /// `attack status time_ms detail`.
    pub fn summary_line(&self) -> String {
        format!(
            "{} {} {:.3}ms {}",
            self.attack,
            self.status,
            self.wall_time.as_secs_f64() * 1e3,
            self.detail
        )
    }
}

/// Outcome counts over a batch of trials, reports in trial order.
#[derive(Clone, Debug, PartialEq)]
pub struct TrialSummary {
    pub trials: usize,
    pub recovered: usize,
    pub failed: usize,
    pub inapplicable: usize,
    pub wall_time: Duration,
    pub reports: Vec<AttackReport>,
}

impl TrialSummary {
    pub fn success_rate(&self) -> f64 {
        if self.trials == 0 {
            0.0
        } else {
            self.recovered as f64 / self.trials as f64
        }
    }
}

/// Runs `trial(0..trials)`, optionally on the rayon pool. Each trial must own
/// its randomness (seeded from its index) so results do not depend on scheduling.
pub fn run_trials<F>(trials: usize, parallel: bool, trial: F) -> TrialSummary
where
    F: Fn(usize) -> AttackReport + Sync + Send,
{
    let start = std::time::Instant::now();
    let reports: Vec<AttackReport> = if parallel {
        (0..trials).into_par_iter().map(&trial).collect()
    } else {
        (0..trials).map(&trial).collect()
    };
    let count = |s| reports.iter().filter(|r| r.status == s).count();
    TrialSummary {
        trials,
        recovered: count(AttackStatus::Recovered),
        failed: count(AttackStatus::Failed),
        inapplicable: count(AttackStatus::Inapplicable),
        wall_time: start.elapsed(),
        reports,
    }
}
