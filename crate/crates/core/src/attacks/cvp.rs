use std::f64::consts::{E, PI};
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::ggh::residual_within;
use super::{AttackReport, AttackStatus};
use crate::matrix_core::babai::babai_round_int;
use crate::matrix_core::num::log2_abs;
use crate::matrix_core::{inverse_rational, lll, IntMatrix, LatticeError, NearestPlane, RatMatrix, DEFAULT_DELTA};

/// Round-off attack with `B⁻¹` precomputed for repeated ciphertexts.
pub struct RoundoffAttack {
    basis: IntMatrix,
    inv: RatMatrix,
}

impl RoundoffAttack {
    pub fn new(pub_basis: &IntMatrix) -> Result<Self, LatticeError> {
        Ok(RoundoffAttack {
            basis: pub_basis.clone(),
            inv: inverse_rational(pub_basis)?,
        })
    }

    /// `m̃ = round(c·B⁻¹)`, accepted when `c − m̃·B` is within `bound`.
    pub fn attack(&self, c: &[BigInt], bound: &BigInt) -> Result<AttackReport, LatticeError> {
        let start = Instant::now();
        let m = babai_round_int(&self.inv, c)?;
        Ok(verdict("roundoff", &self.basis, m, c, bound)?.timed(start))
    }
}

pub fn roundoff_attack(pub_basis: &IntMatrix, c: &[BigInt], bound: &BigInt) -> Result<AttackReport, LatticeError> {
    let start = Instant::now();
    let r = RoundoffAttack::new(pub_basis)?.attack(c, bound)?;
    Ok(r.timed(start))
}

/// Nearest-plane attack; the LLL reduction is the offline phase, done once.
pub struct NearestPlaneAttack {
    basis: IntMatrix,
    inv: RatMatrix,
    solver: NearestPlane,
}

impl NearestPlaneAttack {
    pub fn new(pub_basis: &IntMatrix) -> Result<Self, LatticeError> {
        let reduced = lll(pub_basis, DEFAULT_DELTA)?;
        Ok(NearestPlaneAttack {
            basis: pub_basis.clone(),
            inv: inverse_rational(pub_basis)?,
            solver: NearestPlane::new(&reduced)?,
        })
    }

    pub fn reduced_basis(&self) -> &IntMatrix {
        self.solver.basis()
    }

    pub fn attack(&self, c: &[BigInt], bound: &BigInt) -> Result<AttackReport, LatticeError> {
        let start = Instant::now();
        let coeffs = self.solver.solve_scaled(c.to_vec(), &BigInt::one())?;
        let x = self.solver.basis().left_mul_vec(&coeffs)?;
        let m = integral(self.inv.left_mul_vec(&x)?)?;
        Ok(verdict("nearest-plane", &self.basis, m, c, bound)?.timed(start))
    }
}

pub fn nearest_plane_attack(pub_basis: &IntMatrix, c: &[BigInt], bound: &BigInt) -> Result<AttackReport, LatticeError> {
    let start = Instant::now();
    let r = NearestPlaneAttack::new(pub_basis)?.attack(c, bound)?;
    Ok(r.timed(start))
}

fn verdict(name: &'static str, basis: &IntMatrix, m: Vec<BigInt>, c: &[BigInt], bound: &BigInt) -> Result<AttackReport, LatticeError> {
    Ok(if residual_within(basis, &m, c, bound)? {
        AttackReport::new(name, AttackStatus::Recovered, Some(m), "residual within the noise bound")
    } else {
        AttackReport::new(name, AttackStatus::Failed, None, "residual exceeds the noise bound")
    })
}

fn integral(v: Vec<num_rational::BigRational>) -> Result<Vec<BigInt>, LatticeError> {
    v.into_iter()
        .map(|q| {
            if q.is_integer() {
                Ok(q.to_integer())
            } else {
                Err(LatticeError::InvalidParameter("point is not in the lattice".into()))
            }
        })
        .collect()
}

/// Embedding attack: LLL on `[[B, 0], [c, 1]]`, then a reduced row of the
/// form `±(e, 1)` with every `|e_i| ≤ bound` gives `m = (c − e)·B⁻¹`.
pub fn embedding_attack(pub_basis: &IntMatrix, c: &[BigInt], bound: &BigInt) -> Result<AttackReport, LatticeError> {
    let start = Instant::now();
    let n = pub_basis.require_square()?;
    if c.len() != n {
        return Err(LatticeError::DimensionMismatch {
            expected: n,
            found: c.len(),
        });
    }
    let mut rows: Vec<Vec<BigInt>> = pub_basis
        .row_vecs()
        .into_iter()
        .map(|mut r| {
            r.push(BigInt::zero());
            r
        })
        .collect();
    let mut last = c.to_vec();
    last.push(BigInt::one());
    rows.push(last);
    let reduced = lll(&IntMatrix::from_rows(rows)?, DEFAULT_DELTA)?;
    let Some((idx, e)) = find_embedded_error(&reduced, bound) else {
        return Ok(AttackReport::new(
            "embedding",
            AttackStatus::Failed,
            None,
            "no reduced row of the form ±(e, 1) within the bound",
        )
        .timed(start));
    };
    let x: Vec<BigInt> = c.iter().zip(&e).map(|(ci, ei)| ci - ei).collect();
    let m = integral(inverse_rational(pub_basis)?.left_mul_vec(&x)?)?;
    Ok(AttackReport::new(
        "embedding",
        AttackStatus::Recovered,
        Some(m),
        format!("error found in reduced row {idx}"),
    )
    .timed(start))
}

/// First reduced row `±(e, 1)` with `‖e‖∞ ≤ bound`, normalised to trailing `+1`.
pub(crate) fn find_embedded_error(reduced: &IntMatrix, bound: &BigInt) -> Option<(usize, Vec<BigInt>)> {
    let n = reduced.cols() - 1;
    (0..reduced.rows()).find_map(|i| {
        let row = reduced.row(i);
        let sign = if row[n].is_one() {
            BigInt::one()
        } else if (-&row[n]).is_one() {
            -BigInt::one()
        } else {
            return None;
        };
        let e: Vec<BigInt> = row[..n].iter().map(|x| x * &sign).collect();
        e.iter().all(|x| x.abs() <= *bound).then_some((i, e))
    })
}

/// Search-space estimate for the round-off attack, in the log2 domain.
///
/// With `c = m·B + e` the attacker must guess `d = e·B⁻¹`, so `g''_i` is
/// column `i` of `B⁻¹` and `d_i` has deviation `σ‖g''_i‖`.
#[derive(Clone, Debug, PartialEq)]
pub struct RoundoffEstimate {
    /// `h(d) = (n/2)·log2(πeσ²) + Σ log2‖g''_i‖`, the published form.
    pub entropy_bits: f64,
    /// The same with the Gaussian entropy constant `2πe`.
    pub entropy_bits_standard: f64,
    /// `log2 N_d`, equal to `entropy_bits`.
    pub log2_search_space: f64,
    pub log2_g_norms: Vec<f64>,
    /// `N_d < 2^(−n/2)·Π‖g''_i‖`; only evaluated when `σ² < 1/(2πe)`.
    pub bound_holds: Option<bool>,
}

impl RoundoffEstimate {
    pub fn g_norms(&self) -> Vec<f64> {
        self.log2_g_norms.iter().map(|l| l.exp2()).collect()
    }
}

pub fn roundoff_search_space(pub_basis: &IntMatrix, sigma: f64) -> Result<RoundoffEstimate, LatticeError> {
    let n = pub_basis.require_square()?;
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(LatticeError::InvalidParameter(format!("sigma = {sigma} must be positive")));
    }
    let inv = inverse_rational(pub_basis)?;
    let log2_den = log2_abs(inv.denominator());
    let num = inv.numerators();
    let log2_g_norms: Vec<f64> = (0..n)
        .map(|i| {
            let sq = num.column(i).iter().fold(BigInt::zero(), |acc, x| acc + x * x);
            0.5 * log2_abs(&sq) - log2_den
        })
        .collect();
    let sum: f64 = log2_g_norms.iter().sum();
    let half_n = n as f64 / 2.0;
    let log2_sigma2 = 2.0 * sigma.log2();
    let entropy_bits = half_n * ((PI * E).log2() + log2_sigma2) + sum;
    let entropy_bits_standard = half_n * ((2.0 * PI * E).log2() + log2_sigma2) + sum;
    let bound_holds = (sigma * sigma < 1.0 / (2.0 * PI * E)).then_some(entropy_bits < sum - half_n);
    Ok(RoundoffEstimate {
        entropy_bits,
        entropy_bits_standard,
        log2_search_space: entropy_bits,
        log2_g_norms,
        bound_holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_search_space() {
        let est = roundoff_search_space(&IntMatrix::identity(6), 0.1).unwrap();
        let expected = 3.0 * (PI * E * 0.01).log2();
        assert!((est.log2_search_space - expected).abs() < 1e-12);
        assert!(est.log2_g_norms.iter().all(|&l| l == 0.0));
        assert_eq!(est.bound_holds, Some(true));
    }

    #[test]
    fn zero_noise_is_always_recovered() {
        let b = IntMatrix::from_i64(&[[7, 1, 0], [2, 9, 1], [0, 3, 8]]);
        let m: Vec<BigInt> = [3, -4, 5].iter().map(|&x| BigInt::from(x)).collect();
        let c = b.left_mul_vec(&m).unwrap();
        let zero = BigInt::zero();
        for r in [
            roundoff_attack(&b, &c, &zero).unwrap(),
            nearest_plane_attack(&b, &c, &zero).unwrap(),
            embedding_attack(&b, &c, &zero).unwrap(),
        ] {
            assert_eq!(r.clone().confirm(&m).status, AttackStatus::Recovered, "{}", r.attack);
        }
    }
}
