use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use super::AttackError;
use crate::matrix_core::babai::babai_round_int;
use crate::matrix_core::{adjugate, det, inverse_rational, IntMatrix, LatticeError, RatMatrix};

/// Private-basis redraws before giving up on a nonsingular `R`.
const KEYGEN_ATTEMPTS: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GghParams {
    pub n: usize,
    /// Entry bound for `R'`.
    pub l: i64,
    /// Diagonal shift, `ceil(l·√n)` unless set explicitly.
    pub k: i64,
    /// Noise entries are `±beta`.
    pub beta: i64,
    pub mixing_rounds: usize,
}

impl GghParams {
    pub const DEFAULT_MIXING_ROUNDS: usize = 3;

    pub fn new(n: usize, l: i64, beta: i64) -> Self {
        GghParams {
            n,
            l,
            k: (l as f64 * (n as f64).sqrt()).ceil() as i64,
            beta,
            mixing_rounds: Self::DEFAULT_MIXING_ROUNDS,
        }
    }

    pub fn with_mixing_rounds(mut self, rounds: usize) -> Self {
        self.mixing_rounds = rounds;
        self
    }

    pub fn check(&self) -> Result<(), AttackError> {
        let bad = |m: String| Err(AttackError::ParameterViolation(m));
        if self.n == 0 {
            return bad("n must be positive".into());
        }
        if self.l < 1 || self.l > 1 << 20 {
            return bad(format!("l = {} must lie in 1..=2^20", self.l));
        }
        if self.k < 1 || self.k > 1 << 40 {
            return bad(format!("k = {} must lie in 1..=2^40", self.k));
        }
        if self.beta < 1 || self.beta > 1 << 20 {
            return bad(format!("beta = {} must lie in 1..=2^20", self.beta));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GghKeypair {
    pub params: GghParams,
    /// Private basis `R = R' + kI`.
    pub r: IntMatrix,
    /// Public basis `B = U·R`.
    pub b: IntMatrix,
    pub r_inv: RatMatrix,
    pub b_inv: RatMatrix,
}

pub fn ggh_keygen(params: &GghParams, seed: u64) -> Result<GghKeypair, AttackError> {
    let (r, b) = ggh_bases(params, seed)?;
    let (adj, det) = adjugate(&r)?;
    Ok(GghKeypair {
        params: params.clone(),
        r_inv: RatMatrix::new(adj, det)?,
        b_inv: inverse_rational(&b)?,
        r,
        b,
    })
}

/// The private and public bases `(R, B)` without their inverses.
pub fn ggh_bases(params: &GghParams, seed: u64) -> Result<(IntMatrix, IntMatrix), AttackError> {
    params.check()?;
    let n = params.n;
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    for _ in 0..KEYGEN_ATTEMPTS {
        let rows: Vec<Vec<i64>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| rng.gen_range(-params.l..=params.l) + if i == j { params.k } else { 0 })
                    .collect()
            })
            .collect();
        let r = IntMatrix::from_i64(&rows);
        if det(&r)?.is_zero() {
            continue;
        }
        let b = mix(&r, params.mixing_rounds, &mut rng);
        return Ok((r, b));
    }
    Err(AttackError::GenerationFailure {
        attempts: KEYGEN_ATTEMPTS,
    })
}

/// Left-multiplies by `rounds` random unimodular matrices. Each round adds
/// `±row_j` to every row `i` in turn (`j ≠ i` uniform), then swaps two rows.
pub fn mix(r: &IntMatrix, rounds: usize, rng: &mut impl Rng) -> IntMatrix {
    let n = r.rows();
    let mut b = r.clone();
    if n < 2 {
        return b;
    }
    for _ in 0..rounds {
        for i in 0..n {
            let j = (i + rng.gen_range(1..n)) % n;
            let src = b.row(j).to_vec();
            let add = rng.gen::<bool>();
            for (x, s) in b.row_mut(i).iter_mut().zip(&src) {
                if add {
                    *x += s;
                } else {
                    *x -= s;
                }
            }
        }
        let (a, c) = (rng.gen_range(0..n), rng.gen_range(0..n));
        b.swap_rows(a, c);
    }
    b
}

/// `e ∈ {±β}ⁿ` from fair coins.
pub fn ggh_noise(n: usize, beta: i64, seed: u64) -> Vec<BigInt> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| BigInt::from(if rng.gen::<bool>() { beta } else { -beta }))
        .collect()
}

/// `c = m·B + e` with `e ∈ {±β}ⁿ` drawn from `seed`.
pub fn ggh_encrypt(b: &IntMatrix, m: &[BigInt], beta: i64, seed: u64) -> Result<Vec<BigInt>, LatticeError> {
    ggh_encrypt_with_noise(b, m, &ggh_noise(b.cols(), beta, seed))
}

pub fn ggh_encrypt_with_noise(b: &IntMatrix, m: &[BigInt], e: &[BigInt]) -> Result<Vec<BigInt>, LatticeError> {
    if e.len() != b.cols() {
        return Err(LatticeError::DimensionMismatch {
            expected: b.cols(),
            found: e.len(),
        });
    }
    Ok(b.left_mul_vec(m)?.into_iter().zip(e).map(|(x, y)| x + y).collect())
}

/// `m̂ = round(c·R⁻¹)·R·B⁻¹`.
pub fn ggh_decrypt(keys: &GghKeypair, c: &[BigInt]) -> Result<Vec<BigInt>, LatticeError> {
    decrypt_with_basis(&keys.r, &keys.r_inv, &keys.b_inv, c)
}

/// Round-off decryption through an arbitrary basis of the public lattice.
pub fn decrypt_with_basis(
    basis: &IntMatrix,
    basis_inv: &RatMatrix,
    b_inv: &RatMatrix,
    c: &[BigInt],
) -> Result<Vec<BigInt>, LatticeError> {
    let coeffs = babai_round_int(basis_inv, c)?;
    let x = basis.left_mul_vec(&coeffs)?;
    let m = b_inv.left_mul_vec(&x)?;
    m.into_iter()
        .map(|q| {
            if q.is_integer() {
                Ok(q.to_integer())
            } else {
                Err(LatticeError::InvalidParameter("bases span different lattices".into()))
            }
        })
        .collect()
}

/// Whether `c − m·B` has every entry within `bound` in absolute value.
pub fn residual_within(b: &IntMatrix, m: &[BigInt], c: &[BigInt], bound: &BigInt) -> Result<bool, LatticeError> {
    let x = b.left_mul_vec(m)?;
    if x.len() != c.len() {
        return Err(LatticeError::DimensionMismatch {
            expected: x.len(),
            found: c.len(),
        });
    }
    Ok(c.iter().zip(&x).all(|(ci, xi)| {
        let r = ci - xi;
        if r < BigInt::zero() {
            -r <= *bound
        } else {
            r <= *bound
        }
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix_core::same_lattice;

    #[test]
    fn keys_span_the_same_lattice() {
        let keys = ggh_keygen(&GghParams::new(10, 4, 1), 3).unwrap();
        assert!(same_lattice(&keys.r, &keys.b));
        for i in 0..10 {
            assert!(keys.r[(i, i)] >= BigInt::from(keys.params.k - keys.params.l));
        }
    }

    #[test]
    fn zero_noise_decrypts() {
        let keys = ggh_keygen(&GghParams::new(8, 4, 1), 9).unwrap();
        let m: Vec<BigInt> = (0..8).map(|i| BigInt::from(i * 5 - 17)).collect();
        let c = ggh_encrypt_with_noise(&keys.b, &m, &vec![BigInt::zero(); 8]).unwrap();
        assert_eq!(ggh_decrypt(&keys, &c).unwrap(), m);
    }
}
