//! Integral LLL reduction (all Gram–Schmidt data kept as exact integers).
//!
//! Follows the classical integral formulation: `d_i` are the Gram determinants
//! of the first `i` rows and `λ_{k,j} = d_{j+1}·μ_{k,j}` are integers.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::error::LatticeError;
use super::matrix::IntMatrix;
use super::num::{dot, f64_to_rational, round_div};

pub const DEFAULT_DELTA: f64 = 0.99;

/// LLL-reduces the rows of `b` (linearly independent, any count ≤ cols).
pub fn lll(b: &IntMatrix, delta: f64) -> Result<IntMatrix, LatticeError> {
    if !(delta > 0.25 && delta < 1.0) {
        return Err(LatticeError::InvalidParameter(format!("LLL delta {delta} outside (1/4, 1)")));
    }
    let delta = f64_to_rational(delta).expect("finite delta");
    let (p, q) = (delta.numer().clone(), delta.denom().clone());
    let mut state = Integral::new(b.row_vecs())?;
    state.reduce(&p, &q)?;
    IntMatrix::from_rows(state.b)
}

struct Integral {
    b: Vec<Vec<BigInt>>,
    /// `d[0] = 1`, `d[i+1]` = Gram determinant of rows `0..=i`.
    d: Vec<BigInt>,
    lambda: Vec<Vec<BigInt>>,
}

impl Integral {
    fn new(b: Vec<Vec<BigInt>>) -> Result<Self, LatticeError> {
        let m = b.len();
        Ok(Integral {
            b,
            d: vec![BigInt::one(); m + 1],
            lambda: vec![vec![BigInt::zero(); m]; m],
        })
    }

    /// Incremental Gram–Schmidt for row `k`, all earlier rows already done.
    fn gram_schmidt_row(&mut self, k: usize) -> Result<(), LatticeError> {
        for j in 0..=k {
            let mut u = dot(&self.b[k], &self.b[j]);
            for i in 0..j {
                u = (&self.d[i + 1] * &u - &self.lambda[k][i] * &self.lambda[j][i]) / &self.d[i];
            }
            if j < k {
                self.lambda[k][j] = u;
            } else {
                if u.is_zero() {
                    return Err(LatticeError::SingularMatrix);
                }
                self.d[k + 1] = u;
            }
        }
        Ok(())
    }

    fn size_reduce(&mut self, k: usize, l: usize) {
        let twice: BigInt = &self.lambda[k][l] << 1u32;
        if twice.abs() <= self.d[l + 1] {
            return;
        }
        let r = round_div(&self.lambda[k][l], &self.d[l + 1]);
        let (lo, hi) = self.b.split_at_mut(k);
        for (x, y) in hi[0].iter_mut().zip(&lo[l]) {
            *x -= &r * y;
        }
        self.lambda[k][l] -= &r * &self.d[l + 1];
        for i in 0..l {
            let t = &r * &self.lambda[l][i];
            self.lambda[k][i] -= t;
        }
    }

    fn swap(&mut self, k: usize, kmax: usize) {
        self.b.swap(k, k - 1);
        for j in 0..k - 1 {
            let t = std::mem::take(&mut self.lambda[k][j]);
            self.lambda[k][j] = std::mem::replace(&mut self.lambda[k - 1][j], t);
        }
        let lam = self.lambda[k][k - 1].clone();
        let big_b = (&self.d[k - 1] * &self.d[k + 1] + &lam * &lam) / &self.d[k];
        for i in k + 1..=kmax {
            let t = self.lambda[i][k].clone();
            let new_ik = (&self.d[k + 1] * &self.lambda[i][k - 1] - &lam * &t) / &self.d[k];
            self.lambda[i][k - 1] = (&big_b * &t + &lam * &new_ik) / &self.d[k + 1];
            self.lambda[i][k] = new_ik;
        }
        self.d[k] = big_b;
    }

    fn reduce(&mut self, p: &BigInt, q: &BigInt) -> Result<(), LatticeError> {
        let m = self.b.len();
        if m == 0 {
            return Ok(());
        }
        self.gram_schmidt_row(0)?;
        let mut k = 1;
        let mut kmax = 0;
        while k < m {
            if k > kmax {
                kmax = k;
                self.gram_schmidt_row(k)?;
            }
            self.size_reduce(k, k - 1);
            let lam = &self.lambda[k][k - 1];
            let lhs = q * &self.d[k + 1] * &self.d[k - 1];
            let rhs = p * &self.d[k] * &self.d[k] - q * lam * lam;
            if lhs < rhs {
                self.swap(k, kmax);
                k = (k - 1).max(1);
            } else {
                for l in (0..k - 1).rev() {
                    self.size_reduce(k, l);
                }
                k += 1;
            }
        }
        Ok(())
    }
}

/// Exact check of size reduction and the Lovász condition with parameter `delta`.
pub fn is_lll_reduced(b: &IntMatrix, delta: f64) -> bool {
    let Some(delta) = f64_to_rational(delta) else {
        return false;
    };
    let Ok(gs) = gram_schmidt(b) else {
        return false;
    };
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    for i in 0..b.rows() {
        for j in 0..i {
            if gs.mu[i][j].abs() > half {
                return false;
            }
        }
        if i > 0 {
            let mu = &gs.mu[i][i - 1];
            let lhs = &gs.norms[i] + mu * mu * &gs.norms[i - 1];
            if lhs < &delta * &gs.norms[i - 1] {
                return false;
            }
        }
    }
    true
}

/// Rational Gram–Schmidt data: `mu[i][j]` and squared norms `‖b_i*‖²`.
pub struct GramSchmidt {
    pub mu: Vec<Vec<BigRational>>,
    pub norms: Vec<BigRational>,
}

/// Exact Gram–Schmidt orthogonalisation of the rows of `b`.
pub fn gram_schmidt(b: &IntMatrix) -> Result<GramSchmidt, LatticeError> {
    let mut state = Integral::new(b.row_vecs())?;
    let m = b.rows();
    for k in 0..m {
        state.gram_schmidt_row(k)?;
    }
    let norms = (0..m)
        .map(|i| BigRational::new(state.d[i + 1].clone(), state.d[i].clone()))
        .collect();
    let mu = (0..m)
        .map(|i| {
            (0..m)
                .map(|j| {
                    if j < i {
                        BigRational::new(state.lambda[i][j].clone(), state.d[j + 1].clone())
                    } else if i == j {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                })
                .collect()
        })
        .collect();
    Ok(GramSchmidt { mu, norms })
}

/// Gram determinants `d_0 = 1, …, d_m` of the row prefixes.
pub(crate) fn gram_determinants(b: &IntMatrix) -> Result<Vec<BigInt>, LatticeError> {
    let mut state = Integral::new(b.row_vecs())?;
    for k in 0..b.rows() {
        state.gram_schmidt_row(k)?;
    }
    Ok(state.d)
}

/// True when `a` and `b` generate the same full-rank lattice.
pub fn same_lattice(a: &IntMatrix, b: &IntMatrix) -> bool {
    use super::linalg::{det, inverse_rational};
    let (Ok(inv), Ok(da), Ok(db)) = (inverse_rational(b), det(a), det(b)) else {
        return false;
    };
    match inv.left_mul_int(a).ok().and_then(|t| t.to_integer()) {
        Some(_) => da.abs() == db.abs() && !da.is_zero(),
        None => false,
    }
}
