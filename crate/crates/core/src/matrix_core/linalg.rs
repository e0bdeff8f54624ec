//! Fraction-free determinant and inverse.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::error::LatticeError;
use super::matrix::{IntMatrix, RatMatrix};

/// Exact determinant by Bareiss elimination.
pub fn det(a: &IntMatrix) -> Result<BigInt, LatticeError> {
    let n = a.require_square()?;
    if n == 0 {
        return Ok(BigInt::one());
    }
    let mut m: Vec<Vec<BigInt>> = a.row_vecs();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    sign = -sign;
                }
                None => return Ok(BigInt::zero()),
            }
        }
        let (top, bottom) = m.split_at_mut(k + 1);
        let pivot_row = &top[k];
        for row in bottom.iter_mut() {
            for j in k + 1..n {
                let v = &pivot_row[k] * &row[j] - &row[k] * &pivot_row[j];
                row[j] = v / &prev;
            }
            row[k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    Ok(sign * &m[n - 1][n - 1])
}

/// Exact inverse as a canonical rational matrix.
pub fn inverse_rational(a: &IntMatrix) -> Result<RatMatrix, LatticeError> {
    let (adj, det) = adjugate(a)?;
    RatMatrix::new(adj, det)
}

/// Adjugate and determinant: `adj(A) = det(A)·A⁻¹`. Errors when `A` is singular.
///
/// Fraction-free Gauss–Jordan on `[A | I]`: the left block ends as `p·I`
/// and the right block as `p·A⁻¹`, with `p` the determinant of the
/// row-permuted matrix.
pub fn adjugate(a: &IntMatrix) -> Result<(IntMatrix, BigInt), LatticeError> {
    let n = a.require_square()?;
    if n == 0 {
        return Ok((IntMatrix::zeros(0, 0), BigInt::one()));
    }
    let width = 2 * n;
    let mut m: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            let mut row = a.row(i).to_vec();
            row.extend((0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }));
            row
        })
        .collect();
    let mut prev = BigInt::one();
    let mut odd_swaps = false;
    for k in 0..n {
        if m[k][k].is_zero() {
            let i = (k + 1..n)
                .find(|&i| !m[i][k].is_zero())
                .ok_or(LatticeError::SingularMatrix)?;
            m.swap(k, i);
            odd_swaps = !odd_swaps;
        }
        let pivot_row = m[k].clone();
        let pivot = pivot_row[k].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == k {
                continue;
            }
            let factor = row[k].clone();
            for j in 0..width {
                if j == k {
                    continue;
                }
                let v = &pivot * &row[j] - &factor * &pivot_row[j];
                row[j] = v / &prev;
            }
            row[k] = BigInt::zero();
        }
        prev = pivot;
    }
    let mut adj = IntMatrix::from_rows(m.into_iter().map(|row| row[n..].to_vec()).collect())?;
    let det = if odd_swaps {
        adj = adj.scale(&BigInt::from(-1));
        -prev
    } else {
        prev
    };
    Ok((adj, det))
}

/// Cofactor expansion; exponential, for cross-checking small cases only.
#[cfg(test)]
pub(crate) fn det_cofactor(a: &IntMatrix) -> BigInt {
    fn rec(m: &[Vec<BigInt>]) -> BigInt {
        let n = m.len();
        if n == 1 {
            return m[0][0].clone();
        }
        let mut total = BigInt::zero();
        for j in 0..n {
            if m[0][j].is_zero() {
                continue;
            }
            let minor: Vec<Vec<BigInt>> = m[1..]
                .iter()
                .map(|row| {
                    row.iter()
                        .enumerate()
                        .filter(|&(c, _)| c != j)
                        .map(|(_, x)| x.clone())
                        .collect()
                })
                .collect();
            let term = &m[0][j] * rec(&minor);
            if j % 2 == 0 {
                total += term;
            } else {
                total -= term;
            }
        }
        total
    }
    rec(&a.row_vecs())
}
