//! Lower-triangular row Hermite normal form.
//!
//! The output `H` of a full-rank lattice satisfies
//! `H[i][j] = 0` for `i < j`, `H[i][i] ≥ 1`, and `0 ≤ H[i][j] < H[j][j]` for `i > j`.
//! Entry growth is bounded by working modulo an integer `M` with `M·ℤⁿ ⊆ L`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::error::LatticeError;
use super::linalg::{det, inverse_rational};
use super::matrix::IntMatrix;
use super::num::is_zero_vec;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HnfBasis {
    /// The Hermite normal form itself.
    pub matrix: IntMatrix,
    /// Unimodular `U` with `matrix = U · input`.
    pub transform: IntMatrix,
}

/// HNF of a square nonsingular basis, together with its unimodular transform.
pub fn hnf(a: &IntMatrix) -> Result<HnfBasis, LatticeError> {
    a.require_square()?;
    let d = det(a)?;
    if d.is_zero() {
        return Err(LatticeError::SingularMatrix);
    }
    let matrix = hnf_with_modulus(a, &d.abs())?;
    let transform = inverse_rational(a)?
        .left_mul_int(&matrix)?
        .to_integer()
        .expect("HNF generates the input lattice, so H·A⁻¹ is integral");
    Ok(HnfBasis { matrix, transform })
}

/// HNF of the lattice generated by the rows of `gens` (any number of rows),
/// given a positive `modulus` with `modulus·ℤⁿ ⊆ L(gens)`.
///
/// A wrong modulus silently yields the HNF of `L(gens) + modulus·ℤⁿ`.
pub fn hnf_with_modulus(gens: &IntMatrix, modulus: &BigInt) -> Result<IntMatrix, LatticeError> {
    if !modulus.is_positive() {
        return Err(LatticeError::InvalidParameter("HNF modulus must be positive".into()));
    }
    let n = gens.cols();
    let m = modulus;
    let mut pool: Vec<Vec<BigInt>> = gens
        .row_vecs()
        .into_iter()
        .map(|row| row.into_iter().map(|x| x.mod_floor(m)).collect::<Vec<_>>())
        .filter(|row| !is_zero_vec(row))
        .collect();
    let mut out: Vec<Vec<BigInt>> = vec![Vec::new(); n];

    // Invariant: every pooled row has support in columns 0..=j.
    for j in (0..n).rev() {
        let mut pivot: Option<Vec<BigInt>> = None;
        let mut rest = Vec::with_capacity(pool.len() + 1);
        for row in pool.drain(..) {
            if row[j].is_zero() {
                rest.push(row);
                continue;
            }
            pivot = Some(match pivot.take() {
                None => row,
                Some(p) => {
                    let (p, r) = gcd_combine(p, row, j, m);
                    if !is_zero_vec(&r) {
                        rest.push(r);
                    }
                    p
                }
            });
        }
        let row_j = match pivot {
            None => {
                let mut r = vec![BigInt::zero(); n];
                r[j] = m.clone();
                r
            }
            Some(p) => {
                // fold in the implicit generator m·e_j
                let ext = p[j].extended_gcd(m);
                let (g, u) = if ext.gcd.is_negative() {
                    (-ext.gcd, -ext.x)
                } else {
                    (ext.gcd, ext.x)
                };
                let cofactor = m / &g;
                let leftover: Vec<BigInt> = p.iter().map(|x| (&cofactor * x).mod_floor(m)).collect();
                if !is_zero_vec(&leftover) {
                    rest.push(leftover);
                }
                let mut r: Vec<BigInt> = p.iter().map(|x| (&u * x).mod_floor(m)).collect();
                r[j] = g;
                r
            }
        };
        out[j] = row_j;
        pool = rest;
    }

    for i in 1..n {
        for j in (0..i).rev() {
            let q = out[i][j].div_floor(&out[j][j]);
            if !q.is_zero() {
                let (head, tail) = out.split_at_mut(i);
                for (x, y) in tail[0].iter_mut().zip(&head[j]).take(j + 1) {
                    *x -= &q * y;
                }
            }
        }
    }
    IntMatrix::from_rows(out)
}

/// Replaces rows `p`, `r` (both nonzero in column `j`) by a pivot holding
/// `gcd(p[j], r[j])` and a row with zero in column `j`, via a unimodular 2×2 step.
fn gcd_combine(p: Vec<BigInt>, r: Vec<BigInt>, j: usize, m: &BigInt) -> (Vec<BigInt>, Vec<BigInt>) {
    let (a, b) = (p[j].clone(), r[j].clone());
    let ext = a.extended_gcd(&b);
    let g = ext.gcd;
    let (a_g, b_g) = (&a / &g, &b / &g);
    let pivot = p
        .iter()
        .zip(&r)
        .map(|(x, y)| (&ext.x * x + &ext.y * y).mod_floor(m))
        .collect();
    let other = p
        .iter()
        .zip(&r)
        .map(|(x, y)| (&a_g * y - &b_g * x).mod_floor(m))
        .collect();
    (pivot, other)
}

/// Checks the three HNF shape properties.
pub fn is_hnf(h: &IntMatrix) -> bool {
    let n = h.rows();
    h.is_square()
        && (0..n).all(|i| {
            h[(i, i)] >= BigInt::one()
                && (i + 1..n).all(|j| h[(i, j)].is_zero())
                && (0..i).all(|j| !h[(i, j)].is_negative() && h[(i, j)] < h[(j, j)])
        })
}
