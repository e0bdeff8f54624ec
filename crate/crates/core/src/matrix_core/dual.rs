//! Dual lattices, membership, and intersection through duality.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::error::LatticeError;
use super::hnf::{hnf, hnf_with_modulus};
use super::linalg::{det, inverse_rational};
use super::matrix::{IntMatrix, RatMatrix};

/// Basis of `{ u : u·v ∈ ℤ for every lattice vector v }`, i.e. `(B⁻¹)ᵀ`.
pub fn dual_basis(b: &IntMatrix) -> Result<RatMatrix, LatticeError> {
    Ok(inverse_rational(b)?.transpose())
}

/// Dual of a rational basis `N / den`, still rational.
pub fn dual_of_rational(b: &RatMatrix) -> Result<RatMatrix, LatticeError> {
    // (N/den)⁻ᵀ = den·N⁻ᵀ
    let inv = inverse_rational(b.numerators())?.transpose();
    RatMatrix::new(inv.numerators().scale(b.denominator()), inv.denominator().clone())
}

/// Exact membership test `v ∈ L(B)`.
pub fn lattice_contains(b: &IntMatrix, v: &[BigInt]) -> Result<bool, LatticeError> {
    let inv = inverse_rational(b)?;
    contains_with_inverse(&inv, v)
}

pub fn contains_with_inverse(inv: &RatMatrix, v: &[BigInt]) -> Result<bool, LatticeError> {
    let num = inv.numerators().left_mul_vec(v)?;
    Ok(num.iter().all(|x| (x % inv.denominator()).is_zero()))
}

/// Rational membership test `v ∈ L(B)`.
pub fn lattice_contains_rational(b: &IntMatrix, v: &[BigRational]) -> Result<bool, LatticeError> {
    let inv = inverse_rational(b)?;
    Ok(inv.left_mul_rat_vec(v)?.iter().all(|q| q.is_integer()))
}

/// HNF basis of `L(B1) ∩ L(B2)`, computed as the dual of `L(B1)* + L(B2)*`.
pub fn lattice_intersect(b1: &IntMatrix, b2: &IntMatrix) -> Result<IntMatrix, LatticeError> {
    let n = b1.require_square()?;
    if b2.require_square()? != n {
        return Err(LatticeError::DimensionMismatch {
            expected: n,
            found: b2.rows(),
        });
    }
    let d1 = dual_basis(b1)?;
    let d2 = dual_basis(b2)?;
    let den = num_integer::Integer::lcm(d1.denominator(), d2.denominator());
    let s1 = d1.numerators().scale(&(&den / d1.denominator()));
    let s2 = d2.numerators().scale(&(&den / d2.denominator()));
    let modulus = det(&s1)?.abs();
    let mut rows = s1.row_vecs();
    rows.extend(s2.row_vecs());
    // den·(L1* + L2*) as an integer lattice
    let union = hnf_with_modulus(&IntMatrix::from_rows(rows)?, &modulus)?;
    let inter = dual_of_rational(&RatMatrix::new(union, den)?)?;
    let inter = inter
        .to_integer()
        .ok_or_else(|| LatticeError::InvalidParameter("intersection of integer lattices must be integral".into()))?;
    Ok(hnf(&inter)?.matrix)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orthogonal_duals() {
        let d = dual_basis(&IntMatrix::from_i64(&[[2, 0], [0, 3]])).unwrap();
        assert_eq!(d.denominator(), &BigInt::from(6));
        assert_eq!(d.numerators(), &IntMatrix::from_i64(&[[3, 0], [0, 2]]));
        assert!(dual_basis(&IntMatrix::identity(3)).unwrap().numerators().is_identity());
    }

    #[test]
    fn coprime_intersection() {
        let r = lattice_intersect(
            &IntMatrix::from_i64(&[[2, 0], [0, 1]]),
            &IntMatrix::from_i64(&[[3, 0], [0, 1]]),
        )
        .unwrap();
        assert_eq!(r, IntMatrix::from_i64(&[[6, 0], [0, 1]]));
    }

    #[test]
    fn membership() {
        let b = IntMatrix::from_i64(&[[2, 0], [1, 1]]);
        assert!(lattice_contains(&b, &[BigInt::from(3), BigInt::from(1)]).unwrap());
        assert!(!lattice_contains(&b, &[BigInt::from(1), BigInt::from(0)]).unwrap());
    }
}
