//! Babai round-off and nearest-plane approximate CVP.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::error::LatticeError;
use super::lll::gram_determinants;
use super::matrix::{common_denominator, IntMatrix, RatMatrix};
use super::num::{dot, round_div, round_rational};

/// Coordinates `round(t·B⁻¹)`; the lattice point is `v·B`.
pub fn babai_round(b: &IntMatrix, t: &[BigRational]) -> Result<Vec<BigInt>, LatticeError> {
    let inv = super::linalg::inverse_rational(b)?;
    babai_round_with_inverse(&inv, t)
}

/// Same as [`babai_round`] with a precomputed `B⁻¹`.
pub fn babai_round_with_inverse(inv: &RatMatrix, t: &[BigRational]) -> Result<Vec<BigInt>, LatticeError> {
    Ok(inv.left_mul_rat_vec(t)?.iter().map(round_rational).collect())
}

/// Integer-target variant; avoids building rationals.
pub fn babai_round_int(inv: &RatMatrix, t: &[BigInt]) -> Result<Vec<BigInt>, LatticeError> {
    let num = inv.numerators().left_mul_vec(t)?;
    Ok(num.iter().map(|x| round_div(x, inv.denominator())).collect())
}

/// Nearest-plane solver with the Gram–Schmidt data of a basis precomputed.
///
/// Uses the integral vectors `c_i = d_i·b_i*` so every step is exact.
#[derive(Clone, Debug)]
pub struct NearestPlane {
    basis: IntMatrix,
    scaled_gs: Vec<Vec<BigInt>>,
    /// Gram determinants, `d[0] = 1`.
    d: Vec<BigInt>,
}

impl NearestPlane {
    pub fn new(b: &IntMatrix) -> Result<Self, LatticeError> {
        b.require_square()?;
        let d = gram_determinants(b)?;
        let n = b.rows();
        // lambda[i][j] = <b_i, c_j>, recomputed here from the integral vectors
        let mut scaled_gs: Vec<Vec<BigInt>> = Vec::with_capacity(n);
        for i in 0..n {
            let mut v = b.row(i).to_vec();
            for (j, c) in scaled_gs.iter().enumerate() {
                let lambda = dot(b.row(i), c);
                if lambda.is_zero() {
                    v.iter_mut().for_each(|x| *x = &*x * &d[j + 1] / &d[j]);
                    continue;
                }
                for (x, cj) in v.iter_mut().zip(c) {
                    *x = (&d[j + 1] * &*x - &lambda * cj) / &d[j];
                }
            }
            scaled_gs.push(v);
        }
        Ok(NearestPlane {
            basis: b.clone(),
            scaled_gs,
            d,
        })
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    /// Lattice coordinates of the nearest-plane point for target `t`.
    pub fn solve(&self, t: &[BigRational]) -> Result<Vec<BigInt>, LatticeError> {
        let (num, den) = common_denominator(t);
        self.solve_scaled(num, &den)
    }

    /// Target given as `num / den`.
    pub fn solve_scaled(&self, mut num: Vec<BigInt>, den: &BigInt) -> Result<Vec<BigInt>, LatticeError> {
        let n = self.basis.rows();
        if num.len() != self.basis.cols() {
            return Err(LatticeError::DimensionMismatch {
                expected: self.basis.cols(),
                found: num.len(),
            });
        }
        let mut coeffs = vec![BigInt::zero(); n];
        for i in (0..n).rev() {
            // <t, b_i*> / ‖b_i*‖² = <t, c_i> / d_{i+1}, with c_i = d_i·b_i*
            let c = round_div(&dot(&num, &self.scaled_gs[i]), &(den * &self.d[i + 1]));
            if !c.is_zero() {
                let step = &c * den;
                for (x, y) in num.iter_mut().zip(self.basis.row(i)) {
                    *x -= &step * y;
                }
            }
            coeffs[i] = c;
        }
        Ok(coeffs)
    }
}

pub fn babai_nearest_plane(b: &IntMatrix, t: &[BigRational]) -> Result<Vec<BigInt>, LatticeError> {
    NearestPlane::new(b)?.solve(t)
}

/// Squared distance `‖v·B − t‖²`.
pub fn distance_sq(b: &IntMatrix, coeffs: &[BigInt], t: &[BigRational]) -> Result<BigRational, LatticeError> {
    let p = b.left_mul_vec(coeffs)?;
    Ok(p.into_iter()
        .zip(t)
        .map(|(x, y)| {
            let diff = BigRational::from_integer(x) - y;
            &diff * &diff
        })
        .fold(BigRational::zero(), |a, x| a + x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix_core::matrix::int_vec_to_rat;
    use crate::matrix_core::num::{f64_to_rational, to_big};

    fn rat(xs: &[f64]) -> Vec<BigRational> {
        xs.iter().map(|&x| f64_to_rational(x).unwrap()).collect()
    }

    #[test]
    fn identity_rounds_componentwise() {
        let b = IntMatrix::identity(2);
        let t = rat(&[0.4, -1.6]);
        assert_eq!(babai_round(&b, &t).unwrap(), to_big(&[0, -2]));
        assert_eq!(babai_nearest_plane(&b, &t).unwrap(), to_big(&[0, -2]));
    }

    #[test]
    fn lattice_points_are_fixed() {
        let b = IntMatrix::from_i64(&[[3, 1, 0], [1, 4, 1], [0, 2, 5]]);
        let v = to_big(&[2, -7, 3]);
        let t = int_vec_to_rat(&b.left_mul_vec(&v).unwrap());
        assert_eq!(babai_round(&b, &t).unwrap(), v);
        assert_eq!(babai_nearest_plane(&b, &t).unwrap(), v);
    }

    #[test]
    fn nearest_plane_on_skewed_basis() {
        let b = IntMatrix::from_i64(&[[1, 0], [3, 1]]);
        let t = rat(&[0.2, 0.9]);
        // the closest lattice point to (0.2, 0.9) is (0, 1) = -3·b_0 + b_1
        assert_eq!(babai_nearest_plane(&b, &t).unwrap(), to_big(&[-3, 1]));
    }
}
