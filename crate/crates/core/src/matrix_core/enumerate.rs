//! Exhaustive SVP/CVP over a coefficient box. Desk-scale oracles only.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use super::error::LatticeError;
use super::linalg::inverse_rational;
use super::matrix::{common_denominator, IntMatrix, RatMatrix};
use super::num::{norm_sq, round_div};

pub const SVP_MAX_DIM: usize = 14;
pub const CVP_MAX_DIM: usize = 12;

#[derive(Clone, Debug, PartialEq)]
pub struct SvpResult {
    pub coefficients: Vec<BigInt>,
    pub vector: Vec<BigInt>,
    pub norm_sq: BigInt,
    /// λ₁ when `certified`.
    pub norm: f64,
    /// The box provably contains a shortest vector of the whole lattice.
    pub certified: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CvpResult {
    pub coefficients: Vec<BigInt>,
    pub point: Vec<BigInt>,
    pub distance_sq: BigRational,
    /// The box provably contains a closest vector of the whole lattice.
    pub certified: bool,
}

/// Shortest nonzero `x·B` over `x ∈ [−bound, bound]ⁿ`; ties go to the
/// lexicographically smallest `x`.
pub fn svp_exhaustive(b: &IntMatrix, coeff_bound: u32) -> Result<SvpResult, LatticeError> {
    let n = b.require_square()?;
    if n > SVP_MAX_DIM {
        return Err(LatticeError::DimensionTooLarge { n, limit: SVP_MAX_DIM });
    }
    if coeff_bound == 0 {
        return Err(LatticeError::InvalidParameter("coefficient bound must be ≥ 1".into()));
    }
    let inv = inverse_rational(b)?;
    let w = i64::from(coeff_bound);
    let lo = vec![BigInt::from(-w); n];
    let target = vec![BigInt::zero(); n];
    let (k, _) = box_search(&b.row_vecs(), &target, &lo, w, true);
    let coefficients: Vec<BigInt> = k.iter().zip(&lo).map(|(&k, l)| l + k).collect();
    let vector = b.left_mul_vec(&coefficients)?;
    let norm_sq = norm_sq(&vector);
    // any lattice vector u has |coeff_i| = |<u, dual_i>| ≤ ‖u‖·‖dual_i‖
    let limit = BigInt::from(w + 1).pow(2) * inv.denominator().pow(2);
    let certified = dual_row_norms_sq(&inv).iter().all(|c| &norm_sq * c < limit);
    let norm = norm_sq.to_f64().unwrap_or(f64::INFINITY).sqrt();
    Ok(SvpResult {
        coefficients,
        vector,
        norm_sq,
        norm,
        certified,
    })
}

/// Closest `x·B` to `t` over the box of half-width `window` around `round(t·B⁻¹)`;
/// ties go to the lexicographically smallest `x`.
pub fn cvp_exhaustive(b: &IntMatrix, t: &[BigRational], window: u32) -> Result<CvpResult, LatticeError> {
    let n = b.require_square()?;
    if n > CVP_MAX_DIM {
        return Err(LatticeError::DimensionTooLarge { n, limit: CVP_MAX_DIM });
    }
    if t.len() != n {
        return Err(LatticeError::DimensionMismatch { expected: n, found: t.len() });
    }
    let inv = inverse_rational(b)?;
    cvp_with_inverse(b, &inv, t, window)
}

pub(crate) fn cvp_with_inverse(
    b: &IntMatrix,
    inv: &RatMatrix,
    t: &[BigRational],
    window: u32,
) -> Result<CvpResult, LatticeError> {
    let (t_num, t_den) = common_denominator(t);
    let center: Vec<BigInt> = inv
        .numerators()
        .left_mul_vec(&t_num)?
        .iter()
        .map(|x| round_div(x, &(&t_den * inv.denominator())))
        .collect();
    let w = i64::from(window);
    let lo: Vec<BigInt> = center.iter().map(|c| c - w).collect();
    let scaled = b.scale(&t_den);
    let (k, best) = box_search(&scaled.row_vecs(), &t_num, &lo, w, false);
    let coefficients: Vec<BigInt> = k.iter().zip(&lo).map(|(&k, l)| l + k).collect();
    let point = b.left_mul_vec(&coefficients)?;
    let distance_sq = BigRational::new(best, &t_den * &t_den);
    // |x*_i − center_i| ≤ dist·‖dual_i‖ + 1/2 for any closest x*
    let lhs = BigRational::new(BigInt::from(2 * w + 1).pow(2) * inv.denominator().pow(2), BigInt::from(4));
    let certified = dual_row_norms_sq(inv)
        .into_iter()
        .all(|c| &distance_sq * BigRational::from_integer(c) < lhs);
    Ok(CvpResult {
        coefficients,
        point,
        distance_sq,
        certified,
    })
}

/// Squared norms of the dual rows (columns of `B⁻¹`), scaled by `den²`.
fn dual_row_norms_sq(inv: &RatMatrix) -> Vec<BigInt> {
    let m = inv.numerators();
    (0..m.cols()).map(|j| norm_sq(&m.column(j))).collect()
}

trait Scalar: Clone + Ord {
    fn origin() -> Self;
    fn add(&mut self, x: &Self);
    fn sub(&mut self, x: &Self);
    fn add_square(&mut self, x: &Self);
}

impl Scalar for i128 {
    fn origin() -> Self {
        0
    }
    fn add(&mut self, x: &Self) {
        *self += x;
    }
    fn sub(&mut self, x: &Self) {
        *self -= x;
    }
    fn add_square(&mut self, x: &Self) {
        *self += x * x;
    }
}

impl Scalar for BigInt {
    fn origin() -> Self {
        Zero::zero()
    }
    fn add(&mut self, x: &Self) {
        *self += x;
    }
    fn sub(&mut self, x: &Self) {
        *self -= x;
    }
    fn add_square(&mut self, x: &Self) {
        *self += x * x;
    }
}

/// Minimises `‖(lo + k)·R − target‖²` over `k ∈ [0, 2w]ⁿ` in lexicographic order.
/// Returns the offsets `k` and the optimal squared norm.
fn box_search(
    rows: &[Vec<BigInt>],
    target: &[BigInt],
    lo: &[BigInt],
    w: i64,
    exclude_zero: bool,
) -> (Vec<i64>, BigInt) {
    let n = rows.len();
    let dim = target.len();
    // start vector: lo·R − target
    let mut start = target.iter().map(|x| -x).collect::<Vec<_>>();
    for (l, row) in lo.iter().zip(rows) {
        for (s, r) in start.iter_mut().zip(row) {
            *s += l * r;
        }
    }
    let span = BigInt::from(2 * w);
    let bound: BigInt = (0..dim)
        .map(|j| start[j].abs() + rows.iter().map(|r| r[j].abs() * &span).sum::<BigInt>())
        .max()
        .unwrap_or_default();
    // a zero coefficient vector sits at offset -lo (only used for SVP)
    let zero_at: Option<Vec<i64>> = exclude_zero.then(|| lo.iter().map(|l| -l.to_i64().unwrap_or(0)).collect());
    if bound.bits() <= 60 {
        let conv = |v: &[BigInt]| v.iter().map(|x| x.to_i128().expect("bounded")).collect::<Vec<i128>>();
        let rows_s: Vec<Vec<i128>> = rows.iter().map(|r| conv(r)).collect();
        let (k, best) = odometer(&rows_s, conv(&start), n, w, zero_at.as_deref());
        (k, BigInt::from(best))
    } else {
        odometer(rows, start, n, w, zero_at.as_deref())
    }
}

fn odometer<T: Scalar>(rows: &[Vec<T>], start: Vec<T>, n: usize, w: i64, skip: Option<&[i64]>) -> (Vec<i64>, T) {
    let wrap: Vec<Vec<T>> = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|x| {
                    let mut acc = T::origin();
                    for _ in 0..2 * w {
                        acc.add(x);
                    }
                    acc
                })
                .collect()
        })
        .collect();
    let mut k = vec![0i64; n];
    let mut v = start;
    let mut best: Option<(Vec<i64>, T)> = None;
    loop {
        if skip != Some(&k[..]) {
            let mut s = T::origin();
            for x in &v {
                s.add_square(x);
            }
            if best.as_ref().is_none_or(|(_, b)| s < *b) {
                best = Some((k.clone(), s));
            }
        }
        // advance, last coordinate fastest
        let mut i = n;
        loop {
            if i == 0 {
                return best.expect("box has at least two points");
            }
            i -= 1;
            if k[i] < 2 * w {
                k[i] += 1;
                for (x, r) in v.iter_mut().zip(&rows[i]) {
                    x.add(r);
                }
                break;
            }
            k[i] = 0;
            for (x, r) in v.iter_mut().zip(&wrap[i]) {
                x.sub(r);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix_core::num::{f64_to_rational, to_big};

    #[test]
    fn identity_svp() {
        let r = svp_exhaustive(&IntMatrix::identity(2), 2).unwrap();
        assert_eq!(r.norm_sq, BigInt::from(1));
        assert!(r.certified);
    }

    #[test]
    fn small_lattice_svp() {
        let r = svp_exhaustive(&IntMatrix::from_i64(&[[2, 0], [1, 1]]), 3).unwrap();
        assert_eq!(r.norm_sq, BigInt::from(2));
        assert!(r.certified);
    }

    #[test]
    fn guards() {
        assert!(matches!(
            svp_exhaustive(&IntMatrix::identity(15), 1),
            Err(LatticeError::DimensionTooLarge { n: 15, limit: 14 })
        ));
        let t = vec![BigRational::zero(); 13];
        assert!(matches!(
            cvp_exhaustive(&IntMatrix::identity(13), &t, 1),
            Err(LatticeError::DimensionTooLarge { n: 13, limit: 12 })
        ));
    }

    #[test]
    fn identity_cvp_rounds() {
        let t: Vec<BigRational> = [0.4, -1.6, 2.5].iter().map(|&x| f64_to_rational(x).unwrap()).collect();
        let r = cvp_exhaustive(&IntMatrix::identity(3), &t, 1).unwrap();
        // 2.5 is a tie between 2 and 3; the lexicographic rule keeps 2
        assert_eq!(r.coefficients, to_big(&[0, -2, 2]));
        assert!(r.certified);
    }

    #[test]
    fn big_entries_take_the_slow_path() {
        let big = BigInt::from(1) << 80u32;
        let b = IntMatrix::diagonal(&[big.clone(), BigInt::from(1)]);
        let r = svp_exhaustive(&b, 1).unwrap();
        assert_eq!(r.vector, to_big(&[0, -1]));
        let t = vec![BigRational::from_integer(&big * 3 + 7), BigRational::zero()];
        let r = cvp_exhaustive(&b, &t, 1).unwrap();
        assert_eq!(r.coefficients, to_big(&[3, 0]));
    }
}
