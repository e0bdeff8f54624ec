use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::error::LatticeError;

/// Dense matrix of arbitrary-precision integers, stored row-major.
///
/// Lattice vectors are rows: the lattice of a basis `B` is `{ v·B : v ∈ ℤⁿ }`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn diagonal(entries: &[BigInt]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, x) in entries.iter().enumerate() {
            m[(i, i)] = x.clone();
        }
        m
    }

    /// Builds a matrix from rows; all rows must have the same length.
    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Result<Self, LatticeError> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(n_rows * n_cols);
        for row in rows {
            if row.len() != n_cols {
                return Err(LatticeError::DimensionMismatch {
                    expected: n_cols,
                    found: row.len(),
                });
            }
            data.extend(row);
        }
        Ok(IntMatrix {
            rows: n_rows,
            cols: n_cols,
            data,
        })
    }

    /// Convenience constructor for small literal matrices.
    ///
    /// Panics on ragged input.
    pub fn from_i64<R: AsRef<[i64]>>(rows: &[R]) -> Self {
        let rows = rows
            .iter()
            .map(|r| r.as_ref().iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        Self::from_rows(rows).expect("ragged literal matrix")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [BigInt] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn row_vecs(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.data
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix, LatticeError> {
        if self.cols != other.rows {
            return Err(LatticeError::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Row vector times matrix: `v·self`.
    pub fn left_mul_vec(&self, v: &[BigInt]) -> Result<Vec<BigInt>, LatticeError> {
        if v.len() != self.rows {
            return Err(LatticeError::DimensionMismatch {
                expected: self.rows,
                found: v.len(),
            });
        }
        let mut out = vec![BigInt::zero(); self.cols];
        for (i, vi) in v.iter().enumerate() {
            if vi.is_zero() {
                continue;
            }
            for (o, a) in out.iter_mut().zip(self.row(i)) {
                if !a.is_zero() {
                    *o += vi * a;
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, k: &BigInt) -> IntMatrix {
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * k).collect(),
        }
    }

    pub fn add(&self, other: &IntMatrix) -> Result<IntMatrix, LatticeError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(LatticeError::DimensionMismatch {
                expected: self.rows * self.cols,
                found: other.rows * other.cols,
            });
        }
        Ok(IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let x = &self[(i, j)];
                    if i == j {
                        x.is_one()
                    } else {
                        x.is_zero()
                    }
                })
            })
    }

    pub fn is_lower_triangular(&self) -> bool {
        (0..self.rows).all(|i| (i + 1..self.cols).all(|j| self[(i, j)].is_zero()))
    }

    pub fn max_abs(&self) -> BigInt {
        self.data
            .iter()
            .map(|x| x.abs())
            .max()
            .unwrap_or_else(BigInt::zero)
    }

    pub(crate) fn require_square(&self) -> Result<usize, LatticeError> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(LatticeError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;

    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Rational matrix `numerators / denominator` with a shared positive denominator.
///
/// Always kept canonical: the gcd of the denominator and every numerator is 1.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RatMatrix {
    denominator: BigInt,
    numerators: IntMatrix,
}

impl RatMatrix {
    pub fn new(numerators: IntMatrix, denominator: BigInt) -> Result<Self, LatticeError> {
        if denominator.is_zero() {
            return Err(LatticeError::InvalidParameter("zero denominator".into()));
        }
        let (mut numerators, mut denominator) = (numerators, denominator);
        if denominator.is_negative() {
            numerators = numerators.scale(&BigInt::from(-1));
            denominator = -denominator;
        }
        let g = numerators
            .entries()
            .iter()
            .fold(denominator.clone(), |g, x| g.gcd(x));
        if !g.is_one() {
            numerators.data.iter_mut().for_each(|x| *x = &*x / &g);
            denominator = &denominator / &g;
        }
        Ok(RatMatrix {
            denominator,
            numerators,
        })
    }

    pub fn from_int(m: IntMatrix) -> Self {
        RatMatrix {
            denominator: BigInt::one(),
            numerators: m,
        }
    }

    pub fn denominator(&self) -> &BigInt {
        &self.denominator
    }

    pub fn numerators(&self) -> &IntMatrix {
        &self.numerators
    }

    pub fn rows(&self) -> usize {
        self.numerators.rows()
    }

    pub fn cols(&self) -> usize {
        self.numerators.cols()
    }

    pub fn get(&self, i: usize, j: usize) -> BigRational {
        BigRational::new(self.numerators[(i, j)].clone(), self.denominator.clone())
    }

    pub fn is_integral(&self) -> bool {
        self.denominator.is_one()
    }

    pub fn to_integer(&self) -> Option<IntMatrix> {
        self.is_integral().then(|| self.numerators.clone())
    }

    pub fn transpose(&self) -> RatMatrix {
        RatMatrix {
            denominator: self.denominator.clone(),
            numerators: self.numerators.transpose(),
        }
    }

    /// `left · self`, canonicalised.
    pub fn left_mul_int(&self, left: &IntMatrix) -> Result<RatMatrix, LatticeError> {
        RatMatrix::new(left.mul(&self.numerators)?, self.denominator.clone())
    }

    /// `self · right`, canonicalised.
    pub fn mul_int(&self, right: &IntMatrix) -> Result<RatMatrix, LatticeError> {
        RatMatrix::new(self.numerators.mul(right)?, self.denominator.clone())
    }

    /// Integer row vector times this matrix, as rationals.
    pub fn left_mul_vec(&self, v: &[BigInt]) -> Result<Vec<BigRational>, LatticeError> {
        let num = self.numerators.left_mul_vec(v)?;
        Ok(num
            .into_iter()
            .map(|x| BigRational::new(x, self.denominator.clone()))
            .collect())
    }

    /// Rational row vector times this matrix.
    pub fn left_mul_rat_vec(&self, v: &[BigRational]) -> Result<Vec<BigRational>, LatticeError> {
        let (num, den) = common_denominator(v);
        let prod = self.numerators.left_mul_vec(&num)?;
        let den = den * &self.denominator;
        Ok(prod
            .into_iter()
            .map(|x| BigRational::new(x, den.clone()))
            .collect())
    }
}

/// Writes a rational vector as integer numerators over one positive denominator.
pub fn common_denominator(v: &[BigRational]) -> (Vec<BigInt>, BigInt) {
    let den = v.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let num = v
        .iter()
        .map(|q| q.numer() * (&den / q.denom()))
        .collect();
    (num, den)
}

pub fn int_vec_to_rat(v: &[BigInt]) -> Vec<BigRational> {
    v.iter().map(|x| BigRational::from_integer(x.clone())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_rational_form() {
        let m = RatMatrix::new(IntMatrix::from_i64(&[[2, 4], [6, 8]]), BigInt::from(-4)).unwrap();
        assert_eq!(m.denominator(), &BigInt::from(2));
        assert_eq!(m.numerators(), &IntMatrix::from_i64(&[[-1, -2], [-3, -4]]));
    }

    #[test]
    fn vector_products_follow_row_convention() {
        let b = IntMatrix::from_i64(&[[2, 0], [1, 3]]);
        let v = vec![BigInt::from(1), BigInt::from(2)];
        assert_eq!(b.left_mul_vec(&v).unwrap(), vec![BigInt::from(4), BigInt::from(6)]);
    }
}
