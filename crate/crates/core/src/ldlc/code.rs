use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use super::{LatinSquareParams, LdlcError, SparseParityMatrix, DEFAULT_RETRY_BUDGET};
use crate::matrix_core::{adjugate, det, IntMatrix, LatticeError, RatMatrix};

/// Permutation draws per generating-sequence value before the whole matrix is redrawn.
const PLACEMENT_TRIES: usize = 10_000;

/// A Latin-square code with its exact integer generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LdlcCode {
    params: LatinSquareParams,
    h: SparseParityMatrix,
    scale: BigInt,
    g_int: IntMatrix,
}

impl LdlcCode {
    /// Derives `G_int = D·H⁻¹`. When `det H < 0` row 0 of `H` is negated first,
    /// so that `det H = D` and `det G_int = D^(n−1) > 0`.
    pub fn from_parity(params: LatinSquareParams, mut h: SparseParityMatrix) -> Result<Self, LdlcError> {
        if h.n() != params.n {
            return Err(LatticeError::DimensionMismatch {
                expected: params.n,
                found: h.n(),
            }
            .into());
        }
        let (mut adj, mut d) = adjugate(&h.to_dense())?;
        if d.is_negative() {
            h.negate_row(0);
            // adj(H') = adj(H) with column 0 negated, and det(H') = −det(H)
            for i in 0..adj.rows() {
                adj[(i, 0)] = -&adj[(i, 0)];
            }
            adj = adj.scale(&BigInt::from(-1));
            d = -d;
        }
        if d < BigInt::from(2) {
            return Err(LdlcError::ParameterViolation(format!("|det H| = {d} must be at least 2")));
        }
        Ok(LdlcCode {
            params,
            h,
            scale: d,
            g_int: adj,
        })
    }

    pub fn params(&self) -> &LatinSquareParams {
        &self.params
    }

    pub fn n(&self) -> usize {
        self.params.n
    }

    pub fn h(&self) -> &SparseParityMatrix {
        &self.h
    }

    /// `D = |det H|`.
    pub fn scale(&self) -> &BigInt {
        &self.scale
    }

    pub fn g_int(&self) -> &IntMatrix {
        &self.g_int
    }

    /// `det G_int = D^(n−1)`.
    pub fn det_g_int(&self) -> BigInt {
        num_traits::pow(self.scale.clone(), self.n().saturating_sub(1))
    }

    /// `H⁻¹ = G_int / D`.
    pub fn h_inverse(&self) -> RatMatrix {
        RatMatrix::new(self.g_int.clone(), self.scale.clone()).expect("D ≥ 2")
    }
}

/// Draws `H` as a signed sum of `d` non-overlapping permutation matrices.
/// Returns `H` (normalised to `det H > 0`) and `D = det H ≥ 2`.
pub fn generate_parity(params: &LatinSquareParams) -> Result<(SparseParityMatrix, BigInt), LdlcError> {
    params.check()?;
    let n = params.n;
    let mut rng = ChaCha20Rng::seed_from_u64(params.seed);
    let mut perm: Vec<usize> = (0..n).collect();
    for _ in 0..DEFAULT_RETRY_BUDGET {
        let mut occupied = vec![false; n * n];
        let mut rows: Vec<Vec<(usize, i64)>> = vec![Vec::with_capacity(params.d); n];
        let mut complete = true;
        for &h in &params.gen_seq {
            let placed = (0..PLACEMENT_TRIES).any(|_| {
                perm.shuffle(&mut rng);
                perm.iter().enumerate().all(|(i, &j)| !occupied[i * n + j])
            });
            if !placed {
                complete = false;
                break;
            }
            for (i, &j) in perm.iter().enumerate() {
                occupied[i * n + j] = true;
                let value = if rng.gen::<bool>() { h } else { -h };
                rows[i].push((j, value));
            }
        }
        if !complete {
            continue;
        }
        let mut h = SparseParityMatrix::from_rows(n, params.d, rows)?;
        let d = det(&h.to_dense())?;
        if d.abs() <= BigInt::one() {
            continue;
        }
        if d.is_negative() {
            h.negate_row(0);
        }
        return Ok((h, d.abs()));
    }
    Err(LdlcError::GenerationFailure {
        attempts: DEFAULT_RETRY_BUDGET,
    })
}

pub fn generate(params: &LatinSquareParams) -> Result<LdlcCode, LdlcError> {
    let (h, _) = generate_parity(params)?;
    LdlcCode::from_parity(params.clone(), h)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Itemised structural checks of `H` against `params`.
pub fn validate(h: &SparseParityMatrix, params: &LatinSquareParams) -> ValidationReport {
    let mut checks = Vec::new();
    let mut push = |name, passed, detail: String| checks.push(Check { name, passed, detail });
    let n = h.n();
    push("dimension", n == params.n, format!("n = {n}, expected {}", params.n));

    let bad_rows: Vec<usize> = (0..n).filter(|&i| h.row(i).len() != params.d).collect();
    push("row degree", bad_rows.is_empty(), format!("rows with degree ≠ {}: {bad_rows:?}", params.d));
    let bad_cols: Vec<usize> = (0..n).filter(|&j| h.column(j).len() != params.d).collect();
    push("column degree", bad_cols.is_empty(), format!("columns with degree ≠ {}: {bad_cols:?}", params.d));

    let mut expected = params.gen_seq.clone();
    expected.sort_unstable();
    let multiset = |entries: &[(usize, i64)]| {
        let mut m: Vec<i64> = entries.iter().map(|&(_, v)| v.abs()).collect();
        m.sort_unstable();
        m
    };
    let bad_rows: Vec<usize> = (0..n).filter(|&i| multiset(h.row(i)) != expected).collect();
    push("row values", bad_rows.is_empty(), format!("rows off the sequence: {bad_rows:?}"));
    let bad_cols: Vec<usize> = (0..n).filter(|&j| multiset(h.column(j)) != expected).collect();
    push("column values", bad_cols.is_empty(), format!("columns off the sequence: {bad_cols:?}"));

    push("alpha", params.check().is_ok(), format!("alpha = {}", params.alpha()));

    let d = det(&h.to_dense()).unwrap_or_default().abs();
    push("determinant", d >= BigInt::from(2), format!("|det H| = {d}"));
    ValidationReport { checks }
}

/// `x = v·G_int`.
pub fn encode(code: &LdlcCode, v: &[BigInt]) -> Result<Vec<BigInt>, LatticeError> {
    code.g_int.left_mul_vec(v)
}

/// Whether `y` lies in the code lattice, i.e. `y·H` is integral.
pub fn membership(code: &LdlcCode, y: &[BigRational]) -> bool {
    match code.h.left_mul_rat(y) {
        Ok(p) => p.iter().all(BigRational::is_integer),
        Err(_) => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_code_structure() {
        let params = LatinSquareParams::new(4, vec![2, 1], 3);
        let code = generate(&params).unwrap();
        for i in 0..4 {
            let mut mags: Vec<i64> = code.h().row(i).iter().map(|e| e.1.abs()).collect();
            mags.sort_unstable();
            assert_eq!(mags, vec![1, 2]);
        }
        assert!(validate(code.h(), &params).passed());
        let dense = code.h().to_dense();
        assert_eq!(code.g_int().mul(&dense).unwrap(), IntMatrix::identity(4).scale(code.scale()));
        assert_eq!(det(code.g_int()).unwrap(), code.det_g_int());
    }

    #[test]
    fn validation_catches_damage() {
        let params = LatinSquareParams::new(8, vec![2, 1, 1], 5);
        let code = generate(&params).unwrap();
        let mut dense = code.h().to_dense();
        let (j, _) = code.h().row(0)[0];
        dense[(0, j)] = BigInt::from(0);
        let damaged = SparseParityMatrix::from_dense(&dense, 3).unwrap();
        let report = validate(&damaged, &params);
        assert!(!report.check("row degree").unwrap().passed);

        let claimed = LatinSquareParams::new(3, vec![2, 1], 0);
        let ident = SparseParityMatrix::from_dense(&IntMatrix::identity(3), 1).unwrap();
        let report = validate(&ident, &claimed);
        assert!(!report.check("row values").unwrap().passed);
    }

    #[test]
    fn membership_and_encoding() {
        let code = generate(&LatinSquareParams::new(6, vec![2, 1, 1], 1)).unwrap();
        let inv = code.h_inverse();
        let row0: Vec<BigRational> = (0..6).map(|j| inv.get(0, j)).collect();
        assert!(membership(&code, &row0));
        let mut off = vec![BigRational::from_integer(BigInt::from(0)); 6];
        off[0] = BigRational::new(BigInt::one(), code.scale() * 2);
        assert!(!membership(&code, &off));
        let v: Vec<BigInt> = [1, -2, 0, 3, 5, -1].iter().map(|&x| BigInt::from(x)).collect();
        let x = encode(&code, &v).unwrap();
        let back = code.h().left_mul_int(&x).unwrap();
        let expect: Vec<BigInt> = v.iter().map(|vi| vi * code.scale()).collect();
        assert_eq!(back, expect);
    }
}
