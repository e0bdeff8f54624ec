use std::fmt::Write as _;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::matrix_core::text::{parse_int, FormatError, LineReader, MAX_TEXT_DIM};
use crate::matrix_core::{IntMatrix, LatticeError};

/// Square sparse integer matrix kept in both row and column adjacency form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseParityMatrix {
    n: usize,
    /// Declared row/column degree (the `d` of the text header).
    degree: usize,
    rows: Vec<Vec<(usize, i64)>>,
    cols: Vec<Vec<(usize, i64)>>,
}

impl SparseParityMatrix {
    /// Builds from per-row `(column, value)` lists. Zero values are dropped;
    /// out-of-range or repeated columns are rejected.
    pub fn from_rows(n: usize, degree: usize, rows: Vec<Vec<(usize, i64)>>) -> Result<Self, LatticeError> {
        if rows.len() != n {
            return Err(LatticeError::DimensionMismatch {
                expected: n,
                found: rows.len(),
            });
        }
        let mut cols = vec![Vec::new(); n];
        let mut clean = Vec::with_capacity(n);
        for (i, row) in rows.into_iter().enumerate() {
            let mut row: Vec<(usize, i64)> = row.into_iter().filter(|&(_, v)| v != 0).collect();
            row.sort_unstable_by_key(|&(c, _)| c);
            for w in row.windows(2) {
                if w[0].0 == w[1].0 {
                    return Err(LatticeError::InvalidParameter(format!("row {i} repeats column {}", w[0].0)));
                }
            }
            for &(c, v) in &row {
                if c >= n {
                    return Err(LatticeError::InvalidParameter(format!("row {i} has column {c} ≥ {n}")));
                }
                cols[c].push((i, v));
            }
            clean.push(row);
        }
        Ok(SparseParityMatrix {
            n,
            degree,
            rows: clean,
            cols,
        })
    }

    pub fn from_dense(m: &IntMatrix, degree: usize) -> Result<Self, LatticeError> {
        let n = m.require_square()?;
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .filter(|&j| !m[(i, j)].is_zero())
                    .map(|j| {
                        m[(i, j)]
                            .to_i64()
                            .map(|v| (j, v))
                            .ok_or_else(|| LatticeError::InvalidParameter("entry exceeds 64 bits".into()))
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_rows(n, degree, rows)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn row(&self, i: usize) -> &[(usize, i64)] {
        &self.rows[i]
    }

    /// Nonzeros of column `j` as `(row, value)`.
    pub fn column(&self, j: usize) -> &[(usize, i64)] {
        &self.cols[j]
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn to_dense(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.n, self.n);
        for (i, row) in self.rows.iter().enumerate() {
            for &(j, v) in row {
                m[(i, j)] = BigInt::from(v);
            }
        }
        m
    }

    /// `x·H` for an integer row vector.
    pub fn left_mul_int(&self, x: &[BigInt]) -> Result<Vec<BigInt>, LatticeError> {
        self.check_len(x.len())?;
        Ok(self
            .cols
            .iter()
            .map(|col| col.iter().fold(BigInt::zero(), |acc, &(i, v)| acc + &x[i] * v))
            .collect())
    }

    /// `y·H` for a rational row vector.
    pub fn left_mul_rat(&self, y: &[BigRational]) -> Result<Vec<BigRational>, LatticeError> {
        self.check_len(y.len())?;
        Ok(self
            .cols
            .iter()
            .map(|col| {
                col.iter()
                    .fold(BigRational::zero(), |acc, &(i, v)| acc + &y[i] * BigInt::from(v))
            })
            .collect())
    }

    /// `y·H` in floating point.
    pub fn left_mul_f64(&self, y: &[f64]) -> Vec<f64> {
        self.cols
            .iter()
            .map(|col| col.iter().map(|&(i, v)| y[i] * v as f64).sum())
            .collect()
    }

    /// Negates row `i` in place.
    pub(crate) fn negate_row(&mut self, i: usize) {
        for e in &mut self.rows[i] {
            e.1 = -e.1;
        }
        for col in &mut self.cols {
            for e in col.iter_mut().filter(|e| e.0 == i) {
                e.1 = -e.1;
            }
        }
    }

    fn check_len(&self, len: usize) -> Result<(), LatticeError> {
        if len == self.n {
            Ok(())
        } else {
            Err(LatticeError::DimensionMismatch {
                expected: self.n,
                found: len,
            })
        }
    }

    /// Text form: `n d`, then one line per row: `r_i` and its `(col value)` pairs.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        self.write_text(&mut s);
        s
    }

    pub fn write_text(&self, out: &mut String) {
        writeln!(out, "{} {}", self.n, self.degree).expect("write to String");
        for row in &self.rows {
            write!(out, "{}", row.len()).expect("write to String");
            for &(c, v) in row {
                write!(out, " {c} {v}").expect("write to String");
            }
            out.push('\n');
        }
    }

    pub fn parse(text: &str) -> Result<Self, FormatError> {
        let mut r = LineReader::new(text);
        let h = Self::read(&mut r)?;
        r.expect_end()?;
        Ok(h)
    }

    pub fn read(r: &mut LineReader<'_>) -> Result<Self, FormatError> {
        let header = r.next_line("sparse header")?;
        let at = r.line_no();
        let fields: Vec<&str> = header.split(' ').collect();
        if fields.len() != 2 {
            return Err(FormatError::new(at, "sparse header must be `n d`"));
        }
        let n = small(fields[0], at, MAX_TEXT_DIM)?;
        let degree = small(fields[1], at, MAX_TEXT_DIM)?;
        let mut rows = Vec::new();
        for _ in 0..n {
            let line = r.next_line("sparse row")?;
            let at = r.line_no();
            let tokens: Vec<&str> = line.split(' ').collect();
            let count = small(tokens[0], at, n)?;
            if tokens.len() != 1 + 2 * count {
                return Err(FormatError::new(at, format!("row declares {count} pairs")));
            }
            let mut row = Vec::with_capacity(count);
            for pair in tokens[1..].chunks(2) {
                let c = small(pair[0], at, n.saturating_sub(1))?;
                let v = parse_int(pair[1], at)?
                    .to_i64()
                    .filter(|&v| v != 0 && v.checked_abs().is_some())
                    .ok_or_else(|| FormatError::new(at, "values must be nonzero 64-bit integers"))?;
                row.push((c, v));
            }
            rows.push(row);
        }
        Self::from_rows(n, degree, rows).map_err(|e| FormatError::new(at, e.to_string()))
    }
}

fn small(token: &str, line: usize, max: usize) -> Result<usize, FormatError> {
    parse_int(token, line)?
        .to_usize()
        .filter(|&x| x <= max)
        .ok_or_else(|| FormatError::new(line, format!("value `{token}` out of range 0..={max}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        let h = SparseParityMatrix::from_dense(&IntMatrix::from_i64(&[[2, -1], [1, 2]]), 2).unwrap();
        let s = h.to_text();
        assert_eq!(s, "2 2\n2 0 2 1 -1\n2 0 1 1 2\n");
        assert_eq!(SparseParityMatrix::parse(&s).unwrap(), h);
        assert_eq!(h.column(1), &[(0, -1), (1, 2)]);
    }

    #[test]
    fn malformed_rows_are_rejected() {
        assert!(SparseParityMatrix::parse("2 2\n1 0 2\n").is_err());
        assert!(SparseParityMatrix::parse("2 2\n1 0 2\n1 5 1\n").is_err());
        assert!(SparseParityMatrix::parse("2 2\n2 0 2 0 1\n1 1 1\n").is_err());
        assert!(SparseParityMatrix::parse("2 2\n1 0 0\n1 1 1\n").is_err());
    }

    #[test]
    fn products_agree_with_dense() {
        let dense = IntMatrix::from_i64(&[[2, 0, -1], [1, 1, 0], [0, -2, 1]]);
        let h = SparseParityMatrix::from_dense(&dense, 2).unwrap();
        let x: Vec<BigInt> = [3, -1, 4].iter().map(|&v| BigInt::from(v)).collect();
        assert_eq!(h.left_mul_int(&x).unwrap(), dense.left_mul_vec(&x).unwrap());
        assert_eq!(h.to_dense(), dense);
    }
}
