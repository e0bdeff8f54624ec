//! Line-oriented text formats.
//!
//! Matrix block: a `rows cols denominator` header followed by one row per
//! line, entries as decimal integers separated by single spaces.

use std::fmt;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::Signed;

use super::matrix::{IntMatrix, RatMatrix};

/// Largest row/column count accepted by the parsers.
pub const MAX_TEXT_DIM: usize = 4096;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormatError {
    /// 1-based line number; 0 means end of input.
    pub line: usize,
    pub message: String,
}

impl FormatError {
    pub fn new(line: usize, message: impl Into<String>) -> Self {
        FormatError {
            line,
            message: message.into(),
        }
    }
}

impl fmt::Display for FormatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            write!(f, "at end of input: {}", self.message)
        } else {
            write!(f, "line {}: {}", self.line, self.message)
        }
    }
}

impl std::error::Error for FormatError {}

/// Cursor over the lines of a text document that tracks line numbers.
pub struct LineReader<'a> {
    lines: std::iter::Peekable<std::iter::Enumerate<std::str::Lines<'a>>>,
    last: usize,
}

impl<'a> LineReader<'a> {
    pub fn new(text: &'a str) -> Self {
        LineReader {
            lines: text.lines().enumerate().peekable(),
            last: 0,
        }
    }

    /// Line number of the most recently returned line.
    pub fn line_no(&self) -> usize {
        self.last
    }

    pub fn next_line(&mut self, what: &str) -> Result<&'a str, FormatError> {
        match self.lines.next() {
            Some((i, l)) => {
                self.last = i + 1;
                Ok(l)
            }
            None => Err(FormatError::new(0, format!("missing {what}"))),
        }
    }

    pub fn peek(&mut self) -> Option<&'a str> {
        self.lines.peek().map(|&(_, l)| l)
    }

    pub fn expect_end(&mut self) -> Result<(), FormatError> {
        match self.lines.next() {
            None => Ok(()),
            Some((i, _)) => Err(FormatError::new(i + 1, "unexpected trailing content")),
        }
    }

    /// Reads a line of exactly `len` integers.
    pub fn int_row(&mut self, len: usize, what: &str) -> Result<Vec<BigInt>, FormatError> {
        let line = self.next_line(what)?;
        let row = parse_int_list(line, self.last)?;
        if row.len() != len {
            return Err(FormatError::new(
                self.last,
                format!("{what}: expected {len} entries, found {}", row.len()),
            ));
        }
        Ok(row)
    }

    /// Reads a matrix block.
    pub fn matrix(&mut self) -> Result<RatMatrix, FormatError> {
        let header = self.next_line("matrix header")?;
        let at = self.last;
        let dims = parse_int_list(header, at)?;
        if dims.len() != 3 {
            return Err(FormatError::new(at, "matrix header must be `rows cols denominator`"));
        }
        let rows = parse_dim(&dims[0], at)?;
        let cols = parse_dim(&dims[1], at)?;
        let den = dims[2].clone();
        if !den.is_positive() {
            return Err(FormatError::new(at, "denominator must be positive"));
        }
        if (rows == 0) != (cols == 0) {
            return Err(FormatError::new(at, "empty matrix must have zero rows and columns"));
        }
        let mut data = Vec::new();
        for _ in 0..rows {
            data.push(self.int_row(cols, "matrix row")?);
        }
        let m = IntMatrix::from_rows(data).map_err(|e| FormatError::new(at, e.to_string()))?;
        let canonical = RatMatrix::new(m.clone(), den.clone()).map_err(|e| FormatError::new(at, e.to_string()))?;
        if canonical.denominator() != &den {
            return Err(FormatError::new(at, "matrix is not in lowest terms"));
        }
        Ok(canonical)
    }

    /// Reads a matrix block whose denominator must be 1.
    pub fn int_matrix(&mut self) -> Result<IntMatrix, FormatError> {
        let at = self.last + 1;
        let m = self.matrix()?;
        m.to_integer()
            .ok_or_else(|| FormatError::new(at, "expected an integer matrix (denominator 1)"))
    }
}

fn parse_dim(x: &BigInt, line: usize) -> Result<usize, FormatError> {
    use num_traits::ToPrimitive;
    match x.to_usize() {
        Some(d) if d <= MAX_TEXT_DIM => Ok(d),
        _ => Err(FormatError::new(line, format!("dimension {x} out of range 0..={MAX_TEXT_DIM}"))),
    }
}

/// Parses a canonical decimal integer (no `+`, no leading zeros).
pub fn parse_int(token: &str, line: usize) -> Result<BigInt, FormatError> {
    let digits = token.strip_prefix('-').unwrap_or(token);
    let canonical = !digits.is_empty()
        && digits.bytes().all(|b| b.is_ascii_digit())
        && (digits == "0" || !digits.starts_with('0'))
        && token != "-0";
    if !canonical {
        return Err(FormatError::new(line, format!("invalid integer `{}`", truncate(token))));
    }
    token
        .parse()
        .map_err(|_| FormatError::new(line, format!("invalid integer `{}`", truncate(token))))
}

/// Space-separated integers; an empty line is an empty list.
pub fn parse_int_list(line: &str, line_no: usize) -> Result<Vec<BigInt>, FormatError> {
    if line.is_empty() {
        return Ok(Vec::new());
    }
    line.split(' ').map(|t| parse_int(t, line_no)).collect()
}

/// Splits `k1=v1 k2=v2 …` and checks the keys appear exactly in `keys` order.
pub fn parse_fields<'a>(line: &'a str, line_no: usize, keys: &[&str]) -> Result<Vec<&'a str>, FormatError> {
    let parts: Vec<&str> = line.split(' ').collect();
    if parts.len() != keys.len() {
        return Err(FormatError::new(
            line_no,
            format!("expected fields {}", keys.join(" ")),
        ));
    }
    parts
        .iter()
        .zip(keys)
        .map(|(p, k)| match p.split_once('=') {
            Some((key, value)) if key == *k => Ok(value),
            _ => Err(FormatError::new(line_no, format!("expected field `{k}=`"))),
        })
        .collect()
}

fn truncate(s: &str) -> String {
    s.chars().take(32).collect()
}

pub fn write_int_row(out: &mut String, row: &[BigInt]) {
    for (i, x) in row.iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        write!(out, "{x}").expect("write to String");
    }
    out.push('\n');
}

pub fn write_matrix(out: &mut String, m: &RatMatrix) {
    writeln!(out, "{} {} {}", m.rows(), m.cols(), m.denominator()).expect("write to String");
    for i in 0..m.rows() {
        write_int_row(out, m.numerators().row(i));
    }
}

pub fn write_int_matrix(out: &mut String, m: &IntMatrix) {
    writeln!(out, "{} {} 1", m.rows(), m.cols()).expect("write to String");
    for i in 0..m.rows() {
        write_int_row(out, m.row(i));
    }
}

pub fn format_matrix(m: &RatMatrix) -> String {
    let mut s = String::new();
    write_matrix(&mut s, m);
    s
}

/// Parses a document holding exactly one matrix block.
pub fn parse_matrix(text: &str) -> Result<RatMatrix, FormatError> {
    let mut r = LineReader::new(text);
    let m = r.matrix()?;
    r.expect_end()?;
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let m = RatMatrix::new(IntMatrix::from_i64(&[[1, -2], [3, 4]]), BigInt::from(5)).unwrap();
        let s = format_matrix(&m);
        assert_eq!(s, "2 2 5\n1 -2\n3 4\n");
        assert_eq!(parse_matrix(&s).unwrap(), m);
    }

    #[test]
    fn diagnostics_carry_line_numbers() {
        assert_eq!(parse_matrix("2 2 1\n1 0\n").unwrap_err().line, 0);
        assert_eq!(parse_matrix("2 2 1\n1 0\n0 x\n").unwrap_err().line, 3);
        assert_eq!(parse_matrix("2 2 1\n1 0\n0  1\n").unwrap_err().line, 3);
        assert_eq!(parse_matrix("2 2 0\n").unwrap_err().line, 1);
        assert_eq!(parse_matrix("1 1 2\n4\n").unwrap_err().line, 1);
        assert!(parse_matrix("1 1 1\n7\nextra\n").is_err());
    }

    #[test]
    fn integers_must_be_canonical() {
        assert!(parse_int("007", 1).is_err());
        assert!(parse_int("-0", 1).is_err());
        assert!(parse_int("+3", 1).is_err());
        assert_eq!(parse_int("-12", 1).unwrap(), BigInt::from(-12));
    }
}
