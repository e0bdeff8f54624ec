use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LatticeError {
    SingularMatrix,
    NotSquare { rows: usize, cols: usize },
    DimensionMismatch { expected: usize, found: usize },
    /// An exhaustive oracle was asked to run above its dimension guard.
    DimensionTooLarge { n: usize, limit: usize },
    InvalidParameter(String),
}

impl fmt::Display for LatticeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeError::SingularMatrix => write!(f, "matrix is singular"),
            LatticeError::NotSquare { rows, cols } => {
                write!(f, "expected a square matrix, got {rows}x{cols}")
            }
            LatticeError::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            LatticeError::DimensionTooLarge { n, limit } => {
                write!(f, "dimension {n} exceeds the exhaustive-search guard of {limit}")
            }
            LatticeError::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
        }
    }
}

impl std::error::Error for LatticeError {}
