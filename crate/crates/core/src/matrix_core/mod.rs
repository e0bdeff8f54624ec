//! Exact integer/rational linear algebra and lattice algorithms.

pub mod babai;
pub mod dual;
pub mod enumerate;
pub mod error;
pub mod hnf;
pub mod linalg;
pub mod lll;
pub mod matrix;
pub mod num;
pub mod odf;
pub mod text;

pub use babai::{babai_nearest_plane, babai_round, babai_round_with_inverse, distance_sq, NearestPlane};
pub use dual::{dual_basis, lattice_contains, lattice_intersect};
pub use enumerate::{cvp_exhaustive, svp_exhaustive, CvpResult, SvpResult, CVP_MAX_DIM, SVP_MAX_DIM};
pub use error::LatticeError;
pub use hnf::{hnf, hnf_with_modulus, is_hnf, HnfBasis};
pub use linalg::{adjugate, det, inverse_rational};
pub use lll::{is_lll_reduced, lll, same_lattice, DEFAULT_DELTA};
pub use matrix::{IntMatrix, RatMatrix};
pub use odf::{odf_report, OdfReport};
pub use text::FormatError;
