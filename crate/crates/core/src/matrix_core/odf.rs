//! Orthogonality defect of a basis and of its dual.

use num_traits::Zero;

use super::error::LatticeError;
use super::linalg::{det, inverse_rational};
use super::matrix::IntMatrix;
use super::num::{log2_abs, norm_sq};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OdfReport {
    /// `|det B⁻¹|·Π‖b_i‖`
    pub odf: f64,
    /// `|det B|·Π‖b*_i‖` over the dual rows
    pub odf_dual: f64,
    pub log2_odf: f64,
    pub log2_odf_dual: f64,
}

/// Both defects, evaluated in the log domain from exact integer data.
pub fn odf_report(b: &IntMatrix) -> Result<OdfReport, LatticeError> {
    let n = b.require_square()?;
    let d = det(b)?;
    if d.is_zero() {
        return Err(LatticeError::SingularMatrix);
    }
    let log_det = log2_abs(&d);
    let log_rows: f64 = (0..n).map(|i| 0.5 * log2_abs(&norm_sq(b.row(i)))).sum();
    let inv = inverse_rational(b)?;
    let m = inv.numerators();
    // dual rows are the columns of B⁻¹
    let log_dual_rows: f64 = (0..n).map(|j| 0.5 * log2_abs(&norm_sq(&m.column(j)))).sum::<f64>()
        - n as f64 * log2_abs(inv.denominator());
    let log2_odf = log_rows - log_det;
    let log2_odf_dual = log_dual_rows + log_det;
    Ok(OdfReport {
        odf: log2_odf.exp2(),
        odf_dual: log2_odf_dual.exp2(),
        log2_odf,
        log2_odf_dual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orthogonal_bases_have_defect_one() {
        for b in [IntMatrix::identity(3), IntMatrix::from_i64(&[[2, 0], [0, 5]])] {
            let r = odf_report(&b).unwrap();
            assert!((r.odf - 1.0).abs() < 1e-12);
            assert!((r.odf_dual - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn shear() {
        let r = odf_report(&IntMatrix::from_i64(&[[1, 0], [1, 1]])).unwrap();
        assert!((r.odf - 2f64.sqrt()).abs() < 1e-12);
        assert!((r.odf_dual - 2f64.sqrt()).abs() < 1e-12);
    }
}
