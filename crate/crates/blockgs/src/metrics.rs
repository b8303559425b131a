//! Stability metrics, accumulated in double-double.
//!
//! Measuring a loss of orthogonality near 1e-16 with plain double arithmetic
//! would drown the signal in measurement noise, so every Gram product and
//! residual difference here is formed in double-double before the final
//! 2-norm. The cancellation (for example `I - QᵀQ`) happens in extended
//! precision; only the already-tiny result is rounded back to double for the
//! singular value computation.

use crate::linalg::{matmul, singular_values, Matrix, Trans, UpperTriangular};
use crate::precision::DoubleDouble;

/// The three quality metrics of a run plus the matrix condition number.
///
/// All fields are nonnegative or NaN (NaN marks a broken run).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StabilityReport {
    pub loo: f64,
    pub rel_residual: f64,
    pub rel_chol_residual: f64,
    pub kappa: f64,
}

/// `‖I - QᵀQ‖₂` with the Gram product accumulated in double-double.
///
/// Returns NaN when `q` has NaN or infinite entries.
pub fn loss_of_orthogonality(q: &Matrix<f64>) -> f64 {
    if q.has_non_finite() {
        return f64::NAN;
    }
    let qd = q.convert::<DoubleDouble>();
    let mut gram = matmul(&qd, Trans::Yes, &qd, Trans::No);
    for i in 0..gram.rows() {
        gram[(i, i)] = DoubleDouble::ONE - gram[(i, i)];
    }
    for j in 0..gram.cols() {
        for i in 0..gram.rows() {
            if i != j {
                gram[(i, j)] = -gram[(i, j)];
            }
        }
    }
    let diff = gram.convert::<f64>();
    singular_values(&diff).map(|sv| sv[0]).unwrap_or(f64::NAN)
}

/// `‖QR - X‖₂ / ‖X‖₂` with the product formed in double-double.
pub fn rel_residual(q: &Matrix<f64>, r: &UpperTriangular<f64>, x: &Matrix<f64>) -> f64 {
    if q.has_non_finite() || r.as_matrix().has_non_finite() || x.has_non_finite() {
        return f64::NAN;
    }
    let qd = q.convert::<DoubleDouble>();
    let rd = r.as_matrix().convert::<DoubleDouble>();
    let xd = x.convert::<DoubleDouble>();
    let diff = matmul(&qd, Trans::No, &rd, Trans::No).sub(&xd).convert::<f64>();
    let num = singular_values(&diff).map(|sv| sv[0]).unwrap_or(f64::NAN);
    let den = match singular_values(x) {
        Ok(sv) => sv[0],
        Err(_) => return f64::NAN,
    };
    num / den
}

/// `‖XᵀX - RᵀR‖₂ / ‖X‖₂²`, Gram products in double-double.
pub fn rel_chol_residual(r: &UpperTriangular<f64>, x: &Matrix<f64>) -> f64 {
    if r.as_matrix().has_non_finite() || x.has_non_finite() {
        return f64::NAN;
    }
    let rd = r.as_matrix().convert::<DoubleDouble>();
    let xd = x.convert::<DoubleDouble>();
    let xtx = matmul(&xd, Trans::Yes, &xd, Trans::No);
    let rtr = matmul(&rd, Trans::Yes, &rd, Trans::No);
    let diff = xtx.sub(&rtr).convert::<f64>();
    let num = singular_values(&diff).map(|sv| sv[0]).unwrap_or(f64::NAN);
    let den = match singular_values(x) {
        Ok(sv) => sv[0],
        Err(_) => return f64::NAN,
    };
    num / (den * den)
}

/// All three metrics plus the measured condition number of `x`.
pub fn stability_report(
    q: &Matrix<f64>,
    r: &UpperTriangular<f64>,
    x: &Matrix<f64>,
) -> StabilityReport {
    let kappa = crate::linalg::cond2(x).unwrap_or(f64::NAN);
    StabilityReport {
        loo: loss_of_orthogonality(q),
        rel_residual: rel_residual(q, r, x),
        rel_chol_residual: rel_chol_residual(r, x),
        kappa,
    }
}
