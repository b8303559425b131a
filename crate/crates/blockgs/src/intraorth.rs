//! Intraorthogonalization routines: the pluggable `IO(X) -> (Q, R)` step
//! applied to the first block and to intra-block work in every algorithm.
//!
//! Two routines are provided. `HouseQR` is unconditionally stable
//! (`‖I - QᵀQ‖ = O(ε)` regardless of conditioning) and stands in for a
//! distributed TSQR. `CholQR` forms the Gram matrix and factors it by the
//! non-halting Cholesky, which is cheap but loses orthogonality like
//! `O(ε)κ²(X)` and produces NaN once `κ(X)` reaches about `ε^{-1/2}`.

use crate::linalg::{cholesky_nonstop, householder_qr, matmul, Matrix, QrFactors, Trans};
use crate::precision::Scalar;

/// Registered intraorthogonalization routines.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum IntraorthId {
    HouseQr,
    CholQr,
}

impl IntraorthId {
    /// Name used in configuration files.
    pub fn name(self) -> &'static str {
        match self {
            IntraorthId::HouseQr => "HouseQR",
            IntraorthId::CholQr => "CholQR",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        match name {
            "HouseQR" => Some(IntraorthId::HouseQr),
            "CholQR" => Some(IntraorthId::CholQr),
            _ => None,
        }
    }
}

impl std::fmt::Display for IntraorthId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Orthogonalize the columns of a tall block vector: `X ≈ Q R`.
///
/// No errors are raised; a CholQR breakdown surfaces as NaN entries in the
/// returned factors.
pub fn intraorthogonalize<T: Scalar>(x: &Matrix<T>, kind: IntraorthId) -> QrFactors<T> {
    assert!(x.rows() >= x.cols(), "block vector must be tall");
    match kind {
        IntraorthId::HouseQr => householder_qr(x),
        IntraorthId::CholQr => {
            let gram = matmul(x, Trans::Yes, x, Trans::No).symmetrize();
            let r = cholesky_nonstop(&gram);
            let q = crate::linalg::tri_solve_right(x, &r);
            QrFactors { q, r }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::two_norm;
    use crate::metrics;

    fn rotation(c: f64, s: f64) -> Matrix<f64> {
        Matrix::from_column_major(2, 2, vec![c, s, -s, c])
    }

    #[test]
    fn orthonormal_input_gives_identity_r() {
        let x = rotation(0.6, 0.8);
        for kind in [IntraorthId::HouseQr, IntraorthId::CholQr] {
            let f = intraorthogonalize(&x, kind);
            for j in 0..2 {
                for i in 0..2 {
                    let want_r = if i == j { 1.0 } else { 0.0 };
                    assert!((f.r.as_matrix()[(i, j)] - want_r).abs() < 1e-14);
                    assert!((f.q[(i, j)] - x[(i, j)]).abs() < 1e-13);
                }
            }
        }
    }

    /// Graded two-column matrix with condition number near 10^k.
    fn graded(kexp: i32) -> Matrix<f64> {
        let small = 10f64.powi(-kexp);
        let mut x = Matrix::zeros(6, 2);
        x[(0, 0)] = 1.0;
        x[(1, 0)] = 1e-8;
        x[(0, 1)] = 1.0;
        x[(1, 1)] = small;
        x
    }

    #[test]
    fn cholqr_quadratic_loo_regime() {
        // kappa ~ 1e6: CholQR loss of orthogonality sits in the eps*kappa^2
        // window, far above HouseQR on the same input.
        let x = graded(6);
        let kappa = crate::linalg::cond2(&x).unwrap();
        assert!(kappa > 1e5 && kappa < 1e8, "kappa = {kappa}");
        let chol = intraorthogonalize(&x, IntraorthId::CholQr);
        let loo = metrics::loss_of_orthogonality(&chol.q);
        assert!(loo > 1e-6 && loo < 1e-2, "loo = {loo}");
        let house = intraorthogonalize(&x, IntraorthId::HouseQr);
        let loo_house = metrics::loss_of_orthogonality(&house.q);
        assert!(loo_house < 1e-14, "house loo = {loo_house}");
        // eps*kappa^2 envelope with factor-100 slack.
        assert!(loo <= 100.0 * f64::EPSILON / 2.0 * kappa * kappa);
    }

    #[test]
    fn cholqr_breaks_down_at_high_kappa() {
        let x = graded(9);
        let f = intraorthogonalize(&x, IntraorthId::CholQr);
        let broke = f.q.has_nan() || metrics::loss_of_orthogonality(&f.q) > 1e-1;
        assert!(broke);
    }

    #[test]
    fn cholqr_residual_contract() {
        // RᵀR tracks XᵀX whenever no NaN occurred.
        let x = graded(4);
        let f = intraorthogonalize(&x, IntraorthId::CholQr);
        assert!(!f.r.as_matrix().has_nan());
        let xtx = matmul(&x, Trans::Yes, &x, Trans::No);
        let rtr = matmul(f.r.as_matrix(), Trans::Yes, f.r.as_matrix(), Trans::No);
        let num = two_norm(&xtx.sub(&rtr)).unwrap();
        let den = two_norm(&x).unwrap();
        assert!(num <= 1e-12 * den * den, "residual = {}", num / (den * den));
    }
}
