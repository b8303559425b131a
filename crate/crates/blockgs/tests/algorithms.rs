//! Behavioral contracts of the six algorithms on the benchmark matrix
//! classes, including the two-precision variants, plus measurement-noise
//! bounds on the metrics themselves.

use proptest::prelude::*;

use blockgs::bgs::{
    bcgs_pip, bcgs_pip_mp, bcgs_pip_plus, bcgs_pip_plus_mp, bcgs_pipi_plus, bcgs_pipi_plus_mp,
    BlockMatrix,
};
use blockgs::linalg::{cond2, matmul, singular_values, Matrix, Trans};
use blockgs::metrics;
use blockgs::precision::{demote, PrecisionId, PrecisionPair};
use blockgs::testmat::{Knobs, MatrixSpec};
use blockgs::{DoubleDouble, IntraorthId};

const EPS_DOUBLE: f64 = 1.110_223_024_625_156_5e-16;
const EPS_SINGLE: f64 = 5.960_464_477_539_063e-8;

fn glued(e: f64, seed: u64) -> BlockMatrix<f64> {
    MatrixSpec {
        m: 100,
        p: 10,
        s: 2,
        knobs: Knobs::Glued {
            t1: e / 2.0,
            t2: e / 2.0,
        },
        seed,
    }
    .generate()
    .unwrap()
}

#[test]
fn pip_on_moderate_glued_matrix() {
    // kappa near 1e4: quadratic LOO envelope and a Cholesky residual at
    // working precision.
    let x = glued(4.3, 11);
    let kappa = cond2(x.data()).unwrap();
    assert!(kappa > 1e3 && kappa < 1e5);
    let (f, st) = bcgs_pip(&x, IntraorthId::HouseQr);
    assert!(!st.had_nan);
    let loo = metrics::loss_of_orthogonality(&f.q);
    assert!(loo <= 100.0 * EPS_DOUBLE * kappa * kappa, "loo = {loo:.3e}");
    let chol = metrics::rel_chol_residual(&f.r, x.data());
    assert!(chol <= 1e-12, "chol residual = {chol:.3e}");
}

#[test]
fn pip_plus_tolerates_cholqr_io() {
    // No orthogonality assumption on the IO: CholQR-backed PIP+ still
    // reaches working-precision LOO at kappa = 1e6.
    let x = glued(6.3, 11);
    let kappa = cond2(x.data()).unwrap();
    assert!(kappa > 1e5 && kappa < 1e7);
    let (f, st) = bcgs_pip_plus(&x, IntraorthId::CholQr);
    assert!(!st.had_nan);
    let loo = metrics::loss_of_orthogonality(&f.q);
    assert!(loo <= 1e-13, "loo = {loo:.3e}");
}

#[test]
fn pip_plus_voids_beyond_breakdown() {
    // Once eps*kappa^2 > 1 the bound is void: expect degradation or NaN.
    let x = glued(10.3, 11);
    let (f, st) = bcgs_pip_plus(&x, IntraorthId::HouseQr);
    let loo = metrics::loss_of_orthogonality(&f.q);
    assert!(st.had_nan || loo.is_nan() || loo > 1e-13);
}

#[test]
fn pipi_plus_io_sensitivity_on_monomial() {
    // Desk-scale Krylov-style matrix: the fused variant needs a stable IO,
    // so CholQR degrades it by orders of magnitude while HouseQR does not.
    let spec = MatrixSpec {
        m: 200,
        p: 12,
        s: 10,
        knobs: Knobs::Monomial { r: 24, t: 5 },
        seed: 20240502,
    };
    let x = spec.generate().unwrap();
    let (fh, _) = bcgs_pipi_plus(&x, IntraorthId::HouseQr);
    let loo_house = metrics::loss_of_orthogonality(&fh.q);
    assert!(loo_house <= 1e-13, "house loo = {loo_house:.3e}");
    let (fc, _) = bcgs_pipi_plus(&x, IntraorthId::CholQr);
    let loo_chol = metrics::loss_of_orthogonality(&fc.q);
    assert!(
        loo_chol >= 10.0 * loo_house,
        "chol {loo_chol:.3e} vs house {loo_house:.3e}"
    );
}

#[test]
fn pip_mp_single_double_keeps_cholesky_residual_low() {
    // kappa ~ 1e5 with the (single, double) pair: the Pythagorean step runs
    // in double, so the Cholesky residual stays at the low-precision level.
    let x = glued(5.3, 3).convert::<f32>();
    let (f, st) = bcgs_pip_mp::<f32, f64>(&x, IntraorthId::HouseQr);
    assert!(!st.had_nan);
    let chol = metrics::rel_chol_residual(&f.r.convert::<f64>(), &x.convert::<f64>().into_data());
    assert!(chol <= 1e-6, "chol residual = {chol:.3e}");
}

#[test]
fn pip_mp_beyond_single_breakdown_completes() {
    // kappa ~ 1e6 is beyond 1/sqrt(eps_single): the run must complete and
    // record whatever happened; large LOO and NaN are both legitimate.
    let x = glued(6.3, 3).convert::<f32>();
    let (f, st) = bcgs_pip_mp::<f32, f64>(&x, IntraorthId::HouseQr);
    assert_eq!(st.sync_points, 10);
    let loo = metrics::loss_of_orthogonality(&f.q.convert::<f64>());
    assert!(loo.is_nan() || loo >= 0.0);
}

#[test]
fn pip_plus_mp_reaches_low_precision_orthogonality() {
    let x = glued(5.3, 3);
    let kappa = cond2(x.data()).unwrap();
    let xs = x.convert::<f32>();
    let (f, st) = bcgs_pip_plus_mp::<f32, f64>(&xs, IntraorthId::HouseQr);
    assert!(!st.had_nan, "unexpected NaN at kappa {kappa:.2e}");
    let loo = metrics::loss_of_orthogonality(&f.q.convert::<f64>());
    assert!(loo <= 100.0 * EPS_SINGLE, "loo = {loo:.3e}");
}

#[test]
fn pipi_plus_mp_tracks_eps_kappa_on_default_sweep() {
    // The (single, double) pair holds the eps_low * kappa envelope while the
    // first-stage Gram difference stays numerically positive, which for the
    // default class means kappa up to roughly 1/sqrt(eps_single).
    for t in [2.0, 3.0, 4.0] {
        let spec = MatrixSpec {
            m: 100,
            p: 10,
            s: 2,
            knobs: Knobs::Default { t },
            seed: 5,
        };
        let x = spec.generate().unwrap();
        let kappa = cond2(x.data()).unwrap();
        let xs = x.convert::<f32>();
        let (f, st) = bcgs_pipi_plus_mp::<f32, f64>(&xs, IntraorthId::HouseQr);
        assert!(!st.had_nan, "NaN at t = {t}");
        let loo = metrics::loss_of_orthogonality(&f.q.convert::<f64>());
        assert!(
            loo <= 100.0 * EPS_SINGLE * kappa,
            "t = {t}: loo = {loo:.3e}, kappa = {kappa:.3e}"
        );
    }
    // The full sweep to kappa = 1e7 needs the wider (double, double_double)
    // pair, which behaves well far beyond its own guarantee.
    for t in [5.0, 6.0, 7.0] {
        let spec = MatrixSpec {
            m: 100,
            p: 10,
            s: 2,
            knobs: Knobs::Default { t },
            seed: 5,
        };
        let x = spec.generate().unwrap();
        let kappa = cond2(x.data()).unwrap();
        let (f, st) = bcgs_pipi_plus_mp::<f64, DoubleDouble>(&x, IntraorthId::HouseQr);
        assert!(!st.had_nan, "NaN at t = {t}");
        let loo = metrics::loss_of_orthogonality(&f.q);
        assert!(
            loo <= 100.0 * EPS_DOUBLE * kappa,
            "t = {t}: loo = {loo:.3e}, kappa = {kappa:.3e}"
        );
    }
}

#[test]
fn pip_plus_mp_on_piled_matrices_records_whatever_happens() {
    // Piled matrices beyond 1/sqrt(eps_single): erratic LOO is permitted;
    // the contract is only that the run completes with its sync count.
    let spec = MatrixSpec {
        m: 100,
        p: 10,
        s: 5,
        knobs: Knobs::Piled { t1: 2.0, t2: 3.0 },
        seed: 13,
    };
    let x = spec.generate().unwrap();
    assert!(cond2(x.data()).unwrap() >= 1e4);
    let xs = x.convert::<f32>();
    let (_, st) = bcgs_pip_plus_mp::<f32, f64>(&xs, IntraorthId::HouseQr);
    assert_eq!(st.sync_points, 20);
}

#[test]
fn dd_pair_survives_far_beyond_double_breakdown() {
    // The (double, double_double) pair keeps the fused variant at working
    // precision well past the uniform kappa ~ 1e8 wall.
    let x = glued(10.3, 11);
    let kappa = cond2(x.data()).unwrap();
    assert!(kappa > 1e9);
    let (f, st) = bcgs_pipi_plus_mp::<f64, DoubleDouble>(&x, IntraorthId::HouseQr);
    assert!(!st.had_nan);
    let loo = metrics::loss_of_orthogonality(&f.q);
    assert!(loo <= 1e-13, "loo = {loo:.3e}");
}

// ---------------------------------------------------------------------------
// Metric measurement noise
// ---------------------------------------------------------------------------

/// Loss of orthogonality recomputed with the opposite accumulation order.
fn loo_reversed_order(q: &Matrix<f64>) -> f64 {
    let n = q.cols();
    let mut gram = Matrix::<f64>::zeros(n, n);
    for j in 0..n {
        for i in 0..n {
            let mut acc = DoubleDouble::ZERO;
            for k in (0..q.rows()).rev() {
                acc = acc + DoubleDouble::from_f64(q[(k, i)]) * DoubleDouble::from_f64(q[(k, j)]);
            }
            let diag = if i == j { DoubleDouble::ONE } else { DoubleDouble::ZERO };
            gram[(i, j)] = (diag - acc).to_f64();
        }
    }
    singular_values(&gram).unwrap()[0]
}

#[test]
fn metric_insensitive_to_summation_order() {
    // Same metric under a different valid summation order moves < 1%.
    for e in [2.3, 4.3, 6.3] {
        let x = glued(e, 11);
        let (f, _) = bcgs_pip(&x, IntraorthId::HouseQr);
        let a = metrics::loss_of_orthogonality(&f.q);
        let b = loo_reversed_order(&f.q);
        assert!(
            (a - b).abs() <= 0.01 * a.abs(),
            "e = {e}: {a:.6e} vs {b:.6e}"
        );
    }
}

#[test]
fn run_is_deterministic_end_to_end() {
    let spec = MatrixSpec {
        m: 80,
        p: 8,
        s: 2,
        knobs: Knobs::Glued { t1: 2.0, t2: 2.0 },
        seed: 77,
    };
    let run = || {
        let x = spec.generate().unwrap();
        let (f, st) = bcgs_pipi_plus(&x, IntraorthId::HouseQr);
        let loo = metrics::loss_of_orthogonality(&f.q);
        (loo.to_bits(), st.sync_points, f.q.data().to_vec())
    };
    let (a_loo, a_sync, a_q) = run();
    let (b_loo, b_sync, b_q) = run();
    assert_eq!(a_loo, b_loo);
    assert_eq!(a_sync, b_sync);
    for (x, y) in a_q.iter().zip(&b_q) {
        assert_eq!(x.to_bits(), y.to_bits());
    }
}

#[test]
fn quadratic_product_reassembly_matches_gram() {
    // R from any NaN-free run is a Cholesky factor of the Gram matrix:
    // the glued kappa = 1e6 instance keeps the relative residual at eps.
    let x = glued(6.3, 11);
    let (f, st) = bcgs_pip(&x, IntraorthId::HouseQr);
    assert!(!st.had_nan);
    let xtx = matmul(x.data(), Trans::Yes, x.data(), Trans::No);
    let rtr = matmul(f.r.as_matrix(), Trans::Yes, f.r.as_matrix(), Trans::No);
    let num = singular_values(&xtx.sub(&rtr)).unwrap()[0];
    let den = singular_values(x.data()).unwrap()[0];
    assert!(num <= 1e-12 * den * den);
}

// ---------------------------------------------------------------------------
// Precision properties
// ---------------------------------------------------------------------------

proptest! {
    #[test]
    fn demote_round_trips_low_precision_values(x in any::<f32>()) {
        prop_assume!(x.is_finite());
        let pair = PrecisionPair::new(PrecisionId::Single, PrecisionId::Double).unwrap();
        let widened = x as f64;
        prop_assert_eq!(demote(widened, pair) as f32, x);
    }

    #[test]
    fn demote_is_monotone(a in -1e30f64..1e30, b in -1e30f64..1e30) {
        let pair = PrecisionPair::new(PrecisionId::Single, PrecisionId::Double).unwrap();
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(demote(lo, pair) <= demote(hi, pair));
    }

    #[test]
    fn dd_add_commutes_bitwise(a in -1e6f64..1e6, b in -1e6f64..1e6) {
        let x = DoubleDouble::from_f64(a) * DoubleDouble::from_f64(1.0 / 3.0);
        let y = DoubleDouble::from_f64(b) * DoubleDouble::from_f64(1.0 / 7.0);
        let s1 = x + y;
        let s2 = y + x;
        prop_assert_eq!(s1.hi.to_bits(), s2.hi.to_bits());
        prop_assert_eq!(s1.lo.to_bits(), s2.lo.to_bits());
    }
}
