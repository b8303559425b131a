//! Built-in acceptance suite: twelve checks covering sync counts, the
//! stability envelopes of every algorithm family, mixed-precision behavior,
//! oracle agreement on tiny instances, and end-to-end determinism.
//!
//! Every check runs on pinned deterministic instances, so a pass/fail
//! outcome is reproducible bit-for-bit. Checks with a stated wall-clock
//! budget also fail when they exceed it.

use std::fs;
use std::time::Instant;

use blockgs::bgs::{
    self, bcgs_pip, bcgs_pip_mp, bcgs_pip_plus, bcgs_pip_plus_mp, bcgs_pipi_plus,
    bcgs_pipi_plus_mp, BlockQr,
};
use blockgs::linalg::{cholesky_nonstop, cond2, matmul, tri_solve_right, two_norm, Matrix, Trans};
use blockgs::metrics;
use blockgs::precision::DoubleDouble;
use blockgs::{AlgorithmId, IntraorthId, Knobs, MatrixSpec, PrecisionId, PrecisionPair};

use crate::config::parse_config;
use crate::emit::emit_csv;
use crate::sweep::run_sweep;
use crate::tolerances::ToleranceProfile;

const EPS_DOUBLE: f64 = 1.110_223_024_625_156_5e-16; // 2^-53
const EPS_SINGLE: f64 = 5.960_464_477_539_063e-8; // 2^-24

/// Seed of the uniform-precision glued sweep (checks 2, 3, 4, 6).
const UNIFORM_SWEEP_SEED: u64 = 11;
/// Seed of the mixed-precision glued sweep (check 7).
const MP_SWEEP_SEED: u64 = 3;

/// Outcome of one acceptance check.
#[derive(Clone, Debug)]
pub struct CriterionResult {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        format!(
            "{} criterion {:2} ({}): {} [{:.2}s]",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.detail,
            self.seconds
        )
    }
}

/// Residual sample collected from checks 2-7 and consumed by check 9.
struct ResidualSample {
    context: String,
    single_working: bool,
    rel_residual: f64,
    nan_free: bool,
}

/// Glued sweep targeting measured kappa near 10^i for i = 2..=7.
///
/// Points up to 10^5 split the conditioning evenly between the base matrix
/// and the per-block scaling; the two hardest points push it into the
/// per-block scaling, where elementwise rounding stays relative to each
/// graded column and the single-precision projections survive.
fn glued_sweep_knobs(mixed_schedule: bool) -> Vec<(i32, Knobs)> {
    (2..=7)
        .map(|i| {
            let e = i as f64 + 0.3;
            let knobs = if mixed_schedule && i >= 6 {
                Knobs::Glued {
                    t1: 2.0,
                    t2: e - 2.0,
                }
            } else {
                Knobs::Glued {
                    t1: e / 2.0,
                    t2: e / 2.0,
                }
            };
            (i, knobs)
        })
        .collect()
}

fn glued_spec(knobs: Knobs, seed: u64) -> MatrixSpec {
    MatrixSpec {
        m: 100,
        p: 10,
        s: 2,
        knobs,
        seed,
    }
}

fn budget(elapsed: f64, limit: Option<f64>) -> bool {
    limit.is_none_or(|l| elapsed < l)
}

struct Check {
    id: usize,
    name: &'static str,
    limit: Option<f64>,
}

impl Check {
    fn finish(self, start: Instant, passed: bool, detail: String) -> CriterionResult {
        let seconds = start.elapsed().as_secs_f64();
        let in_budget = budget(seconds, self.limit);
        let detail = if in_budget {
            detail
        } else {
            format!("{detail}; exceeded {:.0}s budget", self.limit.unwrap())
        };
        CriterionResult {
            id: self.id,
            name: self.name,
            passed: passed && in_budget,
            detail,
            seconds,
        }
    }
}

// ---------------------------------------------------------------------------
// Individual checks
// ---------------------------------------------------------------------------

fn check_sync_counts() -> CriterionResult {
    let check = Check {
        id: 1,
        name: "sync counts",
        limit: Some(1.0),
    };
    let start = Instant::now();
    let io = IntraorthId::HouseQr;
    let pair = PrecisionPair::new(PrecisionId::Single, PrecisionId::Double).unwrap();
    let mut ok = true;
    let mut detail = String::new();
    for p in [1usize, 5, 10] {
        let spec = MatrixSpec {
            m: 40,
            p,
            s: 2,
            knobs: Knobs::Default { t: 1.0 },
            seed: 1,
        };
        let x = spec.generate().unwrap();
        for alg in AlgorithmId::ALL {
            let (_, stats) = bgs::run(&x, alg, io, Some(pair)).unwrap();
            let want = alg.expected_sync_points(p);
            if stats.sync_points != want {
                ok = false;
                detail = format!("{alg} at p={p}: {} != {want}", stats.sync_points);
            }
        }
    }
    if ok {
        detail = "p/2p/2p-1 exact for p in {1,5,10}, all six algorithms".into();
    }
    check.finish(start, ok, detail)
}

fn check_pip_quadratic(pool: &mut Vec<ResidualSample>) -> CriterionResult {
    let check = Check {
        id: 2,
        name: "PIP quadratic LOO regime",
        limit: Some(10.0),
    };
    let start = Instant::now();
    let tol = ToleranceProfile::default();
    let mut ok = true;
    let mut detail = String::new();
    let mut loo_at = [f64::NAN; 8];
    for (i, knobs) in glued_sweep_knobs(false) {
        let x = glued_spec(knobs, UNIFORM_SWEEP_SEED).generate().unwrap();
        let kappa = cond2(x.data()).unwrap();
        let (f, st) = bcgs_pip(&x, IntraorthId::HouseQr);
        let loo = metrics::loss_of_orthogonality(&f.q);
        loo_at[i as usize] = loo;
        pool.push(ResidualSample {
            context: format!("C2 PIP glued 1e{i}"),
            single_working: false,
            rel_residual: metrics::rel_residual(&f.q, &f.r, x.data()),
            nan_free: !st.had_nan,
        });
        let bound = tol.eps_kappa_sq_bound(EPS_DOUBLE, kappa);
        if !(loo <= bound) {
            ok = false;
            detail = format!("kappa={kappa:.2e}: loo={loo:.2e} > {bound:.2e}");
        }
    }
    let growth = loo_at[6] / loo_at[3];
    if !(growth >= 1e3) {
        ok = false;
        detail = format!("growth 1e3->1e6 only {growth:.2e}");
    }
    if ok {
        detail = format!(
            "loo within 100*eps*k^2 at 6 points; growth(1e3->1e6) = {growth:.1e}"
        );
    }
    check.finish(start, ok, detail)
}

fn check_reortho_o_eps(pool: &mut Vec<ResidualSample>) -> CriterionResult {
    let check = Check {
        id: 3,
        name: "reorthogonalized O(eps) LOO",
        limit: Some(20.0),
    };
    let start = Instant::now();
    let mut ok = true;
    let mut detail = String::new();
    let mut worst: f64 = 0.0;
    for (i, knobs) in glued_sweep_knobs(false) {
        let x = glued_spec(knobs, UNIFORM_SWEEP_SEED).generate().unwrap();
        for (tag, (f, st)) in [
            ("PIP+", bcgs_pip_plus(&x, IntraorthId::HouseQr)),
            ("PIPI+", bcgs_pipi_plus(&x, IntraorthId::HouseQr)),
        ] {
            let loo = metrics::loss_of_orthogonality(&f.q);
            worst = worst.max(loo);
            pool.push(ResidualSample {
                context: format!("C3 {tag} glued 1e{i}"),
                single_working: false,
                rel_residual: metrics::rel_residual(&f.q, &f.r, x.data()),
                nan_free: !st.had_nan,
            });
            if !(loo <= 1e-13) {
                ok = false;
                detail = format!("{tag} at 1e{i}: loo={loo:.2e} > 1e-13");
            }
        }
    }
    if ok {
        detail = format!("worst loo = {worst:.2e} <= 1e-13 across the sweep");
    }
    check.finish(start, ok, detail)
}

fn check_cholesky_residual(pool: &mut Vec<ResidualSample>) -> CriterionResult {
    let check = Check {
        id: 4,
        name: "Cholesky residual near working precision",
        limit: None,
    };
    let start = Instant::now();
    let mut ok = true;
    let mut detail = String::new();
    let mut worst: f64 = 0.0;
    for (i, knobs) in glued_sweep_knobs(false) {
        let x = glued_spec(knobs, UNIFORM_SWEEP_SEED).generate().unwrap();
        for (tag, (f, st)) in [
            ("PIP", bcgs_pip(&x, IntraorthId::HouseQr)),
            ("PIP+", bcgs_pip_plus(&x, IntraorthId::HouseQr)),
            ("PIPI+", bcgs_pipi_plus(&x, IntraorthId::HouseQr)),
        ] {
            let chol = metrics::rel_chol_residual(&f.r, x.data());
            worst = worst.max(chol);
            pool.push(ResidualSample {
                context: format!("C4 {tag} glued 1e{i}"),
                single_working: false,
                rel_residual: metrics::rel_residual(&f.q, &f.r, x.data()),
                nan_free: !st.had_nan,
            });
            if !(chol <= 1e-12) {
                ok = false;
                detail = format!("{tag} at 1e{i}: rel chol res {chol:.2e} > 1e-12");
            }
        }
    }
    if ok {
        detail = format!("worst rel chol residual = {worst:.2e} <= 1e-12");
    }
    check.finish(start, ok, detail)
}

fn check_io_sensitivity(pool: &mut Vec<ResidualSample>) -> CriterionResult {
    let check = Check {
        id: 5,
        name: "PIPI+ IO sensitivity on monomial",
        limit: Some(60.0),
    };
    let start = Instant::now();
    let spec = MatrixSpec {
        m: 400,
        p: 24,
        s: 10,
        knobs: Knobs::Monomial { r: 48, t: 5 },
        seed: 20240502,
    };
    let x = spec.generate().unwrap();
    let kappa = cond2(x.data()).unwrap();

    let (fh, sth) = bcgs_pipi_plus(&x, IntraorthId::HouseQr);
    let loo_house = metrics::loss_of_orthogonality(&fh.q);
    let (fc, stc) = bcgs_pipi_plus(&x, IntraorthId::CholQr);
    let loo_chol = metrics::loss_of_orthogonality(&fc.q);
    let (fp, stp) = bcgs_pip_plus(&x, IntraorthId::CholQr);
    let loo_plus = metrics::loss_of_orthogonality(&fp.q);

    for (tag, f, st) in [
        ("PIPI+/House", &fh, &sth),
        ("PIPI+/Chol", &fc, &stc),
        ("PIP+/Chol", &fp, &stp),
    ] {
        pool.push(ResidualSample {
            context: format!("C5 {tag} monomial"),
            single_working: false,
            rel_residual: metrics::rel_residual(&f.q, &f.r, x.data()),
            nan_free: !st.had_nan,
        });
    }

    let moderate = (1e5..1e7).contains(&kappa);
    let sensitive = loo_chol >= 10.0 * loo_house;
    let plus_immune = loo_plus <= 1e-13;
    let ok = moderate && sensitive && plus_immune;
    let detail = format!(
        "kappa={kappa:.2e}; PIPI+: chol {loo_chol:.2e} vs house {loo_house:.2e} ({}x); PIP+/chol {loo_plus:.2e}",
        (loo_chol / loo_house) as i64
    );
    check.finish(start, ok, detail)
}

fn check_breakdown(pool: &mut Vec<ResidualSample>) -> CriterionResult {
    let check = Check {
        id: 6,
        name: "breakdown beyond kappa = eps^-1/2",
        limit: None,
    };
    let start = Instant::now();
    let spec = glued_spec(
        Knobs::Glued { t1: 5.65, t2: 5.65 },
        UNIFORM_SWEEP_SEED,
    );
    let x = spec.generate().unwrap();
    let kappa = cond2(x.data()).unwrap();
    let mut ok = kappa >= 1e10;
    let mut detail = if ok {
        String::new()
    } else {
        format!("instance kappa {kappa:.2e} < 1e10")
    };
    let mut outcomes = Vec::new();
    for io in [IntraorthId::HouseQr, IntraorthId::CholQr] {
        for (tag, (f, st)) in [
            ("PIP", bcgs_pip(&x, io)),
            ("PIP+", bcgs_pip_plus(&x, io)),
            ("PIPI+", bcgs_pipi_plus(&x, io)),
        ] {
            let loo = metrics::loss_of_orthogonality(&f.q);
            let broke = st.had_nan || loo.is_nan() || loo > 1e-8;
            outcomes.push(format!(
                "{tag}/{io}:{}",
                if st.had_nan || loo.is_nan() { "NaN" } else { "loo" }
            ));
            pool.push(ResidualSample {
                context: format!("C6 {tag}/{io} glued 1e11"),
                single_working: false,
                rel_residual: metrics::rel_residual(&f.q, &f.r, x.data()),
                nan_free: !st.had_nan,
            });
            if !broke {
                ok = false;
                detail = format!("{tag}/{io}: loo={loo:.2e}, no breakdown observed");
            }
        }
    }
    if ok {
        detail = format!("kappa={kappa:.2e}; all six combinations broke ({})", outcomes.join(" "));
    }
    check.finish(start, ok, detail)
}

fn check_mixed_precision_trend(pool: &mut Vec<ResidualSample>) -> CriterionResult {
    let check = Check {
        id: 7,
        name: "mixed-precision trend (single,double)",
        limit: Some(30.0),
    };
    let start = Instant::now();
    let tol = ToleranceProfile::default();
    let mut ok = true;
    let mut detail = String::new();
    let mut compare_line = String::new();
    for (i, knobs) in glued_sweep_knobs(true) {
        let x = glued_spec(knobs, MP_SWEEP_SEED).generate().unwrap();
        let kappa = cond2(x.data()).unwrap();
        let xs = x.convert::<f32>();
        let (fmp, stmp) = bcgs_pipi_plus_mp::<f32, f64>(&xs, IntraorthId::HouseQr);
        let q64 = fmp.q.convert::<f64>();
        let loo_mp = metrics::loss_of_orthogonality(&q64);
        pool.push(ResidualSample {
            context: format!("C7 PIPI+MP glued 1e{i}"),
            single_working: true,
            rel_residual: metrics::rel_residual(
                &q64,
                &fmp.r.convert::<f64>(),
                &xs.convert::<f64>().into_data(),
            ),
            nan_free: !stmp.had_nan,
        });
        let bound = tol.eps_kappa_bound(EPS_SINGLE, kappa);
        if stmp.had_nan || !(loo_mp <= bound) {
            ok = false;
            detail = format!(
                "at kappa={kappa:.2e}: mp loo={loo_mp:.2e} (nan={}) vs bound {bound:.2e}",
                stmp.had_nan
            );
        }
        if i == 5 {
            let (fsi, stsi) = bcgs_pipi_plus(&xs, IntraorthId::HouseQr);
            let qsi = fsi.q.convert::<f64>();
            let loo_single = metrics::loss_of_orthogonality(&qsi);
            pool.push(ResidualSample {
                context: "C7 uniform-single PIPI+ glued 1e5".into(),
                single_working: true,
                rel_residual: metrics::rel_residual(
                    &qsi,
                    &fsi.r.convert::<f64>(),
                    &xs.convert::<f64>().into_data(),
                ),
                nan_free: !stsi.had_nan,
            });
            // A NaN single-precision run counts as unbounded loss.
            let wins = if loo_single.is_nan() {
                !stmp.had_nan && loo_mp.is_finite()
            } else {
                10.0 * loo_mp <= loo_single
            };
            compare_line = format!(
                "at 1e5: mp {loo_mp:.2e} vs uniform-single {}",
                if loo_single.is_nan() { "NaN".into() } else { format!("{loo_single:.2e}") }
            );
            if !wins {
                ok = false;
                detail = format!("mixed precision not 10x better ({compare_line})");
            }
        }
    }
    if ok {
        detail = format!("loo <= 100*eps_single*kappa at 6 points; {compare_line}");
    }
    check.finish(start, ok, detail)
}

fn bitwise_equal(a: &BlockQr<f64>, b: &BlockQr<f64>) -> bool {
    a.q.data()
        .iter()
        .zip(b.q.data())
        .all(|(x, y)| x.to_bits() == y.to_bits())
        && a.r
            .as_matrix()
            .data()
            .iter()
            .zip(b.r.as_matrix().data())
            .all(|(x, y)| x.to_bits() == y.to_bits())
}

fn check_degenerate_pair() -> CriterionResult {
    let check = Check {
        id: 8,
        name: "degenerate (double,double) pair equivalence",
        limit: None,
    };
    let start = Instant::now();
    let mut specs = Vec::new();
    for j in 0..20u64 {
        let spec = match j % 4 {
            0 => MatrixSpec {
                m: 30 + 2 * j as usize,
                p: 4,
                s: 2,
                knobs: Knobs::Default {
                    t: 1.0 + 0.2 * j as f64,
                },
                seed: 100 + j,
            },
            1 => MatrixSpec {
                m: 40 + j as usize,
                p: 5,
                s: 2,
                knobs: Knobs::Glued {
                    t1: 1.0 + 0.1 * j as f64,
                    t2: 1.0,
                },
                seed: 200 + j,
            },
            2 => MatrixSpec {
                m: 36 + j as usize,
                p: 4,
                s: 3,
                knobs: Knobs::Monomial { r: 6, t: 2 },
                seed: 300 + j,
            },
            _ => MatrixSpec {
                m: 40 + j as usize,
                p: 4,
                s: 3,
                knobs: Knobs::Piled { t1: 1.0, t2: 1.5 },
                seed: 400 + j,
            },
        };
        specs.push(spec);
    }

    let mut ok = true;
    let mut detail = String::new();
    let mut count = 0usize;
    for (idx, spec) in specs.iter().enumerate() {
        let x = spec.generate().unwrap();
        let io = if idx % 2 == 0 {
            IntraorthId::HouseQr
        } else {
            IntraorthId::CholQr
        };
        let cases: [(&str, BlockQr<f64>, BlockQr<f64>); 3] = [
            ("PIP", bcgs_pip(&x, io).0, bcgs_pip_mp::<f64, f64>(&x, io).0),
            (
                "PIP+",
                bcgs_pip_plus(&x, io).0,
                bcgs_pip_plus_mp::<f64, f64>(&x, io).0,
            ),
            (
                "PIPI+",
                bcgs_pipi_plus(&x, io).0,
                bcgs_pipi_plus_mp::<f64, f64>(&x, io).0,
            ),
        ];
        for (tag, uniform, mixed) in cases {
            count += 1;
            if !bitwise_equal(&uniform, &mixed) {
                ok = false;
                detail = format!("{tag} differs on spec #{idx} ({})", spec.knobs.label());
            }
        }
    }
    if ok {
        detail = format!("{count} algorithm runs bit-identical across 20 specs");
    }
    check.finish(start, ok, detail)
}

fn check_residual_universality(pool: &[ResidualSample]) -> CriterionResult {
    let check = Check {
        id: 9,
        name: "residual universality",
        limit: None,
    };
    let start = Instant::now();
    let mut ok = true;
    let mut detail = String::new();
    let mut checked = 0usize;
    for sample in pool.iter().filter(|s| s.nan_free) {
        checked += 1;
        let limit = if sample.single_working { 1e-5 } else { 1e-13 };
        if !(sample.rel_residual <= limit) {
            ok = false;
            detail = format!(
                "{}: rel residual {:.2e} > {limit:.0e}",
                sample.context, sample.rel_residual
            );
        }
    }
    if ok {
        detail = format!("{checked} NaN-free runs within their residual limits");
    }
    check.finish(start, ok, detail)
}

fn sign_normalize(q: &mut Matrix<f64>, r: &mut Matrix<f64>) {
    for j in 0..r.cols() {
        if r[(j, j)] < 0.0 {
            for c in j..r.cols() {
                r[(j, c)] = -r[(j, c)];
            }
            for i in 0..q.rows() {
                q[(i, j)] = -q[(i, j)];
            }
        }
    }
}

fn check_tiny_oracle() -> CriterionResult {
    let check = Check {
        id: 10,
        name: "extended-precision oracle on tiny instances",
        limit: None,
    };
    let start = Instant::now();
    let spec = MatrixSpec {
        m: 12,
        p: 3,
        s: 2,
        knobs: Knobs::Default { t: 1.8 },
        seed: 20240504,
    };
    let x = spec.generate().unwrap();
    let kappa = cond2(x.data()).unwrap();

    // Oracle: Cholesky of the Gram matrix and Q = X R^{-1}, in double-double.
    let xd = x.data().convert::<DoubleDouble>();
    let gram = matmul(&xd, Trans::Yes, &xd, Trans::No);
    let r_dd = cholesky_nonstop(&gram);
    let q_dd = tri_solve_right(&xd, &r_dd);
    let mut r_oracle = r_dd.as_matrix().convert::<f64>();
    let mut q_oracle = q_dd.convert::<f64>();
    sign_normalize(&mut q_oracle, &mut r_oracle);
    let r_norm = two_norm(&r_oracle).unwrap();

    let io = IntraorthId::HouseQr;
    let pair = PrecisionPair::new(PrecisionId::Double, PrecisionId::DoubleDouble).unwrap();
    let mut ok = kappa <= 1e2;
    let mut detail = if ok {
        String::new()
    } else {
        format!("instance kappa {kappa:.2e} > 1e2")
    };
    let mut worst_r: f64 = 0.0;
    let mut worst_q: f64 = 0.0;
    for alg in AlgorithmId::ALL {
        let (f, _) = bgs::run(&x, alg, io, Some(pair)).unwrap();
        let mut q = f.q.clone();
        let mut r = f.r.as_matrix().clone();
        sign_normalize(&mut q, &mut r);
        let dr = two_norm(&r.sub(&r_oracle)).unwrap() / r_norm;
        let dq = two_norm(&q.sub(&q_oracle)).unwrap() / two_norm(&q_oracle).unwrap();
        worst_r = worst_r.max(dr);
        worst_q = worst_q.max(dq);
        if !(dr <= 1e-10 && dq <= 1e-10) {
            ok = false;
            detail = format!("{alg}: dR={dr:.2e}, dQ={dq:.2e} (limit 1e-10)");
        }
    }
    if ok {
        detail = format!(
            "kappa={kappa:.1e}; worst dR={worst_r:.2e}, worst dQ={worst_q:.2e} over six algorithms"
        );
    }
    check.finish(start, ok, detail)
}

fn check_block_size_independence() -> CriterionResult {
    let check = Check {
        id: 11,
        name: "block-size independence",
        limit: None,
    };
    let start = Instant::now();
    let spec = glued_spec(Knobs::Glued { t1: 2.0, t2: 2.0 }, 1);
    let x = spec.generate().unwrap();
    let mut loos = Vec::new();
    for s in [1usize, 2, 5] {
        let xs = x.repartition(s).unwrap();
        let (f, _) = bcgs_pipi_plus(&xs, IntraorthId::HouseQr);
        loos.push(metrics::loss_of_orthogonality(&f.q));
    }
    let max = loos.iter().cloned().fold(0.0f64, f64::max);
    let min = loos.iter().cloned().fold(f64::INFINITY, f64::min);
    let ratio = max / min;
    let ok = ratio <= 10.0 && loos.iter().all(|l| l.is_finite());
    let rendered: Vec<String> = loos.iter().map(|l| format!("{l:.2e}")).collect();
    let detail = format!("loo(s=1,2,5) = [{}]; max/min = {ratio:.2}", rendered.join(", "));
    check.finish(start, ok, detail)
}

/// Configuration used by the determinism check (and exercised end-to-end:
/// parse, sweep, emit).
pub const ACCEPTANCE_CONFIG: &str = r#"{
  "matrix": {
    "class": "glued",
    "m": 100, "p": 10, "s": 2,
    "knob_sweep": [[1.15, 1.15], [1.65, 1.65], [2.15, 2.15],
                   [2.65, 2.65], [3.15, 3.15], [3.65, 3.65]],
    "seed": 11
  },
  "algorithms": ["BCGS_PIP", "BCGS_PIP+", "BCGS_PIPI+", "BCGS_PIPI+_MP"],
  "ios": ["HouseQR", "CholQR"],
  "mp_pair": ["single", "double"],
  "output_dir": "acceptance_out"
}"#;

fn check_determinism() -> CriterionResult {
    let check = Check {
        id: 12,
        name: "byte-identical rerun",
        limit: None,
    };
    let start = Instant::now();
    let config = match parse_config(ACCEPTANCE_CONFIG) {
        Ok(c) => c,
        Err(e) => {
            return check.finish(start, false, format!("embedded config invalid: {e}"));
        }
    };
    let dir = std::env::temp_dir().join(format!("blockgs-acceptance-{}", std::process::id()));
    let result = (|| -> std::io::Result<(Vec<u8>, Vec<u8>)> {
        fs::create_dir_all(&dir)?;
        let a_path = dir.join("results_a.csv");
        let b_path = dir.join("results_b.csv");
        emit_csv(&run_sweep(&config), &a_path)?;
        emit_csv(&run_sweep(&config), &b_path)?;
        Ok((fs::read(&a_path)?, fs::read(&b_path)?))
    })();
    let _ = fs::remove_dir_all(&dir);
    match result {
        Ok((a, b)) => {
            let ok = a == b && !a.is_empty();
            let detail = if ok {
                format!("two runs produced identical CSV bytes ({} bytes)", a.len())
            } else {
                "rerun produced different CSV bytes".into()
            };
            check.finish(start, ok, detail)
        }
        Err(e) => check.finish(start, false, format!("io error: {e}")),
    }
}

/// Run all twelve checks in order, one result per criterion.
pub fn run_all() -> Vec<CriterionResult> {
    let mut pool: Vec<ResidualSample> = Vec::new();
    let mut results = vec![
        check_sync_counts(),
        check_pip_quadratic(&mut pool),
        check_reortho_o_eps(&mut pool),
        check_cholesky_residual(&mut pool),
        check_io_sensitivity(&mut pool),
        check_breakdown(&mut pool),
        check_mixed_precision_trend(&mut pool),
        check_degenerate_pair(),
    ];
    results.push(check_residual_universality(&pool));
    results.push(check_tiny_oracle());
    results.push(check_block_size_independence());
    results.push(check_determinism());
    results
}
