//! End-to-end harness behavior: output files, byte determinism, the
//! qualitative series ordering behind the plots, and CLI exit codes.

use std::fs;
use std::process::Command;

use blockgs_harness::acceptance::ACCEPTANCE_CONFIG;
use blockgs_harness::config::parse_config;
use blockgs_harness::emit::{csv_string, emit_csv, emit_report};
use blockgs_harness::plot::emit_plots;
use blockgs_harness::sweep::run_sweep;

use blockgs::AlgorithmId;

#[test]
fn sweep_outputs_are_byte_deterministic() {
    let cfg = parse_config(ACCEPTANCE_CONFIG).unwrap();
    let a = csv_string(&run_sweep(&cfg));
    let b = csv_string(&run_sweep(&cfg));
    assert_eq!(a, b);
    assert!(a.lines().count() > 1);
}

#[test]
fn reorthogonalized_series_sit_below_pip_beyond_1e4() {
    // The numeric ordering behind the kappa-plots: past kappa = 1e4, plain
    // PIP has visibly worse orthogonality than both reorthogonalized
    // variants on every NaN-free point.
    let cfg = parse_config(ACCEPTANCE_CONFIG).unwrap();
    let records = run_sweep(&cfg);
    let loo_of = |alg: AlgorithmId, kappa: f64| {
        records
            .iter()
            .find(|r| {
                r.algorithm == alg
                    && r.io == blockgs::IntraorthId::HouseQr
                    && (r.kappa - kappa).abs() < 1e-9 * kappa
            })
            .map(|r| r.loo)
            .unwrap()
    };
    let kappas: Vec<f64> = {
        let mut ks: Vec<f64> = records.iter().map(|r| r.kappa).collect();
        ks.sort_by(f64::total_cmp);
        ks.dedup();
        ks
    };
    let mut compared = 0;
    for &k in kappas.iter().filter(|&&k| k >= 1e4) {
        let pip = loo_of(AlgorithmId::Pip, k);
        let plus = loo_of(AlgorithmId::PipPlus, k);
        let inner = loo_of(AlgorithmId::PipiPlus, k);
        if pip.is_nan() || plus.is_nan() || inner.is_nan() {
            continue;
        }
        assert!(pip > 10.0 * plus, "kappa {k:.2e}: PIP {pip:.2e} vs PIP+ {plus:.2e}");
        assert!(pip > 10.0 * inner, "kappa {k:.2e}: PIP {pip:.2e} vs PIPI+ {inner:.2e}");
        compared += 1;
    }
    assert!(compared >= 2, "not enough comparable points");
}

#[test]
fn emitters_write_expected_files() {
    let cfg = {
        let mut c = parse_config(ACCEPTANCE_CONFIG).unwrap();
        c.sweep.truncate(2);
        c
    };
    let records = run_sweep(&cfg);
    let dir = tempfile::tempdir().unwrap();

    emit_csv(&records, &dir.path().join("results.csv")).unwrap();
    let csv = fs::read_to_string(dir.path().join("results.csv")).unwrap();
    assert_eq!(csv.lines().count(), records.len() + 1);
    assert!(csv.starts_with("class,knobs,kappa,algorithm,io,precision,loo,rel_res,rel_chol_res,sync_points,wall_time"));

    let written = emit_plots(&records, &[cfg.class], dir.path()).unwrap();
    assert_eq!(written.len(), 2);
    for path in &written {
        let svg = fs::read_to_string(path).unwrap();
        assert!(svg.starts_with("<svg"));
        assert!(svg.contains("<circle"));
    }

    emit_report(&records, &cfg, &dir.path().join("report.md")).unwrap();
    let report = fs::read_to_string(dir.path().join("report.md")).unwrap();
    assert!(report.contains("Generated: "));
    assert!(report.contains("results.csv"));
}

#[test]
fn mp_sync_column_uses_split_products_as_single_points() {
    let cfg = parse_config(ACCEPTANCE_CONFIG).unwrap();
    let records = run_sweep(&cfg);
    for r in &records {
        assert_eq!(r.sync_points, r.algorithm.expected_sync_points(cfg.p));
        if r.algorithm.is_mixed_precision() {
            assert_eq!(r.precision, "single+double");
        } else {
            assert_eq!(r.precision, "double");
        }
    }
}

// ---------------------------------------------------------------------------
// CLI behavior
// ---------------------------------------------------------------------------

fn cli() -> Command {
    Command::new(env!("CARGO_BIN_EXE_blockgs"))
}

#[test]
fn cli_check_and_run_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.json");
    fs::write(
        &good,
        r#"{
        "matrix": {"class": "default", "m": 30, "p": 3, "s": 2,
                   "knob_sweep": [[1.0],[2.0]], "seed": 5},
        "algorithms": ["BCGS_PIP", "BCGS_PIPI+"],
        "ios": ["HouseQR"],
        "output_dir": "unused"
    }"#,
    )
    .unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, r#"{"matrix": {}}"#).unwrap();

    let status = cli().args(["check"]).arg(&good).status().unwrap();
    assert_eq!(status.code(), Some(0));

    let status = cli().args(["check"]).arg(&bad).status().unwrap();
    assert_eq!(status.code(), Some(1));

    let out = dir.path().join("out");
    let status = cli()
        .args(["run"])
        .arg(&good)
        .arg("--out")
        .arg(&out)
        .args(["--jobs", "2", "--seed", "9"])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    assert!(out.join("results.csv").exists());
    assert!(out.join("report.md").exists());
    assert!(out.join("default_loo.svg").exists());
    assert!(out.join("default_cholres.svg").exists());

    let status = cli().args(["run"]).arg(&bad).status().unwrap();
    assert_eq!(status.code(), Some(1));

    // --config spelling works too.
    let status = cli()
        .args(["check", "--config"])
        .arg(&good)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
}

#[test]
fn cli_acceptance_exits_zero_on_correct_build() {
    let output = cli().arg("acceptance").output().unwrap();
    assert_eq!(output.status.code(), Some(0), "{}", String::from_utf8_lossy(&output.stdout));
    let stdout = String::from_utf8_lossy(&output.stdout);
    assert_eq!(stdout.matches("PASS criterion").count(), 12);
}

#[test]
fn cli_seed_override_changes_output() {
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("cfg.json");
    fs::write(
        &cfg_path,
        r#"{
        "matrix": {"class": "default", "m": 30, "p": 3, "s": 2,
                   "knob_sweep": [[2.0]], "seed": 5},
        "algorithms": ["BCGS_PIP"],
        "ios": ["HouseQR"],
        "output_dir": "unused"
    }"#,
    )
    .unwrap();
    let out_a = dir.path().join("a");
    let out_b = dir.path().join("b");
    let out_c = dir.path().join("c");
    for (out, seed) in [(&out_a, "5"), (&out_b, "5"), (&out_c, "6")] {
        let status = cli()
            .args(["run"])
            .arg(&cfg_path)
            .arg("--out")
            .arg(out)
            .args(["--seed", seed])
            .status()
            .unwrap();
        assert_eq!(status.code(), Some(0));
    }
    let a = fs::read(out_a.join("results.csv")).unwrap();
    let b = fs::read(out_b.join("results.csv")).unwrap();
    let c = fs::read(out_c.join("results.csv")).unwrap();
    assert_eq!(a, b);
    assert_ne!(a, c);
}
