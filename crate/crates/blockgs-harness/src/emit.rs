//! CSV and markdown-report emitters.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::Path;

use chrono::{SecondsFormat, Utc};

use crate::config::SweepConfig;
use crate::sweep::RunRecord;

/// Shortest round-trip decimal; NaN renders as the literal `NaN`.
fn real(x: f64) -> String {
    if x.is_nan() {
        "NaN".to_owned()
    } else {
        format!("{x}")
    }
}

/// Render the records as CSV text.
///
/// The `wall_time` column is reserved and always written as `0`: the CSV is
/// the byte-deterministic artifact of a sweep (identical configuration means
/// identical bytes), and a measured time can never satisfy that. Timings
/// remain available on [`RunRecord`].
pub fn csv_string(records: &[RunRecord]) -> String {
    let mut out =
        String::from("class,knobs,kappa,algorithm,io,precision,loo,rel_res,rel_chol_res,sync_points,wall_time\n");
    for r in records {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},0",
            r.class.name(),
            r.knobs.label(),
            real(r.kappa),
            r.algorithm.name(),
            r.io.name(),
            r.precision,
            real(r.loo),
            real(r.rel_residual),
            real(r.rel_chol_residual),
            r.sync_points,
        );
    }
    out
}

/// Write `results.csv`.
pub fn emit_csv(records: &[RunRecord], path: &Path) -> io::Result<()> {
    fs::write(path, csv_string(records))
}

/// Render the markdown report.
///
/// The timestamp sits alone on its `Generated:` line, so regenerating the
/// report for identical records changes exactly that line.
pub fn report_string(records: &[RunRecord], config: &SweepConfig) -> String {
    let mut out = String::new();
    out.push_str("# Block Gram-Schmidt sweep report\n\n");
    let _ = writeln!(
        out,
        "Generated: {}",
        Utc::now().to_rfc3339_opts(SecondsFormat::Secs, true)
    );
    out.push('\n');

    out.push_str("## Configuration\n\n```\n");
    let _ = writeln!(
        out,
        "class={} m={} p={} s={} seed={} points={} ios=[{}] algorithms=[{}] mp_pair={}",
        config.class,
        config.m,
        config.p,
        config.s,
        config.seed,
        config.sweep.len(),
        config
            .ios
            .iter()
            .map(|io| io.name())
            .collect::<Vec<_>>()
            .join(", "),
        config
            .algorithms
            .iter()
            .map(|a| a.name())
            .collect::<Vec<_>>()
            .join(", "),
        match config.mp_pair {
            Some(p) => format!("({}, {})", p.low(), p.high()),
            None => "none".to_owned(),
        }
    );
    out.push_str("```\n\n");

    out.push_str("## Max loss of orthogonality per algorithm per class\n\n");
    out.push_str("| class | algorithm | max LOO | runs | NaN runs |\n");
    out.push_str("|-------|-----------|---------|------|----------|\n");
    // One row per (class, algorithm); NaN runs are excluded from the max.
    let mut table: BTreeMap<(&str, &str), (f64, usize, usize)> = BTreeMap::new();
    for a in &config.algorithms {
        table.insert((config.class.name(), a.name()), (f64::NAN, 0, 0));
    }
    for r in records {
        let entry = table
            .entry((r.class.name(), r.algorithm.name()))
            .or_insert((f64::NAN, 0, 0));
        entry.1 += 1;
        if r.loo.is_nan() {
            entry.2 += 1;
        } else if entry.0.is_nan() || r.loo > entry.0 {
            entry.0 = r.loo;
        }
    }
    for ((class, alg), (max_loo, runs, nans)) in &table {
        let _ = writeln!(
            out,
            "| {class} | {alg} | {} | {runs} | {nans} |",
            real(*max_loo)
        );
    }
    out.push('\n');

    out.push_str("## Outputs\n\n");
    out.push_str("- [results.csv](results.csv)\n");
    let _ = writeln!(
        out,
        "- [{c}_loo.svg]({c}_loo.svg)\n- [{c}_cholres.svg]({c}_cholres.svg)",
        c = config.class.name()
    );
    out
}

/// Write `report.md`.
pub fn emit_report(records: &[RunRecord], config: &SweepConfig, path: &Path) -> io::Result<()> {
    fs::write(path, report_string(records, config))
}
