//! `blockgs`: sweep runner and acceptance CLI.
//!
//! Exit codes: 0 on success, 1 on configuration/validation errors, 2 when
//! the acceptance suite fails.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use blockgs_harness::acceptance;
use blockgs_harness::config::{parse_config, SweepConfig};
use blockgs_harness::emit::{emit_csv, emit_report};
use blockgs_harness::plot::emit_plots;
use blockgs_harness::sweep::run_sweep;

#[derive(Parser)]
#[command(name = "blockgs", version, about = "Block Gram-Schmidt stability sweeps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a sweep: generate matrices, execute every (algorithm, io)
    /// combination, and emit results.csv, SVG plots, and report.md.
    Run {
        /// Path to the configuration file.
        #[arg(value_name = "CONFIG")]
        config: Option<PathBuf>,
        /// Alternative spelling of the configuration path.
        #[arg(long = "config", value_name = "PATH", conflicts_with = "config")]
        config_flag: Option<PathBuf>,
        /// Output directory (overrides the configured one).
        #[arg(long, value_name = "DIR")]
        out: Option<PathBuf>,
        /// Worker threads for sweep points.
        #[arg(long, value_name = "N")]
        jobs: Option<usize>,
        /// Generator seed (overrides the configured one).
        #[arg(long, value_name = "U64")]
        seed: Option<u64>,
    },
    /// Validate a configuration file without running it.
    Check {
        #[arg(value_name = "CONFIG")]
        config: Option<PathBuf>,
        #[arg(long = "config", value_name = "PATH", conflicts_with = "config")]
        config_flag: Option<PathBuf>,
    },
    /// Run the built-in acceptance suite and print one line per criterion.
    Acceptance,
}

fn load_config(
    positional: Option<PathBuf>,
    flag: Option<PathBuf>,
) -> Result<SweepConfig, String> {
    let path = positional
        .or(flag)
        .ok_or_else(|| "no configuration file given".to_owned())?;
    let text = fs::read_to_string(&path)
        .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    parse_config(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Check { config, config_flag } => match load_config(config, config_flag) {
            Ok(cfg) => {
                println!(
                    "ok: {} sweep with {} points, {} algorithms, {} ios",
                    cfg.class,
                    cfg.sweep.len(),
                    cfg.algorithms.len(),
                    cfg.ios.len()
                );
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(1)
            }
        },
        Command::Run {
            config,
            config_flag,
            out,
            jobs,
            seed,
        } => {
            let mut cfg = match load_config(config, config_flag) {
                Ok(c) => c,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(1);
                }
            };
            if let Some(seed) = seed {
                cfg.seed = seed;
            }
            if let Some(out) = out {
                cfg.output_dir = out;
            }
            if let Some(jobs) = jobs {
                // Build the global pool once; later calls would fail, so the
                // error (pool already set) is ignored deliberately.
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(jobs)
                    .build_global();
            }
            if let Err(e) = fs::create_dir_all(&cfg.output_dir) {
                eprintln!("error: cannot create {}: {e}", cfg.output_dir.display());
                return ExitCode::from(1);
            }

            let records = run_sweep(&cfg);
            let csv_path = cfg.output_dir.join("results.csv");
            let report_path = cfg.output_dir.join("report.md");
            let io_result = emit_csv(&records, &csv_path)
                .and_then(|_| emit_plots(&records, &[cfg.class], &cfg.output_dir).map(|_| ()))
                .and_then(|_| emit_report(&records, &cfg, &report_path));
            if let Err(e) = io_result {
                eprintln!("error: emitting outputs: {e}");
                return ExitCode::from(1);
            }
            println!(
                "{} records -> {}",
                records.len(),
                cfg.output_dir.display()
            );
            ExitCode::SUCCESS
        }
        Command::Acceptance => {
            let results = acceptance::run_all();
            let mut failed = 0;
            for r in &results {
                println!("{}", r.line());
                if !r.passed {
                    failed += 1;
                }
            }
            if failed == 0 {
                println!("acceptance: all {} criteria passed", results.len());
                ExitCode::SUCCESS
            } else {
                println!("acceptance: {failed} of {} criteria FAILED", results.len());
                ExitCode::from(2)
            }
        }
    }
}
