//! Batch front end: config ingestion, sweep execution and artifact output.

pub mod config;
pub mod output;

use std::path::PathBuf;
use std::time::Instant;

use serde::Serialize;

pub use config::{parse_config, parse_config_file, preset_table, LabelledScenario, OutputConfig, RunConfig};

use crate::engine::{sweep, EngineOptions, SweepResult, RNG_NAME};
use crate::error::Result;
use output::{ensure_dir, histogram_file_name, sweep_file_name, write_histogram_csv, write_json, write_sweep_csv};

/// Overrides the configured output directory (command-line flags win).
pub const OUT_DIR_ENV: &str = "ATMOQKD_OUT_DIR";

#[derive(Debug, Clone, Serialize)]
pub struct SeasonRun {
    pub label: String,
    pub result: SweepResult,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub directory: PathBuf,
    pub files: Vec<PathBuf>,
    pub warnings: Vec<String>,
    pub total_rows: usize,
    pub failed_rows: usize,
    pub runs: Vec<SeasonRun>,
}

impl RunReport {
    /// Success unless every row failed.
    pub fn succeeded(&self) -> bool {
        self.failed_rows < self.total_rows
    }
}

#[derive(Serialize)]
struct Metadata<'a> {
    tool: &'static str,
    version: &'static str,
    rng: &'static str,
    seed: u64,
    samples: usize,
    workers: usize,
    engine: &'a EngineOptions,
    config: &'a RunConfig,
    row_seeds: Vec<(f64, u64)>,
    files: &'a [PathBuf],
    warnings: &'a [String],
    total_rows: usize,
    failed_rows: usize,
    elapsed_seconds: f64,
}

/// Runs every configured season and writes the artifacts.
pub fn run(config: &RunConfig) -> Result<RunReport> {
    let started = Instant::now();
    let dir = ensure_dir(&config.output.directory)?;
    let mut warnings = config.warnings.clone();
    let mut files = Vec::new();
    let mut runs = Vec::new();
    let (mut total_rows, mut failed_rows) = (0, 0);

    for LabelledScenario { label, scenario } in &config.scenarios {
        log::info!("{label}: {} distances x {} detectors", config.distances.len(), config.detectors.len());
        let result = sweep(scenario, &config.distances, &config.detectors, &config.engine)?;
        warnings.extend(result.warnings.iter().map(|w| format!("{label}: {w}")));
        total_rows += result.rows.len();
        failed_rows += result.failed_rows();

        if config.output.csv {
            let path = dir.join(sweep_file_name(label));
            write_sweep_csv(&path, &result, config.output.rate_multiplier)?;
            files.push(path);
            if config.output.histograms {
                let mut seen = Vec::new();
                for row in &result.rows {
                    if let Some(ch) = &row.channel {
                        if !seen.contains(&row.distance) {
                            seen.push(row.distance);
                            let path = dir.join(histogram_file_name(label, row.distance));
                            write_histogram_csv(&path, &ch.stats.histogram)?;
                            files.push(path);
                        }
                    }
                }
            }
        }
        runs.push(SeasonRun {
            label: label.clone(),
            result,
        });
    }

    if config.output.json {
        let path = dir.join("metadata.json");
        let results_path = dir.join("results.json");
        files.push(path.clone());
        files.push(results_path.clone());
        let row_seeds = config
            .distances
            .iter()
            .enumerate()
            .map(|(i, &d)| (d, crate::engine::row_seed(config.engine.seed, i)))
            .collect();
        let meta = Metadata {
            tool: "atmoqkd",
            version: env!("CARGO_PKG_VERSION"),
            rng: RNG_NAME,
            seed: config.engine.seed,
            samples: config.engine.samples,
            workers: config.engine.workers,
            engine: &config.engine,
            config,
            row_seeds,
            files: &files,
            warnings: &warnings,
            total_rows,
            failed_rows,
            elapsed_seconds: started.elapsed().as_secs_f64(),
        };
        write_json(&path, &meta)?;
        write_json(&results_path, &runs)?;
    }

    Ok(RunReport {
        directory: dir,
        files,
        warnings,
        total_rows,
        failed_rows,
        runs,
    })
}
