use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use atmoqkd::cli::{parse_config_file, preset_table, run, OUT_DIR_ENV};

#[derive(Parser)]
#[command(name = "atmoqkd", version, about = "Atmospheric CV-QKD link simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the sweep described by a config file.
    Simulate {
        config: PathBuf,
        /// Output directory (overrides the config and the environment).
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Seasonal parameter presets.
    Presets {
        #[command(subcommand)]
        action: PresetAction,
    },
    /// Parse and validate a config without running it.
    Validate { config: PathBuf },
}

#[derive(Subcommand)]
enum PresetAction {
    List,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match dispatch(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cli: Cli) -> atmoqkd::Result<ExitCode> {
    match cli.command {
        Command::Presets { action: PresetAction::List } => {
            println!("season,cn2_m^-2/3,mol_scatter_per_km,mol_absorb_per_km,aer_scatter_per_km,aer_absorb_per_km");
            for (season, cn2, ext) in preset_table() {
                let ext = ext
                    .map(|e| {
                        [e.mol_scatter, e.mol_absorb, e.aer_scatter, e.aer_absorb]
                            .map(|v| format!("{}", v * 1e3))
                            .join(",")
                    })
                    .unwrap_or_else(|| "summer,summer,summer,summer".into());
                println!("{season},{cn2:e},{ext}");
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Validate { config } => {
            let c = parse_config_file(&config)?;
            for w in &c.warnings {
                eprintln!("warning: {w}");
            }
            println!(
                "ok: {} scenario(s), {} distance(s), {} detector(s)",
                c.scenarios.len(),
                c.distances.len(),
                c.detectors.len()
            );
            Ok(ExitCode::SUCCESS)
        }
        Command::Simulate {
            config,
            out,
            seed,
            samples,
            threads,
        } => {
            let mut c = parse_config_file(&config)?;
            if let Some(dir) = out.or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from)) {
                c.output.directory = dir;
            }
            if let Some(seed) = seed {
                c.engine.seed = seed;
            }
            if let Some(n) = samples {
                if n == 0 {
                    return Err(atmoqkd::Error::Invalid {
                        key: "--samples".into(),
                        reason: "must be >= 1".into(),
                    });
                }
                c.engine.samples = n;
            }
            if let Some(t) = threads {
                c.engine.workers = t;
            }
            let report = run(&c)?;
            for w in &report.warnings {
                eprintln!("warning: {w}");
            }
            for f in &report.files {
                println!("{}", f.display());
            }
            if report.succeeded() {
                Ok(ExitCode::SUCCESS)
            } else {
                eprintln!("error: all {} rows failed", report.total_rows);
                Ok(ExitCode::FAILURE)
            }
        }
    }
}
