use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use maglab::{execute, ExperimentConfig, HarnessError, Kind, RunRecord};

/// Magnitude experiments: runs one experiment and writes results.csv (and
/// plot.svg where applicable) into the output directory.
#[derive(Debug, Parser)]
#[command(name = "maglab", version)]
struct Cli {
    /// Experiment to run.
    #[arg(value_enum)]
    kind: Kind,

    /// Flat `key = value` config file.
    #[arg(long)]
    config: Option<PathBuf>,

    /// Output directory [default: config `out`, then $MAGLAB_OUT, then
    /// ./maglab-out].
    #[arg(long)]
    out: Option<PathBuf>,

    /// Seed for randomized experiments; overrides the config.
    #[arg(long)]
    seed: Option<u64>,

    /// Point-cloud file (shortcut for `points = <file>`).
    #[arg(long, conflicts_with = "distances")]
    points: Option<PathBuf>,

    /// Distance-matrix file (shortcut for `distances = <file>`).
    #[arg(long)]
    distances: Option<PathBuf>,

    /// Suppress progress lines.
    #[arg(long)]
    quiet: bool,
}

fn build_config(cli: &Cli) -> Result<ExperimentConfig, HarnessError> {
    let mut config = match &cli.config {
        Some(path) => ExperimentConfig::load(cli.kind, path)?,
        None => ExperimentConfig::new(cli.kind),
    };
    if let Some(seed) = cli.seed {
        config.override_param("seed", &seed.to_string())?;
    }
    // shortcut paths are taken relative to the working directory
    for (key, path) in [("points", &cli.points), ("distances", &cli.distances)] {
        if let Some(path) = path {
            let absolute = std::env::current_dir()?.join(path);
            config.override_param(key, &absolute.to_string_lossy())?;
        }
    }
    Ok(config)
}

fn summarize(record: &RunRecord) -> String {
    let failures = record.rows.iter().filter(|r| r.verdict == maglab::Verdict::Fail).count();
    format!(
        "{} rows, {} failed, {:.3}s",
        record.rows.len(),
        failures,
        record.duration.as_secs_f64()
    )
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = match build_config(&cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("maglab: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let out = cli
        .out
        .clone()
        .or_else(|| config.raw("out").map(|o| config.base_dir.join(o)))
        .or_else(|| std::env::var_os("MAGLAB_OUT").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("maglab-out"));
    if !cli.quiet {
        eprintln!("maglab: running {} into {}", cli.kind, out.display());
    }
    match execute(&config, &out) {
        Ok(record) => {
            if !cli.quiet {
                eprintln!("maglab: pass ({})", summarize(&record));
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("maglab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
