//! Experiment harness: flat config files in, `results.csv` and `plot.svg`
//! out.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod experiments;
pub mod record;
pub mod svg;

use thiserror::Error;

pub use config::{ExperimentConfig, Kind};
pub use experiments::{lipschitz_scan, run, write_outputs};
pub use record::{Row, RunRecord, Verdict};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("config error: {0}")]
    Config(String),
    #[error("input error: {0}")]
    Input(String),
    #[error("assertion failed at trial {trial} ({label}): {note}")]
    ExperimentAssertionFailed { trial: usize, label: String, note: String },
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl HarnessError {
    /// Process exit status: 1 for a failed assertion, 2 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::ExperimentAssertionFailed { .. } => 1,
            _ => 2,
        }
    }
}

/// Runs `config`, writes its outputs into `out_dir`, and turns the first
/// failing row into an error.
pub fn execute(config: &ExperimentConfig, out_dir: &std::path::Path) -> Result<RunRecord, HarnessError> {
    let record = run(config)?;
    write_outputs(&record, out_dir)?;
    if let Some(row) = record.first_failure() {
        return Err(HarnessError::ExperimentAssertionFailed {
            trial: row.trial,
            label: row.label.clone(),
            note: if row.note.is_empty() {
                format!("value {:?} vs reference {:?}", row.value, row.reference)
            } else {
                row.note.clone()
            },
        });
    }
    Ok(record)
}
