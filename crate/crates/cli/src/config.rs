//! Run configuration: command-line flags over an optional TOML file over
//! built-in defaults.

use std::path::{Path, PathBuf};

use clap::ValueEnum;
use mp_robust_core::DuplicatePlacement;
use serde::Deserialize;

use crate::CliError;

pub const SEED_ENV: &str = "MP_ROBUST_SEED";
pub const DEFAULT_SEED_COUNT: u64 = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DatasetKind {
    Keystrokes,
    Calf,
    Traffic,
    Generic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NoiseChoice {
    Dup,
    Irrelevant,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Placement {
    Adjacent,
    Random,
}

impl From<Placement> for DuplicatePlacement {
    fn from(p: Placement) -> Self {
        match p {
            Placement::Adjacent => DuplicatePlacement::Adjacent,
            Placement::Random => DuplicatePlacement::Random,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// Everything a config file may set. Unknown keys are rejected.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub kind: Option<DatasetKind>,
    pub window: Option<usize>,
    pub exclusion: Option<usize>,
    pub radius: Option<usize>,
    pub seeds: Option<Vec<u64>>,
    pub out: Option<PathBuf>,
    pub jobs: Option<usize>,
    pub fraction: Option<f64>,
    pub duplicate_placement: Option<Placement>,
    pub format: Option<Format>,
    pub bigram: Option<String>,
    pub top_bigram: Option<bool>,
    pub max_gap_ms: Option<i64>,
    pub interval_ms: Option<i64>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::config(format!("cannot read config {}: {e}", path.display())))?;
        toml::from_str(&text)
            .map_err(|e| CliError::config(format!("invalid config {}: {e}", path.display())))
    }
}

/// Seeds from flags, then the config file, then `MP_ROBUST_SEED`.
/// With none of those, `default_count` consecutive seeds starting at 1.
/// The environment seed stands for the first of `default_count` consecutive
/// seeds when more than one is wanted.
pub fn resolve_seeds(
    flag_seeds: Option<Vec<u64>>,
    flag_seed: Option<u64>,
    file: &FileConfig,
    default_count: u64,
) -> Result<Vec<u64>, CliError> {
    if let Some(s) = flag_seeds {
        return Ok(s);
    }
    if let Some(s) = flag_seed {
        return Ok(vec![s]);
    }
    if let Some(s) = &file.seeds {
        return Ok(s.clone());
    }
    let base = match std::env::var(SEED_ENV) {
        Ok(raw) => raw
            .trim()
            .parse::<u64>()
            .map_err(|_| CliError::config(format!("{SEED_ENV}='{raw}' is not an unsigned integer")))?,
        Err(_) => 1,
    };
    Ok((base..base + default_count).collect())
}
