//! Experiment presets and TOML configuration files.

use std::path::{Path, PathBuf};

use clap::ValueEnum;
use thiserror::Error;

use crate::classify::LrHyper;
use crate::pipeline::experiment::{Counts, ExperimentConfig};
use crate::pipeline::features::ModelKind;
use crate::pipeline::recipe::DatasetRecipe;

pub const DEFAULT_SEED: u64 = 42;
pub const SERIES_LENGTH: usize = 2000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    /// Logistic regression on raw values.
    #[value(name = "table1-lr")]
    Table1Lr,
    /// Logistic regression on Fourier amplitudes.
    #[value(name = "table2-lr")]
    Table2Lr,
    /// ChaosFEX features of Fourier amplitudes.
    #[value(name = "table3")]
    Table3,
}

impl Preset {
    pub fn name(self) -> &'static str {
        match self {
            Preset::Table1Lr => "table1-lr",
            Preset::Table2Lr => "table2-lr",
            Preset::Table3 => "table3",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Scale {
    /// 250 training and 150 test series per class.
    Desk,
    /// 1250 series per class everywhere.
    Paper,
}

impl Scale {
    pub fn counts(self) -> Counts {
        let (train_per_class, test_per_class) = match self {
            Scale::Desk => (250, 150),
            Scale::Paper => (1250, 1250),
        };
        Counts { train_per_class, test_per_class, length: SERIES_LENGTH, burn_in: 0 }
    }
}

pub fn preset(kind: Preset, scale: Scale, master_seed: u64) -> ExperimentConfig {
    let (model, lr, test_recipes) = match kind {
        Preset::Table1Lr => (
            ModelKind::RawValues,
            LrHyper::library_default(),
            vec![DatasetRecipe::shift_one(), DatasetRecipe::shift_two()],
        ),
        Preset::Table2Lr => (
            ModelKind::FourierAmplitude,
            LrHyper::library_default(),
            vec![DatasetRecipe::shift_one(), DatasetRecipe::shift_two()],
        ),
        Preset::Table3 => (
            ModelKind::FourierChaosfex,
            LrHyper::chaosfex(),
            vec![
                DatasetRecipe::shift_one(),
                DatasetRecipe::shift_two(),
                DatasetRecipe::ar100(),
                DatasetRecipe::arma(),
                DatasetRecipe::arfima(),
            ],
        ),
    };
    ExperimentConfig {
        name: kind.name().to_string(),
        master_seed,
        model,
        split_fraction: 0.7,
        counts: scale.counts(),
        features: Default::default(),
        gls: Default::default(),
        lr,
        train_recipe: DatasetRecipe::ar_train(),
        test_recipes,
    }
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },
    #[error("{path}: {message}")]
    Invalid { path: PathBuf, message: String },
}

/// Reads and validates a config file. Parse errors carry the line, column
/// and offending key.
pub fn load_config(path: &Path) -> Result<ExperimentConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io { path: path.into(), source })?;
    let config = parse_config(&text).map_err(|message| ConfigError::Parse { path: path.into(), message })?;
    config.validate().map_err(|message| ConfigError::Invalid { path: path.into(), message })?;
    Ok(config)
}

pub fn parse_config(text: &str) -> Result<ExperimentConfig, String> {
    toml::from_str(text).map_err(|e| {
        let location = e.span().map(|span| {
            let line = text[..span.start].matches('\n').count() + 1;
            let col = span.start - text[..span.start].rfind('\n').map_or(0, |p| p + 1) + 1;
            format!("line {line}, column {col}: ")
        });
        format!("{}{}", location.unwrap_or_default(), e.message())
    })
}

pub fn to_toml(config: &ExperimentConfig) -> String {
    toml::to_string(config).expect("config serialises to TOML")
}
