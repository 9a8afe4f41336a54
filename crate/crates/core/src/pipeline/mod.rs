//! Dataset recipes, feature pipelines, experiments and their artefacts.

use std::path::PathBuf;

use thiserror::Error;

use crate::classify::ClassifyError;
use crate::seriesgen::SeriesError;

pub mod dataset;
pub mod experiment;
pub mod features;
pub mod persist;
pub mod plot;
pub mod recipe;
pub mod report;

use features::FeatureError;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("recipe {recipe}: {message}")]
    InvalidRecipe { recipe: String, message: String },
    #[error("recipe {recipe}: generation failed: {source}")]
    Generate {
        recipe: String,
        #[source]
        source: SeriesError,
    },
    #[error("{dataset}: {source}")]
    Feature {
        dataset: String,
        #[source]
        source: FeatureError,
    },
    #[error("{dataset}: {source}")]
    Classify {
        dataset: String,
        #[source]
        source: ClassifyError,
    },
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{}:{line}: {message}", path.display())]
    Format { path: PathBuf, line: usize, message: String },
    #[error("{}: unsupported schema version {found} (expected {expected})", path.display())]
    SchemaVersion { path: PathBuf, found: String, expected: u32 },
    #[error("refusing to write empty plot data to {}", .0.display())]
    EmptyPlot(PathBuf),
}
