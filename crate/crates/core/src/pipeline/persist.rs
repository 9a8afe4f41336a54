//! On-disk artefacts: datasets as `manifest.json` + `values.csv`, feature
//! matrices as labelled CSV, and JSON for everything else.
//!
//! Floats are written with Rust's shortest round-trip formatting, so a value
//! read back is bit-identical to the value written.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use super::dataset::Dataset;
use super::recipe::DatasetRecipe;
use super::PipelineError;
use crate::data::{FeatureMatrix, Label};
use crate::seriesgen::{LabeledSeries, ProcessSpec, GENERATOR_NAME};

pub const SCHEMA_VERSION: u32 = 1;
pub const MANIFEST_FILE: &str = "manifest.json";
pub const VALUES_FILE: &str = "values.csv";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesEntry {
    pub label: Label,
    pub seed: u64,
    pub spec: ProcessSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub schema_version: u32,
    pub generator: String,
    pub master_seed: u64,
    pub length: usize,
    pub recipe: DatasetRecipe,
    pub series: Vec<SeriesEntry>,
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> PipelineError + '_ {
    move |source| PipelineError::Io { path: path.to_path_buf(), source }
}

fn format_err(path: &Path, line: usize, message: impl Into<String>) -> PipelineError {
    PipelineError::Format { path: path.to_path_buf(), line, message: message.into() }
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), PipelineError> {
    let mut text = serde_json::to_string_pretty(value).expect("artefacts serialise to JSON");
    text.push('\n');
    fs::write(path, text).map_err(io_err(path))
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, PipelineError> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    serde_json::from_str(&text).map_err(|e| format_err(path, e.line(), e.to_string()))
}

fn push_row(out: &mut String, lead: Option<u8>, values: &[f64]) {
    let mut first = true;
    if let Some(label) = lead {
        write!(out, "{label}").unwrap();
        first = false;
    }
    for v in values {
        if !first {
            out.push(',');
        }
        write!(out, "{v:e}").unwrap();
        first = false;
    }
    out.push('\n');
}

fn parse_row(path: &Path, line_no: usize, line: &str) -> Result<Vec<f64>, PipelineError> {
    line.split(',')
        .map(|field| {
            field
                .trim()
                .parse::<f64>()
                .map_err(|_| format_err(path, line_no, format!("cannot parse {field:?} as a number")))
        })
        .collect()
}

/// Writes a dataset into `dir`, creating it if needed.
pub fn save_dataset(dataset: &Dataset, dir: &Path) -> Result<(), PipelineError> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let manifest = Manifest {
        schema_version: SCHEMA_VERSION,
        generator: GENERATOR_NAME.to_string(),
        master_seed: dataset.master_seed,
        length: dataset.length,
        recipe: dataset.recipe.clone(),
        series: dataset
            .series
            .iter()
            .map(|s| SeriesEntry { label: s.label, seed: s.seed, spec: s.spec.clone() })
            .collect(),
    };
    write_json(&dir.join(MANIFEST_FILE), &manifest)?;
    let mut csv = String::with_capacity(dataset.series.len() * dataset.length * 24);
    for s in &dataset.series {
        push_row(&mut csv, None, &s.values);
    }
    let path = dir.join(VALUES_FILE);
    fs::write(&path, csv).map_err(io_err(&path))
}

pub fn load_dataset(dir: &Path) -> Result<Dataset, PipelineError> {
    let manifest_path = dir.join(MANIFEST_FILE);
    let text = fs::read_to_string(&manifest_path).map_err(io_err(&manifest_path))?;
    let raw: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| format_err(&manifest_path, e.line(), e.to_string()))?;
    let found = raw.get("schema_version").and_then(|v| v.as_u64());
    if found != Some(u64::from(SCHEMA_VERSION)) {
        return Err(PipelineError::SchemaVersion {
            path: manifest_path,
            found: found.map_or_else(|| "none".to_string(), |v| v.to_string()),
            expected: SCHEMA_VERSION,
        });
    }
    let manifest: Manifest =
        serde_json::from_value(raw).map_err(|e| format_err(&manifest_path, 0, e.to_string()))?;

    let values_path = dir.join(VALUES_FILE);
    let text = fs::read_to_string(&values_path).map_err(io_err(&values_path))?;
    let mut series = Vec::with_capacity(manifest.series.len());
    let mut rows = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    for entry in &manifest.series {
        let (i, line) = rows.next().ok_or_else(|| {
            format_err(&values_path, text.lines().count(), "fewer rows than the manifest lists")
        })?;
        let values = parse_row(&values_path, i + 1, line)?;
        if values.len() != manifest.length {
            return Err(format_err(
                &values_path,
                i + 1,
                format!("expected {} values, found {}", manifest.length, values.len()),
            ));
        }
        series.push(LabeledSeries { values, label: entry.label, spec: entry.spec.clone(), seed: entry.seed });
    }
    if let Some((i, _)) = rows.next() {
        return Err(format_err(&values_path, i + 1, "more rows than the manifest lists"));
    }
    Ok(Dataset { recipe: manifest.recipe, master_seed: manifest.master_seed, length: manifest.length, series })
}

/// Feature matrix as CSV: a `label,f0,f1,...` header, then one row per
/// instance with the class label first.
pub fn save_features(matrix: &FeatureMatrix, path: &Path) -> Result<(), PipelineError> {
    let mut out = String::with_capacity(matrix.n_rows() * (matrix.n_cols() + 1) * 24);
    out.push_str("label");
    for j in 0..matrix.n_cols() {
        write!(out, ",f{j}").unwrap();
    }
    out.push('\n');
    for (row, label) in matrix.rows().zip(matrix.labels()) {
        push_row(&mut out, Some(u8::from(*label)), row);
    }
    fs::write(path, out).map_err(io_err(path))
}

pub fn load_features(path: &Path) -> Result<FeatureMatrix, PipelineError> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    let mut lines = text.lines().enumerate();
    let n_cols = match lines.next() {
        Some((_, header)) if header.starts_with("label") => header.split(',').count() - 1,
        _ => return Err(format_err(path, 1, "missing `label,f0,...` header")),
    };
    let mut values = Vec::new();
    let mut labels = Vec::new();
    for (i, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let (label, rest) = line.split_once(',').unwrap_or((line, ""));
        let label = label
            .trim()
            .parse::<u8>()
            .ok()
            .and_then(|v| Label::try_from(v).ok())
            .ok_or_else(|| format_err(path, i + 1, format!("bad class label {label:?}")))?;
        let row = if rest.is_empty() { Vec::new() } else { parse_row(path, i + 1, rest)? };
        if row.len() != n_cols {
            return Err(format_err(path, i + 1, format!("expected {n_cols} features, found {}", row.len())));
        }
        values.extend(row);
        labels.push(label);
    }
    let n_rows = labels.len();
    FeatureMatrix::from_flat(n_rows, n_cols, values, labels).map_err(|e| format_err(path, 0, e.to_string()))
}

pub fn dataset_dir(run_dir: &Path, recipe_name: &str) -> PathBuf {
    run_dir.join("datasets").join(recipe_name)
}
