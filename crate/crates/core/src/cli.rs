//! Command-line entry points. Every stage reads and writes files inside a
//! run directory, so stages can be run one at a time or all at once.
//!
//! Exit codes: 0 on success, 1 when a stage fails, 2 for usage or
//! configuration errors.

use std::ffi::OsString;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use crate::classify::LrModel;
use crate::config::{self, ConfigError, Preset, Scale, DEFAULT_SEED};
use crate::pipeline::experiment::{
    self, ExperimentConfig, ExperimentReport, FeatureSets, GeneratedData, NamedMatrix, StageTiming,
};
use crate::pipeline::features::{Featurizer, ModelKind};
use crate::pipeline::persist::{self, dataset_dir};
use crate::pipeline::report::render_text;
use crate::pipeline::{plot, PipelineError};

pub const CONFIG_FILE: &str = "config.toml";
pub const FEATURIZER_FILE: &str = "featurizer.json";
pub const MODEL_FILE: &str = "model.json";
pub const REPORT_JSON: &str = "report.json";
pub const REPORT_TEXT: &str = "report.txt";
pub const TIMINGS_FILE: &str = "timings.json";

#[derive(Debug, Parser)]
#[command(name = "chaoscause", version, about = "Classify time series as causal or non-causal")]
pub struct Cli {
    /// Worker threads for parallel stages [default: one per core]
    #[arg(long, global = true, value_name = "N")]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Overrides {
    /// Experiment file (TOML); replaces the preset
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Dataset sizes
    #[arg(long, value_enum)]
    pub scale: Option<Scale>,
    /// Shorthand for --scale paper
    #[arg(long, conflicts_with = "scale")]
    pub paper_scale: bool,
    /// Master seed
    #[arg(long)]
    pub seed: Option<u64>,
    /// Model pipeline; also selects that model's default classifier settings
    #[arg(long, value_enum)]
    pub model: Option<ModelKind>,
    /// Directory that receives the new run directory
    #[arg(long, value_name = "DIR")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate the datasets of an experiment into a new run directory
    Generate {
        /// Preset used when no config file is given
        #[arg(long, value_enum, default_value = "table3")]
        table: Preset,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Compute feature matrices from a run directory's datasets
    Featurize {
        #[arg(long, value_name = "DIR")]
        run_dir: PathBuf,
        /// Switch the run to another model pipeline before featurizing
        #[arg(long, value_enum)]
        model: Option<ModelKind>,
    },
    /// Fit the classifier on the training split's features
    Train {
        #[arg(long, value_name = "DIR")]
        run_dir: PathBuf,
    },
    /// Score a trained model and write the report
    Evaluate {
        #[arg(long, value_name = "DIR")]
        run_dir: PathBuf,
        /// Model to score instead of the run's own (report is printed only)
        #[arg(long, value_name = "FILE")]
        model_file: Option<PathBuf>,
        /// Feature CSV files to score instead of the run's sets (report is printed only)
        #[arg(long = "features", value_name = "FILE")]
        features: Vec<PathBuf>,
    },
    /// Run a whole experiment end to end
    Reproduce {
        #[arg(value_enum)]
        table: Preset,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Write figure data (two-column .dat files) into a new run directory
    Plot {
        /// Preset used when no config file is given
        #[arg(long, value_enum, default_value = "table3")]
        table: Preset,
        #[command(flatten)]
        overrides: Overrides,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Pipeline(#[from] PipelineError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Config(_) => 2,
            CliError::Pipeline(PipelineError::InvalidConfig(_)) => 2,
            CliError::Pipeline(_) => 1,
        }
    }
}

/// Parses arguments, runs the command and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(cli: Cli) -> Result<(), CliError> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::Usage("--threads must be at least 1".into()));
        }
        // A pool may already exist when called from tests; keep it.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match cli.command {
        Command::Generate { table, overrides } => cmd_generate(table, &overrides),
        Command::Featurize { run_dir, model } => cmd_featurize(&run_dir, model),
        Command::Train { run_dir } => cmd_train(&run_dir),
        Command::Evaluate { run_dir, model_file, features } => cmd_evaluate(&run_dir, model_file, &features),
        Command::Reproduce { table, overrides } => cmd_reproduce(table, &overrides),
        Command::Plot { table, overrides } => cmd_plot(table, &overrides),
    }
}

fn switch_model(config: &mut ExperimentConfig, model: ModelKind) {
    config.model = model;
    config.lr = model.default_lr();
}

pub fn resolve_config(table: Preset, overrides: &Overrides) -> Result<ExperimentConfig, CliError> {
    let scale = if overrides.paper_scale { Some(Scale::Paper) } else { overrides.scale };
    let mut config = match &overrides.config {
        Some(path) => config::load_config(path)?,
        None => config::preset(table, scale.unwrap_or(Scale::Desk), DEFAULT_SEED),
    };
    if let Some(seed) = overrides.seed {
        config.master_seed = seed;
    }
    if let (Some(scale), Some(_)) = (scale, &overrides.config) {
        let counts = scale.counts();
        config.counts.train_per_class = counts.train_per_class;
        config.counts.test_per_class = counts.test_per_class;
    }
    if let Some(model) = overrides.model {
        switch_model(&mut config, model);
    }
    config.validate().map_err(CliError::Usage)?;
    Ok(config)
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> PipelineError + '_ {
    move |source| PipelineError::Io { path: path.to_path_buf(), source }
}

/// Creates `<out_dir>/<YYYYmmdd-HHMMSS>-seed<seed>`, adding `-2`, `-3`, ...
/// when that name is taken.
pub fn create_run_dir(out_dir: &Path, seed: u64) -> Result<PathBuf, PipelineError> {
    fs::create_dir_all(out_dir).map_err(io_err(out_dir))?;
    let stem = format!("{}-seed{seed}", chrono::Local::now().format("%Y%m%d-%H%M%S"));
    for n in 1.. {
        let name = if n == 1 { stem.clone() } else { format!("{stem}-{n}") };
        let path = out_dir.join(name);
        match fs::create_dir(&path) {
            Ok(()) => return Ok(path),
            Err(e) if e.kind() == std::io::ErrorKind::AlreadyExists => continue,
            Err(source) => return Err(PipelineError::Io { path, source }),
        }
    }
    unreachable!("run directory suffixes exhausted")
}

/// Writes to stdout, ignoring a closed pipe (e.g. `| head`).
fn emit(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn write_text(path: &Path, text: &str) -> Result<(), PipelineError> {
    fs::write(path, text).map_err(io_err(path))
}

fn load_run_config(run_dir: &Path) -> Result<ExperimentConfig, CliError> {
    let path = run_dir.join(CONFIG_FILE);
    if !path.is_file() {
        return Err(CliError::Usage(format!("{} is not a run directory (no {CONFIG_FILE})", run_dir.display())));
    }
    Ok(config::load_config(&path)?)
}

fn save_config(run_dir: &Path, config: &ExperimentConfig) -> Result<(), PipelineError> {
    write_text(&run_dir.join(CONFIG_FILE), &config::to_toml(config))
}

/// Merges stage timings into the run's timings file.
fn record_timings(run_dir: &Path, new: &[StageTiming]) -> Result<(), PipelineError> {
    let path = run_dir.join(TIMINGS_FILE);
    let mut all: Vec<StageTiming> = if path.is_file() { persist::read_json(&path)? } else { Vec::new() };
    for t in new {
        all.retain(|old| old.stage != t.stage);
        all.push(t.clone());
    }
    persist::write_json(&path, &all)
}

fn timed<T>(stage: &str, f: impl FnOnce() -> Result<T, PipelineError>) -> Result<(T, StageTiming), PipelineError> {
    let start = Instant::now();
    let out = f()?;
    Ok((out, StageTiming { stage: stage.into(), seconds: start.elapsed().as_secs_f64() }))
}

fn features_dir(run_dir: &Path) -> PathBuf {
    run_dir.join("features")
}

fn save_datasets(run_dir: &Path, data: &GeneratedData) -> Result<(), PipelineError> {
    for ds in std::iter::once(&data.train).chain(&data.tests) {
        persist::save_dataset(ds, &dataset_dir(run_dir, &ds.recipe.name))?;
    }
    Ok(())
}

fn save_feature_sets(run_dir: &Path, features: &FeatureSets) -> Result<(), PipelineError> {
    let dir = features_dir(run_dir);
    fs::create_dir_all(&dir).map_err(io_err(&dir))?;
    persist::write_json(&dir.join(FEATURIZER_FILE), &features.featurizer)?;
    for set in &features.sets {
        persist::save_features(&set.matrix, &dir.join(format!("{}.csv", set.key)))?;
    }
    Ok(())
}

fn write_report(run_dir: &Path, report: &ExperimentReport, timings: &[StageTiming]) -> Result<String, PipelineError> {
    persist::write_json(&run_dir.join(REPORT_JSON), report)?;
    let text = render_text(report, timings);
    write_text(&run_dir.join(REPORT_TEXT), &text)?;
    Ok(text)
}

fn cmd_generate(table: Preset, overrides: &Overrides) -> Result<(), CliError> {
    let config = resolve_config(table, overrides)?;
    let run_dir = create_run_dir(&overrides.out_dir, config.master_seed)?;
    save_config(&run_dir, &config)?;
    let (data, t) = timed("generate", || experiment::generate_data(&config))?;
    save_datasets(&run_dir, &data)?;
    record_timings(&run_dir, &[t])?;
    emit(&format!("{}\n", run_dir.display()));
    Ok(())
}

fn load_generated(run_dir: &Path, config: &ExperimentConfig) -> Result<GeneratedData, PipelineError> {
    let load = |recipe: &crate::pipeline::recipe::DatasetRecipe, per_class: usize| {
        let dir = dataset_dir(run_dir, &recipe.name);
        let ds = persist::load_dataset(&dir)?;
        let expected = per_class * recipe.classes().len();
        if ds.recipe != *recipe
            || ds.master_seed != config.master_seed
            || ds.length != config.counts.length
            || ds.series.len() != expected
        {
            return Err(PipelineError::Format {
                path: dir.join(persist::MANIFEST_FILE),
                line: 0,
                message: "dataset does not match the run configuration".into(),
            });
        }
        Ok(ds)
    };
    let train = load(&config.train_recipe, config.counts.train_per_class)?;
    let tests = config
        .test_recipes
        .iter()
        .map(|r| load(r, config.counts.test_per_class))
        .collect::<Result<_, _>>()?;
    Ok(GeneratedData { train, tests })
}

fn cmd_featurize(run_dir: &Path, model: Option<ModelKind>) -> Result<(), CliError> {
    let mut config = load_run_config(run_dir)?;
    if let Some(model) = model {
        switch_model(&mut config, model);
        config.validate().map_err(CliError::Usage)?;
        save_config(run_dir, &config)?;
    }
    let data = load_generated(run_dir, &config)?;
    let (features, t) = timed("featurize", || experiment::featurize(&config, &data))?;
    save_feature_sets(run_dir, &features)?;
    record_timings(run_dir, &[t])?;
    emit(&format!("{}\n", features_dir(run_dir).display()));
    Ok(())
}

fn cmd_train(run_dir: &Path) -> Result<(), CliError> {
    let config = load_run_config(run_dir)?;
    let train = persist::load_features(&features_dir(run_dir).join("train.csv"))?;
    let (model, t) = timed("train", || experiment::train(&config, &train))?;
    persist::write_json(&run_dir.join(MODEL_FILE), &model)?;
    record_timings(run_dir, &[t])?;
    emit(&format!("{}\n", run_dir.join(MODEL_FILE).display()));
    Ok(())
}

fn cmd_evaluate(run_dir: &Path, model_file: Option<PathBuf>, features: &[PathBuf]) -> Result<(), CliError> {
    let config = load_run_config(run_dir)?;
    let model_path = model_file.clone().unwrap_or_else(|| run_dir.join(MODEL_FILE));
    let model: LrModel = persist::read_json(&model_path)?;
    let sets = if features.is_empty() {
        let featurizer: Featurizer = persist::read_json(&features_dir(run_dir).join(FEATURIZER_FILE))?;
        if featurizer.model != config.model {
            return Err(CliError::Usage(format!(
                "features were computed for {} but the run is configured for {}",
                featurizer.model.name(),
                config.model.name()
            )));
        }
        experiment::set_names(&config)
            .into_iter()
            .map(|(key, dataset)| {
                let matrix = persist::load_features(&features_dir(run_dir).join(format!("{key}.csv")))?;
                Ok(NamedMatrix { key, dataset, matrix })
            })
            .collect::<Result<Vec<_>, PipelineError>>()?
    } else {
        features
            .iter()
            .map(|path| {
                let matrix = persist::load_features(path)?;
                let name = path.display().to_string();
                Ok(NamedMatrix { key: name.clone(), dataset: name, matrix })
            })
            .collect::<Result<Vec<_>, PipelineError>>()?
    };
    let (rows, t) = timed("evaluate", || experiment::evaluate_sets(&model, &sets))?;
    let report = ExperimentReport::new(&config, &model, rows);
    if model_file.is_none() && features.is_empty() {
        record_timings(run_dir, &[t])?;
        emit(&write_report(run_dir, &report, &[])?);
    } else {
        emit(&render_text(&report, &[]));
    }
    Ok(())
}

fn cmd_reproduce(table: Preset, overrides: &Overrides) -> Result<(), CliError> {
    let config = resolve_config(table, overrides)?;
    let run_dir = create_run_dir(&overrides.out_dir, config.master_seed)?;
    save_config(&run_dir, &config)?;
    let run = experiment::run_experiment(&config)?;
    save_datasets(&run_dir, &run.data)?;
    save_feature_sets(&run_dir, &run.features)?;
    persist::write_json(&run_dir.join(MODEL_FILE), &run.model)?;
    persist::write_json(&run_dir.join(TIMINGS_FILE), &run.timings)?;
    emit(&write_report(&run_dir, &run.report, &run.timings)?);
    emit(&format!("{}\n", run_dir.display()));
    Ok(())
}

fn cmd_plot(table: Preset, overrides: &Overrides) -> Result<(), CliError> {
    let config = resolve_config(table, overrides)?;
    let run_dir = create_run_dir(&overrides.out_dir, config.master_seed)?;
    save_config(&run_dir, &config)?;
    let panels = plot::figure_panels(&config)?;
    for path in plot::write_panels(&panels, &run_dir.join("plots"))? {
        emit(&format!("{}\n", path.display()));
    }
    Ok(())
}
