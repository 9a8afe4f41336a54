use std::collections::BTreeSet;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::dataset::{build_dataset, child_seed, Dataset};
use super::features::{FeatureOptions, Featurizer, ModelKind};
use super::recipe::DatasetRecipe;
use super::PipelineError;
use crate::chaosfex::GlsParams;
use crate::classify::{self, ClassReport, LrHyper, LrModel, TrainingFingerprint};
use crate::data::{FeatureMatrix, Label};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Counts {
    /// Instances per class in the training recipe, before the split.
    pub train_per_class: usize,
    /// Instances per present class in every test recipe.
    pub test_per_class: usize,
    pub length: usize,
    #[serde(default)]
    pub burn_in: usize,
}

fn default_split() -> f64 {
    0.7
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub name: String,
    pub master_seed: u64,
    pub model: ModelKind,
    /// Fraction of the training recipe used for fitting.
    #[serde(default = "default_split")]
    pub split_fraction: f64,
    pub counts: Counts,
    #[serde(default)]
    pub features: FeatureOptions,
    #[serde(default)]
    pub gls: GlsParams,
    pub lr: LrHyper,
    pub train_recipe: DatasetRecipe,
    #[serde(default)]
    pub test_recipes: Vec<DatasetRecipe>,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<(), String> {
        if !(self.split_fraction > 0.0 && self.split_fraction < 1.0) {
            return Err(format!("split_fraction {} must lie in (0, 1)", self.split_fraction));
        }
        let c = &self.counts;
        if c.length < 2 {
            return Err(format!("series length {} is below 2", c.length));
        }
        let train_rows = (c.train_per_class as f64 * self.split_fraction).round() as usize;
        if train_rows == 0 || train_rows >= c.train_per_class {
            return Err(format!(
                "train_per_class {} leaves an empty split at fraction {}",
                c.train_per_class, self.split_fraction
            ));
        }
        if c.test_per_class == 0 && !self.test_recipes.is_empty() {
            return Err("test_per_class must be positive when test recipes are listed".into());
        }
        self.train_recipe
            .validate(c.length)
            .map_err(|m| format!("train recipe {}: {m}", self.train_recipe.name))?;
        if self.train_recipe.classes().len() != 2 {
            return Err(format!("train recipe {} must define both classes", self.train_recipe.name));
        }
        let mut names = BTreeSet::from([self.train_recipe.name.as_str(), "train", "held-out"]);
        for r in &self.test_recipes {
            r.validate(c.length).map_err(|m| format!("test recipe {}: {m}", r.name))?;
            if !names.insert(r.name.as_str()) {
                return Err(format!("recipe name {} is used twice", r.name));
            }
        }
        for r in std::iter::once(&self.train_recipe).chain(&self.test_recipes) {
            if r.name.is_empty() || r.name.contains(['/', '\\']) || r.name.starts_with('.') {
                return Err(format!("recipe name {:?} is not usable as a directory name", r.name));
            }
        }
        self.lr.validate().map_err(|e| e.to_string())?;
        if self.model == ModelKind::FourierChaosfex {
            self.gls.validate().map_err(|e| e.to_string())?;
            let h = self.features.headroom;
            if !(h > 0.0 && h < 0.1) {
                return Err(format!("headroom {h} outside (0, 0.1)"));
            }
        }
        Ok(())
    }

    /// Short digest of the full configuration, recorded with trained models.
    pub fn spec_hash(&self) -> String {
        let json = serde_json::to_string(self).expect("config serialises");
        Sha256::digest(json.as_bytes()).iter().take(8).map(|b| format!("{b:02x}")).collect()
    }

    pub fn fingerprint(&self) -> TrainingFingerprint {
        TrainingFingerprint { master_seed: self.master_seed, spec_hash: self.spec_hash() }
    }
}

/// Splits indices class by class; each class contributes
/// `round(fraction * n_class)` training rows. Both outputs are sorted.
pub fn stratified_split(labels: &[Label], fraction: f64, seed: u64) -> (Vec<usize>, Vec<usize>) {
    let mut train = Vec::new();
    let mut test = Vec::new();
    for class in [Label::Causal, Label::NonCausal] {
        let mut idx: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == class).collect();
        let mut rng = ChaCha12Rng::seed_from_u64(child_seed(seed, "split", class, 0));
        idx.shuffle(&mut rng);
        let k = (idx.len() as f64 * fraction).round() as usize;
        train.extend_from_slice(&idx[..k]);
        test.extend_from_slice(&idx[k..]);
    }
    train.sort_unstable();
    test.sort_unstable();
    (train, test)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratedData {
    pub train: Dataset,
    pub tests: Vec<Dataset>,
}

pub fn generate_data(config: &ExperimentConfig) -> Result<GeneratedData, PipelineError> {
    config.validate().map_err(PipelineError::InvalidConfig)?;
    let c = &config.counts;
    let train = build_dataset(&config.train_recipe, c.train_per_class, c.length, c.burn_in, config.master_seed)?;
    let tests = config
        .test_recipes
        .iter()
        .map(|r| build_dataset(r, c.test_per_class, c.length, c.burn_in, config.master_seed))
        .collect::<Result<_, _>>()?;
    Ok(GeneratedData { train, tests })
}

/// One evaluated feature matrix. `key` names its file, `dataset` its report row.
#[derive(Debug, Clone, PartialEq)]
pub struct NamedMatrix {
    pub key: String,
    pub dataset: String,
    pub matrix: FeatureMatrix,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureSets {
    pub featurizer: Featurizer,
    /// Train split, held-out split, then test recipes in config order.
    pub sets: Vec<NamedMatrix>,
}

impl FeatureSets {
    pub fn train(&self) -> &FeatureMatrix {
        &self.sets[0].matrix
    }
}

/// Row names, in the order `featurize` produces them.
pub fn set_names(config: &ExperimentConfig) -> Vec<(String, String)> {
    let title = &config.train_recipe.title;
    let mut out = vec![
        ("train".to_string(), format!("{title} (train split)")),
        ("held-out".to_string(), format!("{title} (held-out split)")),
    ];
    out.extend(config.test_recipes.iter().map(|r| (r.name.clone(), r.title.clone())));
    out
}

pub fn featurize(config: &ExperimentConfig, data: &GeneratedData) -> Result<FeatureSets, PipelineError> {
    let raw = data.train.raw_matrix();
    let (train_idx, test_idx) = stratified_split(raw.labels(), config.split_fraction, config.master_seed);
    let train_raw = raw.select_rows(&train_idx);
    let held_raw = raw.select_rows(&test_idx);
    let names = set_names(config);
    let feature_err = |dataset: &str| {
        let dataset = dataset.to_string();
        move |source| PipelineError::Feature { dataset, source }
    };
    let featurizer = Featurizer::fit(config.model, config.features, config.gls, &train_raw)
        .map_err(feature_err(&names[0].1))?;
    let mut raws = vec![train_raw, held_raw];
    raws.extend(data.tests.iter().map(Dataset::raw_matrix));
    let sets = raws
        .iter()
        .zip(names)
        .map(|(raw, (key, dataset))| {
            let matrix = featurizer.transform(raw).map_err(feature_err(&dataset))?;
            Ok(NamedMatrix { key, dataset, matrix })
        })
        .collect::<Result<_, PipelineError>>()?;
    Ok(FeatureSets { featurizer, sets })
}

pub fn train(config: &ExperimentConfig, features: &FeatureMatrix) -> Result<LrModel, PipelineError> {
    let mut model = classify::train_lr(features, &config.lr)
        .map_err(|source| PipelineError::Classify { dataset: "train split".into(), source })?;
    model.fingerprint = Some(config.fingerprint());
    Ok(model)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub dataset: String,
    pub report: ClassReport,
}

pub fn evaluate_sets(model: &LrModel, sets: &[NamedMatrix]) -> Result<Vec<ReportRow>, PipelineError> {
    sets.iter()
        .map(|set| {
            let classify_err = |source| PipelineError::Classify { dataset: set.dataset.clone(), source };
            let pred = classify::predict(model, &set.matrix).map_err(classify_err)?;
            let report = classify::evaluate(&pred.labels, set.matrix.labels()).map_err(classify_err)?;
            Ok(ReportRow { dataset: set.dataset.clone(), report })
        })
        .collect()
}

/// Metrics of a finished run. Contains nothing time-dependent, so identical
/// inputs serialise to identical bytes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub experiment: String,
    pub model: ModelKind,
    pub master_seed: u64,
    pub spec_hash: String,
    pub feature_count: usize,
    pub converged: bool,
    pub iterations: usize,
    pub rows: Vec<ReportRow>,
}

impl ExperimentReport {
    pub fn new(config: &ExperimentConfig, model: &LrModel, rows: Vec<ReportRow>) -> Self {
        Self {
            experiment: config.name.clone(),
            model: config.model,
            master_seed: config.master_seed,
            spec_hash: config.spec_hash(),
            feature_count: model.weights.len(),
            converged: model.converged,
            iterations: model.iterations,
            rows,
        }
    }

    pub fn row(&self, dataset: &str) -> Option<&ClassReport> {
        self.rows.iter().find(|r| r.dataset == dataset).map(|r| &r.report)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageTiming {
    pub stage: String,
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentRun {
    pub data: GeneratedData,
    pub features: FeatureSets,
    pub model: LrModel,
    pub report: ExperimentReport,
    pub timings: Vec<StageTiming>,
}

pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentRun, PipelineError> {
    let mut timings = Vec::new();
    let mut clock = Instant::now();
    let mut lap = |stage: &str, timings: &mut Vec<StageTiming>| {
        timings.push(StageTiming { stage: stage.into(), seconds: clock.elapsed().as_secs_f64() });
        clock = Instant::now();
    };
    let data = generate_data(config)?;
    lap("generate", &mut timings);
    let features = featurize(config, &data)?;
    lap("featurize", &mut timings);
    let model = train(config, features.train())?;
    lap("train", &mut timings);
    let rows = evaluate_sets(&model, &features.sets)?;
    lap("evaluate", &mut timings);
    let report = ExperimentReport::new(config, &model, rows);
    Ok(ExperimentRun { data, features, model, report, timings })
}
