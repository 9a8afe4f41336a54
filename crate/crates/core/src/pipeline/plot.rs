//! Two-column text data for amplitude-spectrum and TTSS-curve figures.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;

use super::dataset::child_seed;
use super::experiment::{featurize, generate_data, ExperimentConfig};
use super::features::{spectrum_matrix, Featurizer, ModelKind, Scaling};
use super::recipe::{CausalFamily, DatasetRecipe, LagRange};
use super::PipelineError;
use crate::chaosfex::GlsNeuron;
use crate::data::{FeatureMatrix, Label};
use crate::seriesgen;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PanelKind {
    Spectrum,
    Ttss,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Panel {
    pub name: String,
    pub kind: PanelKind,
    pub values: Vec<f64>,
}

/// Writes `index value` lines. An empty curve is an error rather than an
/// empty file.
pub fn emit_plot_data(values: &[f64], path: &Path) -> Result<(), PipelineError> {
    if values.is_empty() {
        return Err(PipelineError::EmptyPlot(path.to_path_buf()));
    }
    let mut out = String::with_capacity(values.len() * 28);
    for (i, v) in values.iter().enumerate() {
        writeln!(out, "{i} {v}").unwrap();
    }
    fs::write(path, out).map_err(|source| PipelineError::Io { path: path.to_path_buf(), source })
}

fn ar15() -> DatasetRecipe {
    let mut r = DatasetRecipe::ar_train();
    r.name = "AR15".into();
    if let Some(CausalFamily::Ar { lag, .. }) = r.causal.as_mut() {
        *lag = LagRange::new(15, 15);
    }
    r
}

fn realization(
    recipe: &DatasetRecipe,
    class: Label,
    config: &ExperimentConfig,
    panel: usize,
) -> Result<Vec<f64>, PipelineError> {
    let mut rng = ChaCha12Rng::seed_from_u64(child_seed(config.master_seed, "figure", class, panel));
    let spec = recipe
        .draw_spec(class, config.counts.length, config.counts.burn_in, &mut rng)
        .expect("panel recipes define the requested class");
    seriesgen::generate(&spec, rng.random())
        .map(|s| s.values)
        .map_err(|source| PipelineError::Generate { recipe: recipe.name.clone(), source })
}

/// Every figure panel for a configuration: spectra of one AR(15) and two
/// noise realizations, then TTSS curves of four causal and two non-causal
/// realizations. TTSS curves use the configured scaling; a per-feature
/// scaler is fitted on the configured training split first.
pub fn figure_panels(config: &ExperimentConfig) -> Result<Vec<Panel>, PipelineError> {
    let noise_uniform = DatasetRecipe::shift_two();
    let noise_normal = DatasetRecipe::ar_train();
    let sources = [
        ("fig1_ar15_spectrum", PanelKind::Spectrum, ar15(), Label::Causal),
        ("fig2a_normal_noise_spectrum", PanelKind::Spectrum, noise_normal.clone(), Label::NonCausal),
        ("fig2b_uniform_noise_spectrum", PanelKind::Spectrum, noise_uniform.clone(), Label::NonCausal),
        ("fig3a_ar15_ttss", PanelKind::Ttss, ar15(), Label::Causal),
        ("fig3b_ar100_ttss", PanelKind::Ttss, DatasetRecipe::ar100(), Label::Causal),
        ("fig3c_arma_ttss", PanelKind::Ttss, DatasetRecipe::arma(), Label::Causal),
        ("fig3d_arfima_ttss", PanelKind::Ttss, DatasetRecipe::arfima(), Label::Causal),
        ("fig4a_normal_noise_ttss", PanelKind::Ttss, noise_normal, Label::NonCausal),
        ("fig4b_uniform_noise_ttss", PanelKind::Ttss, noise_uniform, Label::NonCausal),
    ];
    let options = config.features;
    let featurizer = if options.scaling == Scaling::PerFeature {
        let mut chaos = config.clone();
        chaos.model = ModelKind::FourierChaosfex;
        chaos.test_recipes.clear();
        let data = generate_data(&chaos)?;
        featurize(&chaos, &data)?.featurizer
    } else {
        let empty = FeatureMatrix::from_flat(0, config.counts.length, Vec::new(), Vec::new())
            .expect("empty matrix");
        Featurizer::fit(ModelKind::FourierChaosfex, options, config.gls, &empty)
            .map_err(|source| PipelineError::Feature { dataset: "figures".into(), source })?
    };
    let neuron = GlsNeuron::new(config.gls)
        .map_err(|e| PipelineError::Feature { dataset: "figures".into(), source: e.into() })?;

    sources
        .iter()
        .enumerate()
        .map(|(i, (name, kind, recipe, class))| {
            let raw = FeatureMatrix::from_rows(vec![realization(recipe, *class, config, i)?], vec![*class])
                .expect("single row");
            let feature_err = |source| PipelineError::Feature { dataset: name.to_string(), source };
            let spectra = spectrum_matrix(&raw, &options).map_err(|e| feature_err(e.into()))?;
            let values = match kind {
                PanelKind::Spectrum => spectra.row(0).to_vec(),
                PanelKind::Ttss => {
                    let scaled = featurizer.scale(&spectra).map_err(|e| feature_err(e.into()))?;
                    let ttss = neuron.extract_ttss(&scaled).map_err(|e| feature_err(e.into()))?;
                    ttss.row(0).to_vec()
                }
            };
            Ok(Panel { name: name.to_string(), kind: *kind, values })
        })
        .collect()
}

/// Writes one `<name>.dat` per panel and returns the paths.
pub fn write_panels(panels: &[Panel], dir: &Path) -> Result<Vec<PathBuf>, PipelineError> {
    fs::create_dir_all(dir).map_err(|source| PipelineError::Io { path: dir.to_path_buf(), source })?;
    panels
        .iter()
        .map(|p| {
            let path = dir.join(format!("{}.dat", p.name));
            emit_plot_data(&p.values, &path)?;
            Ok(path)
        })
        .collect()
}
