//! Model pipelines turning raw series into classifier inputs.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chaosfex::{ChaosError, GlsNeuron, GlsParams};
use crate::classify::LrHyper;
use crate::data::FeatureMatrix;
use crate::spectral::{self, MinMaxScaler, SpectralError, DEFAULT_HEADROOM};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    /// Logistic regression on the raw values.
    RawValues,
    /// Logistic regression on the amplitude spectrum.
    FourierAmplitude,
    /// Logistic regression on TTSS features of the scaled spectrum.
    FourierChaosfex,
}

impl ModelKind {
    /// Classifier settings used with this model unless configured otherwise.
    pub fn default_lr(self) -> LrHyper {
        match self {
            ModelKind::FourierChaosfex => LrHyper::chaosfex(),
            _ => LrHyper::library_default(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ModelKind::RawValues => "raw-values",
            ModelKind::FourierAmplitude => "fourier-amplitude",
            ModelKind::FourierChaosfex => "fourier-chaosfex",
        }
    }
}

/// How spectra are mapped into the neuron's `[0, 1)` stimulus range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scaling {
    /// Each spectrum scaled by its own minimum and maximum.
    PerInstance,
    /// Each frequency bin scaled by its range over the training split.
    PerFeature,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FeatureOptions {
    /// Subtract the series mean before the transform.
    pub demean: bool,
    /// Keep the zero-frequency bin.
    pub keep_dc: bool,
    pub scaling: Scaling,
    pub headroom: f64,
}

impl Default for FeatureOptions {
    fn default() -> Self {
        Self { demean: false, keep_dc: true, scaling: Scaling::PerInstance, headroom: DEFAULT_HEADROOM }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FeatureError {
    #[error("spectrum: {0}")]
    Spectral(#[from] SpectralError),
    #[error("chaosfex: {0}")]
    Chaos(#[from] ChaosError),
    #[error("featurizer expects series of length {expected}, got {found}")]
    LengthMismatch { expected: usize, found: usize },
}

/// Amplitude spectrum of every row, optionally demeaned and without DC.
pub fn spectrum_matrix(raw: &FeatureMatrix, options: &FeatureOptions) -> Result<FeatureMatrix, SpectralError> {
    let rows = (0..raw.n_rows())
        .into_par_iter()
        .map(|i| {
            let row = raw.row(i);
            let spectrum = if options.demean {
                spectral::amplitude_spectrum(&spectral::demean(row))?
            } else {
                spectral::amplitude_spectrum(row)?
            };
            let mut amps = spectrum.amplitudes;
            if !options.keep_dc {
                amps.remove(0);
            }
            Ok(amps)
        })
        .collect::<Result<Vec<_>, SpectralError>>()?;
    Ok(FeatureMatrix::from_rows(rows, raw.labels().to_vec()).expect("spectra share one length"))
}

/// A pipeline with any train-fitted state, serialisable so later stages
/// can reuse it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Featurizer {
    pub model: ModelKind,
    pub options: FeatureOptions,
    pub gls: GlsParams,
    pub series_length: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scaler: Option<MinMaxScaler>,
}

impl Featurizer {
    /// Fits the pipeline on the raw training split. Only per-feature
    /// scaling has state to learn.
    pub fn fit(
        model: ModelKind,
        options: FeatureOptions,
        gls: GlsParams,
        train_raw: &FeatureMatrix,
    ) -> Result<Self, FeatureError> {
        if model == ModelKind::FourierChaosfex {
            gls.validate()?;
        }
        let scaler = if model == ModelKind::FourierChaosfex && options.scaling == Scaling::PerFeature {
            let spectra = spectrum_matrix(train_raw, &options)?;
            Some(spectral::fit_scaler(&spectra, options.headroom)?)
        } else {
            None
        };
        Ok(Self { model, options, gls, series_length: train_raw.n_cols(), scaler })
    }

    pub fn transform(&self, raw: &FeatureMatrix) -> Result<FeatureMatrix, FeatureError> {
        if raw.n_cols() != self.series_length {
            return Err(FeatureError::LengthMismatch { expected: self.series_length, found: raw.n_cols() });
        }
        match self.model {
            ModelKind::RawValues => Ok(raw.clone()),
            ModelKind::FourierAmplitude => Ok(spectrum_matrix(raw, &self.options)?),
            ModelKind::FourierChaosfex => {
                let spectra = spectrum_matrix(raw, &self.options)?;
                let scaled = self.scale(&spectra)?;
                let neuron = GlsNeuron::new(self.gls)?;
                Ok(neuron.extract_ttss(&scaled)?)
            }
        }
    }

    /// The neuron stimuli for a matrix of spectra.
    pub fn scale(&self, spectra: &FeatureMatrix) -> Result<FeatureMatrix, SpectralError> {
        match &self.scaler {
            Some(scaler) => spectral::apply_scaler(scaler, spectra),
            None => spectral::scale_per_instance(spectra, self.options.headroom),
        }
    }
}
