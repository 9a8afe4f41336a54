//! Dataset recipes: how per-instance process parameters are drawn.
//!
//! Noise laws are written `N(mean, variance)`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::data::Label;
use crate::seriesgen::{ProcessSpec, Term};

/// Half-open uniform range `[lo, hi)`; `lo == hi` always yields `lo`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Range {
    pub lo: f64,
    pub hi: f64,
}

impl Range {
    pub fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }

    fn draw(&self, rng: &mut impl Rng) -> f64 {
        if self.lo == self.hi {
            self.lo
        } else {
            rng.random_range(self.lo..self.hi)
        }
    }

    fn check(&self, what: &str) -> Result<(), String> {
        if !(self.lo.is_finite() && self.hi.is_finite() && self.lo <= self.hi) {
            return Err(format!("{what} range [{}, {}) is empty or non-finite", self.lo, self.hi));
        }
        Ok(())
    }
}

/// Inclusive lag range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LagRange {
    pub min: usize,
    pub max: usize,
}

impl LagRange {
    pub fn new(min: usize, max: usize) -> Self {
        Self { min, max }
    }

    fn draw(&self, rng: &mut impl Rng) -> usize {
        rng.random_range(self.min..=self.max)
    }

    fn check(&self, what: &str, min_allowed: usize, length: usize) -> Result<(), String> {
        if self.min < min_allowed || self.min > self.max || self.max > length {
            return Err(format!(
                "{what} lag range {}..={} must satisfy {min_allowed} <= min <= max <= {length}",
                self.min, self.max
            ));
        }
        Ok(())
    }
}

/// Causal generator family with its parameter ranges. Each instance draws
/// one AR lag (and one MA lag) and one coefficient per lag.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum CausalFamily {
    Ar {
        lag: LagRange,
        coeff: Range,
        noise_variance: f64,
    },
    Arma {
        ar_lag: LagRange,
        ma_lag: LagRange,
        coeff: Range,
        noise_variance: f64,
    },
    Arfima {
        ar_lag: LagRange,
        ma_lag: LagRange,
        coeff: Range,
        d: Range,
        noise_variance: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "law", rename_all = "snake_case", deny_unknown_fields)]
pub enum NoiseLaw {
    Normal { mean: f64, variance: f64 },
    Uniform { lo: f64, hi: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetRecipe {
    pub name: String,
    pub title: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub causal: Option<CausalFamily>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub non_causal: Option<NoiseLaw>,
}

/// Variance of the innovations in every causal recipe.
pub const CAUSAL_NOISE_VARIANCE: f64 = 0.01;
const COEFF: Range = Range { lo: 0.8, hi: 0.9 };
const SHORT_LAGS: LagRange = LagRange { min: 1, max: 20 };

fn sparse_ar(lag: LagRange) -> CausalFamily {
    CausalFamily::Ar { lag, coeff: COEFF, noise_variance: CAUSAL_NOISE_VARIANCE }
}

fn normal_noise(variance: f64) -> NoiseLaw {
    NoiseLaw::Normal { mean: 0.0, variance }
}

impl DatasetRecipe {
    /// Sparse AR(k), k in 1..=20, against `N(0, 0.01)` noise.
    pub fn ar_train() -> Self {
        Self {
            name: "AR-train".into(),
            title: "AR".into(),
            causal: Some(sparse_ar(SHORT_LAGS)),
            non_causal: Some(normal_noise(0.01)),
        }
    }

    pub fn shift_one() -> Self {
        Self {
            name: "shift-I".into(),
            title: "Distribution shift testing set I".into(),
            causal: Some(sparse_ar(SHORT_LAGS)),
            non_causal: Some(normal_noise(0.09)),
        }
    }

    pub fn shift_two() -> Self {
        Self {
            name: "shift-II".into(),
            title: "Distribution shift testing set II".into(),
            causal: Some(sparse_ar(SHORT_LAGS)),
            non_causal: Some(NoiseLaw::Uniform { lo: -0.6, hi: 0.6 }),
        }
    }

    pub fn ar100() -> Self {
        Self {
            name: "AR100".into(),
            title: "AR(100) testing set".into(),
            causal: Some(sparse_ar(LagRange::new(100, 100))),
            non_causal: None,
        }
    }

    pub fn arma() -> Self {
        Self {
            name: "ARMA".into(),
            title: "ARMA testing set".into(),
            causal: Some(CausalFamily::Arma {
                ar_lag: SHORT_LAGS,
                ma_lag: SHORT_LAGS,
                coeff: COEFF,
                noise_variance: CAUSAL_NOISE_VARIANCE,
            }),
            non_causal: None,
        }
    }

    pub fn arfima() -> Self {
        Self {
            name: "ARFIMA".into(),
            title: "ARFIMA testing set".into(),
            causal: Some(CausalFamily::Arfima {
                ar_lag: SHORT_LAGS,
                ma_lag: SHORT_LAGS,
                coeff: COEFF,
                d: Range::new(-0.5, 0.5),
                noise_variance: CAUSAL_NOISE_VARIANCE,
            }),
            non_causal: None,
        }
    }

    pub fn classes(&self) -> Vec<Label> {
        let mut out = Vec::new();
        if self.causal.is_some() {
            out.push(Label::Causal);
        }
        if self.non_causal.is_some() {
            out.push(Label::NonCausal);
        }
        out
    }

    pub fn validate(&self, length: usize) -> Result<(), String> {
        if self.causal.is_none() && self.non_causal.is_none() {
            return Err("recipe has neither a causal nor a non-causal generator".into());
        }
        let positive = |v: f64| -> Result<(), String> {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(format!("noise variance {v} must be positive"))
            }
        };
        let coeff_ok = |r: &Range| -> Result<(), String> {
            r.check("coefficient")?;
            if r.lo <= -1.0 || r.hi >= 1.0 {
                return Err(format!("coefficient range [{}, {}) leaves the stationary region", r.lo, r.hi));
            }
            Ok(())
        };
        match &self.causal {
            Some(CausalFamily::Ar { lag, coeff, noise_variance }) => {
                lag.check("AR", 1, length)?;
                coeff_ok(coeff)?;
                positive(*noise_variance)?;
            }
            Some(CausalFamily::Arma { ar_lag, ma_lag, coeff, noise_variance }) => {
                ar_lag.check("AR", 1, length)?;
                ma_lag.check("MA", 1, length)?;
                coeff_ok(coeff)?;
                positive(*noise_variance)?;
            }
            Some(CausalFamily::Arfima { ar_lag, ma_lag, coeff, d, noise_variance }) => {
                ar_lag.check("AR", 1, length)?;
                ma_lag.check("MA", 1, length)?;
                coeff_ok(coeff)?;
                d.check("d")?;
                if d.lo <= -1.0 || d.hi >= 1.0 {
                    return Err(format!("d range [{}, {}) outside (-1, 1)", d.lo, d.hi));
                }
                positive(*noise_variance)?;
            }
            None => {}
        }
        match self.non_causal {
            Some(NoiseLaw::Normal { mean, variance }) => {
                if !mean.is_finite() {
                    return Err("noise mean must be finite".into());
                }
                positive(variance)?;
            }
            Some(NoiseLaw::Uniform { lo, hi }) if !(lo.is_finite() && hi.is_finite() && lo < hi) => {
                return Err(format!("uniform bounds [{lo}, {hi}) are empty"));
            }
            Some(NoiseLaw::Uniform { .. }) => {}
            None => {}
        }
        Ok(())
    }

    /// Draws one instance's process parameters.
    pub fn draw_spec(&self, class: Label, length: usize, burn_in: usize, rng: &mut impl Rng) -> Option<ProcessSpec> {
        let mut spec = match class {
            Label::Causal => match self.causal.as_ref()? {
                CausalFamily::Ar { lag, coeff, noise_variance } => {
                    ProcessSpec::sparse_ar(length, lag.draw(rng), coeff.draw(rng), *noise_variance)
                }
                CausalFamily::Arma { ar_lag, ma_lag, coeff, noise_variance } => {
                    let ar = Term::new(ar_lag.draw(rng), coeff.draw(rng));
                    let ma = Term::new(ma_lag.draw(rng), coeff.draw(rng));
                    ProcessSpec::sparse_arma(length, ar, ma, *noise_variance)
                }
                CausalFamily::Arfima { ar_lag, ma_lag, coeff, d, noise_variance } => {
                    let ar = Term::new(ar_lag.draw(rng), coeff.draw(rng));
                    let ma = Term::new(ma_lag.draw(rng), coeff.draw(rng));
                    ProcessSpec::sparse_arfima(length, ar, ma, d.draw(rng), *noise_variance)
                }
            },
            Label::NonCausal => match self.non_causal? {
                NoiseLaw::Normal { mean, variance } => ProcessSpec::normal_noise(length, mean, variance),
                NoiseLaw::Uniform { lo, hi } => ProcessSpec::uniform_noise(length, lo, hi),
            },
        };
        spec.burn_in = burn_in;
        Some(spec)
    }
}
