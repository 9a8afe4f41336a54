//! Seeded simulation of causal (AR, ARMA, ARFIMA) and non-causal (i.i.d.)
//! time series.
//!
//! Every generator is a pure function of `(spec, seed)`: the same pair
//! always yields bit-identical values. Randomness comes from
//! [`ChaCha12Rng`], whose name is recorded in dataset manifests.

use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, Normal, Uniform};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::data::Label;

/// Name of the generator recorded alongside persisted datasets.
pub const GENERATOR_NAME: &str = "ChaCha12Rng";

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SeriesError {
    #[error("expected a {expected:?} spec, got {found:?}")]
    WrongKind { expected: &'static str, found: ProcessKind },
    #[error("series length must be at least 1")]
    EmptyLength,
    #[error("lag {lag} exceeds series length {length}")]
    LagTooLong { lag: usize, length: usize },
    #[error("autoregressive lags start at 1, got 0")]
    ZeroArLag,
    #[error("AR process needs at least one autoregressive term")]
    NoArTerms,
    #[error("ARMA process needs an instantaneous noise term (lag 0, coefficient 1)")]
    MissingInstantaneousNoise,
    #[error("single-lag AR coefficient {coeff} is non-stationary (|a| >= 1)")]
    NonStationary { coeff: f64 },
    #[error("noise variance must be positive and finite, got {0}")]
    BadVariance(f64),
    #[error("uniform bounds need lo < hi, got [{lo}, {hi})")]
    BadUniformBounds { lo: f64, hi: f64 },
    #[error("fractional order d = {0} outside (-1, 1)")]
    BadFractionalOrder(f64),
    #[error("weight count must be at least 1")]
    NoWeights,
    #[error("parameter {name} is not finite")]
    NonFiniteParameter { name: &'static str },
    #[error("simulation diverged: non-finite value at t = {t}")]
    Diverged { t: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProcessKind {
    Ar,
    Arma,
    Arfima,
    NoiseNormal,
    NoiseUniform,
}

impl ProcessKind {
    pub fn label(self) -> Label {
        match self {
            ProcessKind::Ar | ProcessKind::Arma | ProcessKind::Arfima => Label::Causal,
            ProcessKind::NoiseNormal | ProcessKind::NoiseUniform => Label::NonCausal,
        }
    }
}

/// One `(lag, coefficient)` pair of an AR or MA polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Term {
    pub lag: usize,
    pub coeff: f64,
}

impl Term {
    pub fn new(lag: usize, coeff: f64) -> Self {
        Self { lag, coeff }
    }
}

/// Parametric description of one stochastic process.
///
/// The Gaussian innovation is `Normal(noise_mean, noise_variance)`; the
/// uniform bounds only matter for [`ProcessKind::NoiseUniform`] and `d` only
/// for [`ProcessKind::Arfima`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProcessSpec {
    pub kind: ProcessKind,
    pub length: usize,
    #[serde(default)]
    pub c: f64,
    #[serde(default)]
    pub ar_terms: Vec<Term>,
    #[serde(default)]
    pub ma_terms: Vec<Term>,
    #[serde(default)]
    pub d: f64,
    #[serde(default)]
    pub noise_mean: f64,
    #[serde(default = "default_variance")]
    pub noise_variance: f64,
    #[serde(default)]
    pub uniform_lo: f64,
    #[serde(default)]
    pub uniform_hi: f64,
    /// Leading samples simulated and then discarded.
    #[serde(default)]
    pub burn_in: usize,
}

fn default_variance() -> f64 {
    1.0
}

impl ProcessSpec {
    fn base(kind: ProcessKind, length: usize) -> Self {
        Self {
            kind,
            length,
            c: 0.0,
            ar_terms: Vec::new(),
            ma_terms: Vec::new(),
            d: 0.0,
            noise_mean: 0.0,
            noise_variance: 1.0,
            uniform_lo: 0.0,
            uniform_hi: 0.0,
            burn_in: 0,
        }
    }

    /// Sparse AR: `x[t] = a * x[t - lag] + e[t]`.
    pub fn sparse_ar(length: usize, lag: usize, coeff: f64, noise_variance: f64) -> Self {
        Self {
            ar_terms: vec![Term::new(lag, coeff)],
            noise_variance,
            ..Self::base(ProcessKind::Ar, length)
        }
    }

    /// Sparse ARMA with one AR lag, one MA lag and the instantaneous noise term.
    pub fn sparse_arma(
        length: usize,
        ar: Term,
        ma: Term,
        noise_variance: f64,
    ) -> Self {
        Self {
            ar_terms: vec![ar],
            ma_terms: vec![Term::new(0, 1.0), ma],
            noise_variance,
            ..Self::base(ProcessKind::Arma, length)
        }
    }

    pub fn sparse_arfima(
        length: usize,
        ar: Term,
        ma: Term,
        d: f64,
        noise_variance: f64,
    ) -> Self {
        Self {
            kind: ProcessKind::Arfima,
            d,
            ..Self::sparse_arma(length, ar, ma, noise_variance)
        }
    }

    pub fn normal_noise(length: usize, mean: f64, variance: f64) -> Self {
        Self {
            noise_mean: mean,
            noise_variance: variance,
            ..Self::base(ProcessKind::NoiseNormal, length)
        }
    }

    pub fn uniform_noise(length: usize, lo: f64, hi: f64) -> Self {
        Self {
            uniform_lo: lo,
            uniform_hi: hi,
            ..Self::base(ProcessKind::NoiseUniform, length)
        }
    }

    pub fn label(&self) -> Label {
        self.kind.label()
    }

    fn max_lag(&self) -> usize {
        self.ar_terms
            .iter()
            .chain(&self.ma_terms)
            .map(|t| t.lag)
            .max()
            .unwrap_or(0)
    }

    fn check_common(&self) -> Result<(), SeriesError> {
        if self.length == 0 {
            return Err(SeriesError::EmptyLength);
        }
        let finite = [
            ("c", self.c),
            ("d", self.d),
            ("noise_mean", self.noise_mean),
        ];
        for (name, v) in finite {
            if !v.is_finite() {
                return Err(SeriesError::NonFiniteParameter { name });
            }
        }
        if self.ar_terms.iter().chain(&self.ma_terms).any(|t| !t.coeff.is_finite()) {
            return Err(SeriesError::NonFiniteParameter { name: "coeff" });
        }
        let lag = self.max_lag();
        if lag > self.length {
            return Err(SeriesError::LagTooLong { lag, length: self.length });
        }
        Ok(())
    }

    fn check_variance(&self) -> Result<(), SeriesError> {
        if !(self.noise_variance > 0.0 && self.noise_variance.is_finite()) {
            return Err(SeriesError::BadVariance(self.noise_variance));
        }
        Ok(())
    }

    fn check_ar_terms(&self) -> Result<(), SeriesError> {
        if self.ar_terms.iter().any(|t| t.lag == 0) {
            return Err(SeriesError::ZeroArLag);
        }
        if let [only] = self.ar_terms.as_slice() {
            if only.coeff.abs() >= 1.0 {
                return Err(SeriesError::NonStationary { coeff: only.coeff });
            }
        }
        Ok(())
    }

    fn check_arma(&self) -> Result<(), SeriesError> {
        self.check_common()?;
        self.check_variance()?;
        self.check_ar_terms()?;
        let has_instantaneous = self
            .ma_terms
            .iter()
            .any(|t| t.lag == 0 && t.coeff == 1.0);
        if !has_instantaneous {
            return Err(SeriesError::MissingInstantaneousNoise);
        }
        Ok(())
    }
}

/// One simulated series with its label and the inputs that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledSeries {
    pub values: Vec<f64>,
    pub label: Label,
    pub spec: ProcessSpec,
    pub seed: u64,
}

fn rng_for(seed: u64) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(seed)
}

fn gaussian_innovations(spec: &ProcessSpec, n: usize, rng: &mut ChaCha12Rng) -> Vec<f64> {
    let normal = Normal::new(spec.noise_mean, spec.noise_variance.sqrt())
        .expect("variance validated before sampling");
    normal.sample_iter(rng).take(n).collect()
}

/// Runs the ARMA recursion over `length + burn_in` samples. The first
/// `max_lag` values are the innovations themselves.
fn simulate_arma_core(spec: &ProcessSpec, rng: &mut ChaCha12Rng) -> Result<Vec<f64>, SeriesError> {
    let total = spec.length + spec.burn_in;
    let eps = gaussian_innovations(spec, total, rng);
    let start = spec.max_lag().min(total);
    let mut x = Vec::with_capacity(total);
    x.extend_from_slice(&eps[..start]);
    for t in start..total {
        let mut v = spec.c;
        for term in &spec.ar_terms {
            v += term.coeff * x[t - term.lag];
        }
        for term in &spec.ma_terms {
            v += term.coeff * eps[t - term.lag];
        }
        if !v.is_finite() {
            return Err(SeriesError::Diverged { t });
        }
        x.push(v);
    }
    Ok(x)
}

fn finish(spec: &ProcessSpec, seed: u64, mut values: Vec<f64>) -> LabeledSeries {
    values.drain(..spec.burn_in.min(values.len()));
    LabeledSeries { label: spec.label(), spec: spec.clone(), seed, values }
}

fn expect_kind(spec: &ProcessSpec, kind: ProcessKind, name: &'static str) -> Result<(), SeriesError> {
    if spec.kind != kind {
        return Err(SeriesError::WrongKind { expected: name, found: spec.kind });
    }
    Ok(())
}

/// Autoregressive process `x[t] = c + sum_i a_i x[t - lag_i] + e[t]`.
pub fn gen_ar(spec: &ProcessSpec, seed: u64) -> Result<LabeledSeries, SeriesError> {
    expect_kind(spec, ProcessKind::Ar, "Ar")?;
    if spec.ar_terms.is_empty() {
        return Err(SeriesError::NoArTerms);
    }
    spec.check_common()?;
    spec.check_variance()?;
    spec.check_ar_terms()?;
    // The AR recursion is ARMA with only the instantaneous noise term.
    let core = ProcessSpec { ma_terms: vec![Term::new(0, 1.0)], ..spec.clone() };
    let values = simulate_arma_core(&core, &mut rng_for(seed))?;
    Ok(finish(spec, seed, values))
}

/// ARMA process; `ma_terms` must contain the `(0, 1.0)` instantaneous term.
pub fn gen_arma(spec: &ProcessSpec, seed: u64) -> Result<LabeledSeries, SeriesError> {
    expect_kind(spec, ProcessKind::Arma, "Arma")?;
    spec.check_arma()?;
    let values = simulate_arma_core(spec, &mut rng_for(seed))?;
    Ok(finish(spec, seed, values))
}

/// Coefficients of the binomial expansion of `(1 - B)^(-d)`:
/// `w[0] = 1`, `w[j] = w[j-1] * (j - 1 + d) / j`.
pub fn fractional_integration_weights(d: f64, n: usize) -> Result<Vec<f64>, SeriesError> {
    if !(d.is_finite() && d.abs() < 1.0) {
        return Err(SeriesError::BadFractionalOrder(d));
    }
    if n == 0 {
        return Err(SeriesError::NoWeights);
    }
    let mut w = Vec::with_capacity(n);
    w.push(1.0);
    for j in 1..n {
        let prev = w[j - 1];
        w.push(prev * (j as f64 - 1.0 + d) / j as f64);
    }
    Ok(w)
}

/// ARFIMA: an ARMA core passed through truncated fractional integration
/// `x[t] = sum_{j <= t} w[j] y[t - j]`, with no presample extension.
pub fn gen_arfima(spec: &ProcessSpec, seed: u64) -> Result<LabeledSeries, SeriesError> {
    expect_kind(spec, ProcessKind::Arfima, "Arfima")?;
    spec.check_arma()?;
    let core = simulate_arma_core(spec, &mut rng_for(seed))?;
    let weights = fractional_integration_weights(spec.d, core.len())?;
    let values: Vec<f64> = (0..core.len())
        .map(|t| {
            weights[..=t]
                .iter()
                .zip(core[..=t].iter().rev())
                .map(|(w, y)| w * y)
                .sum()
        })
        .collect();
    if let Some(t) = values.iter().position(|v| !v.is_finite()) {
        return Err(SeriesError::Diverged { t });
    }
    Ok(finish(spec, seed, values))
}

/// I.i.d. normal or uniform draws.
pub fn gen_noise(spec: &ProcessSpec, seed: u64) -> Result<LabeledSeries, SeriesError> {
    spec.check_common()?;
    let mut rng = rng_for(seed);
    let total = spec.length + spec.burn_in;
    let values = match spec.kind {
        ProcessKind::NoiseNormal => {
            spec.check_variance()?;
            gaussian_innovations(spec, total, &mut rng)
        }
        ProcessKind::NoiseUniform => {
            let (lo, hi) = (spec.uniform_lo, spec.uniform_hi);
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(SeriesError::BadUniformBounds { lo, hi });
            }
            let uniform = Uniform::new(lo, hi)
                .map_err(|_| SeriesError::BadUniformBounds { lo, hi })?;
            uniform.sample_iter(&mut rng).take(total).collect()
        }
        other => return Err(SeriesError::WrongKind { expected: "NoiseNormal|NoiseUniform", found: other }),
    };
    Ok(finish(spec, seed, values))
}

/// Dispatches on `spec.kind`.
pub fn generate(spec: &ProcessSpec, seed: u64) -> Result<LabeledSeries, SeriesError> {
    match spec.kind {
        ProcessKind::Ar => gen_ar(spec, seed),
        ProcessKind::Arma => gen_arma(spec, seed),
        ProcessKind::Arfima => gen_arfima(spec, seed),
        ProcessKind::NoiseNormal | ProcessKind::NoiseUniform => gen_noise(spec, seed),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn acf(x: &[f64], lag: usize) -> f64 {
        let n = x.len();
        let mean = x.iter().sum::<f64>() / n as f64;
        let var: f64 = x.iter().map(|v| (v - mean).powi(2)).sum();
        let cov: f64 = (lag..n).map(|t| (x[t] - mean) * (x[t - lag] - mean)).sum();
        cov / var
    }

    fn mean_acf(lag: usize, seeds: std::ops::Range<u64>, f: impl Fn(u64) -> Vec<f64>) -> f64 {
        let n = seeds.end - seeds.start;
        seeds.map(|s| acf(&f(s), lag)).sum::<f64>() / n as f64
    }

    fn var(x: &[f64]) -> f64 {
        let m = x.iter().sum::<f64>() / x.len() as f64;
        x.iter().map(|v| (v - m).powi(2)).sum::<f64>() / x.len() as f64
    }

    #[test]
    fn zero_coefficient_ar_is_plain_noise() {
        let ar = gen_ar(&ProcessSpec::sparse_ar(500, 3, 0.0, 0.01), 11).unwrap();
        let noise = gen_noise(&ProcessSpec::normal_noise(500, 0.0, 0.01), 11).unwrap();
        // Same innovation stream, zero feedback.
        assert_eq!(ar.values, noise.values);
        assert_eq!(ar.label, Label::Causal);
        assert_eq!(noise.label, Label::NonCausal);
    }

    #[test]
    fn ar1_autocorrelation_matches_theory() {
        let spec = ProcessSpec::sparse_ar(2000, 1, 0.85, 0.01);
        let single = acf(&gen_ar(&spec, 7).unwrap().values, 1);
        assert!((single - 0.85).abs() < 0.05, "seed 7 lag-1 acf {single}");
        let mean = mean_acf(1, 0..100, |s| gen_ar(&spec, s).unwrap().values);
        assert!((mean - 0.85).abs() < 0.05, "mean lag-1 acf {mean}");
    }

    #[test]
    fn recipe_style_ar15_is_causal() {
        let s = gen_ar(&ProcessSpec::sparse_ar(2000, 15, 0.85, 1e-4), 3).unwrap();
        assert_eq!(s.values.len(), 2000);
        assert_eq!(s.label, Label::Causal);
        assert!(acf(&s.values, 15) > 0.6);
    }

    #[test]
    fn ar_rejects_empty_and_explosive_terms() {
        let mut spec = ProcessSpec::sparse_ar(100, 1, 0.5, 0.01);
        spec.ar_terms.clear();
        assert_eq!(gen_ar(&spec, 0), Err(SeriesError::NoArTerms));
        let spec = ProcessSpec::sparse_ar(100, 1, 1.0, 0.01);
        assert_eq!(gen_ar(&spec, 0), Err(SeriesError::NonStationary { coeff: 1.0 }));
        let spec = ProcessSpec::sparse_ar(100, 1, -1.2, 0.01);
        assert!(matches!(gen_ar(&spec, 0), Err(SeriesError::NonStationary { .. })));
        let spec = ProcessSpec::sparse_ar(10, 11, 0.5, 0.01);
        assert!(matches!(gen_ar(&spec, 0), Err(SeriesError::LagTooLong { lag: 11, length: 10 })));
        let spec = ProcessSpec::sparse_ar(10, 1, 0.5, 0.0);
        assert!(matches!(gen_ar(&spec, 0), Err(SeriesError::BadVariance(_))));
    }

    #[test]
    fn degenerate_arma_is_noise() {
        let spec = ProcessSpec {
            ar_terms: vec![],
            ma_terms: vec![Term::new(0, 1.0)],
            ..ProcessSpec::sparse_arma(300, Term::new(1, 0.0), Term::new(1, 0.0), 0.01)
        };
        let arma = gen_arma(&spec, 5).unwrap();
        let noise = gen_noise(&ProcessSpec::normal_noise(300, 0.0, 0.01), 5).unwrap();
        assert_eq!(arma.values, noise.values);
    }

    #[test]
    fn arma_requires_instantaneous_noise() {
        let mut spec = ProcessSpec::sparse_arma(100, Term::new(1, 0.5), Term::new(1, 0.5), 0.01);
        spec.ma_terms.remove(0);
        assert_eq!(gen_arma(&spec, 0), Err(SeriesError::MissingInstantaneousNoise));
        let spec = ProcessSpec::sparse_arma(100, Term::new(2, 1.5), Term::new(1, 0.5), 0.01);
        assert!(matches!(gen_arma(&spec, 0), Err(SeriesError::NonStationary { .. })));
    }

    #[test]
    fn arma_lag2_correlation_dominates_lag7() {
        let spec = ProcessSpec::sparse_arma(2000, Term::new(2, 0.85), Term::new(1, 0.85), 0.01);
        let lag2 = mean_acf(2, 0..100, |s| gen_arma(&spec, s).unwrap().values);
        let lag7 = mean_acf(7, 0..100, |s| gen_arma(&spec, s).unwrap().values);
        assert!(lag2 > lag7, "lag2 {lag2} lag7 {lag7}");
    }

    #[test]
    fn fractional_weights_examples() {
        let w = fractional_integration_weights(0.0, 5).unwrap();
        assert_eq!(w, vec![1.0, 0.0, 0.0, 0.0, 0.0]);
        let w = fractional_integration_weights(0.3, 4).unwrap();
        for (got, want) in w.iter().zip([1.0, 0.3, 0.195, 0.1495]) {
            assert!((got - want).abs() < 1e-15, "{got} vs {want}");
        }
        let w = fractional_integration_weights(-0.4, 3).unwrap();
        for (got, want) in w.iter().zip([1.0, -0.4, -0.12]) {
            assert!((got - want).abs() < 1e-15, "{got} vs {want}");
        }
        assert!(fractional_integration_weights(1.0, 3).is_err());
        assert!(fractional_integration_weights(-1.5, 3).is_err());
        assert_eq!(fractional_integration_weights(0.2, 0), Err(SeriesError::NoWeights));
    }

    #[test]
    fn fractional_weights_match_gamma_ratio() {
        use statrs::function::gamma::gamma;
        for d in [-0.45, -0.2, 0.1, 0.3, 0.49, 0.75] {
            let w = fractional_integration_weights(d, 21).unwrap();
            for (j, wj) in w.iter().enumerate() {
                let closed = gamma(j as f64 + d) / (gamma(d) * gamma(j as f64 + 1.0));
                assert!((wj - closed).abs() <= 1e-12 * closed.abs().max(1e-300), "d={d} j={j}");
            }
        }
    }

    #[test]
    fn arfima_with_zero_d_equals_arma_core() {
        let arma = ProcessSpec::sparse_arma(400, Term::new(3, 0.85), Term::new(2, 0.8), 0.01);
        let arfima = ProcessSpec { kind: ProcessKind::Arfima, d: 0.0, ..arma.clone() };
        assert_eq!(gen_arma(&arma, 9).unwrap().values, gen_arfima(&arfima, 9).unwrap().values);
    }

    #[test]
    fn long_memory_raises_distant_correlation() {
        let core = ProcessSpec {
            kind: ProcessKind::Arfima,
            ar_terms: vec![],
            ma_terms: vec![Term::new(0, 1.0)],
            ..ProcessSpec::normal_noise(2000, 0.0, 0.01)
        };
        let long = ProcessSpec { d: 0.4, ..core.clone() };
        let with_d = mean_acf(50, 0..100, |s| gen_arfima(&long, s).unwrap().values);
        let without = mean_acf(50, 0..100, |s| gen_arfima(&core, s).unwrap().values);
        assert!(with_d > without, "d=0.4 acf50 {with_d}, d=0 acf50 {without}");
    }

    #[test]
    fn recipe_style_arfima_is_finite() {
        let spec = ProcessSpec::sparse_arfima(2000, Term::new(20, 0.9), Term::new(20, 0.9), 0.49, 1e-4);
        let s = gen_arfima(&spec, 1).unwrap();
        assert!(s.values.iter().all(|v| v.is_finite()));
        assert_eq!(s.label, Label::Causal);
    }

    #[test]
    fn noise_laws() {
        let s = gen_noise(&ProcessSpec::normal_noise(2000, 5.0, 1.0), 21).unwrap();
        let mean = s.values.iter().sum::<f64>() / 2000.0;
        assert!((mean - 5.0).abs() < 0.1, "mean {mean}");
        let u = gen_noise(&ProcessSpec::uniform_noise(2000, -0.6, 0.6), 2).unwrap();
        assert!(u.values.iter().all(|v| (-0.6..0.6).contains(v)));
        assert_eq!(u.label, Label::NonCausal);
        assert!(matches!(
            gen_noise(&ProcessSpec::uniform_noise(10, 0.6, -0.6), 0),
            Err(SeriesError::BadUniformBounds { .. })
        ));
        assert!(matches!(
            gen_noise(&ProcessSpec::normal_noise(10, 0.0, -1.0), 0),
            Err(SeriesError::BadVariance(_))
        ));
        assert!(matches!(
            gen_noise(&ProcessSpec::sparse_ar(10, 1, 0.5, 1.0), 0),
            Err(SeriesError::WrongKind { .. })
        ));
    }

    #[test]
    fn burn_in_drops_leading_samples() {
        let mut spec = ProcessSpec::sparse_ar(100, 2, 0.8, 0.01);
        let plain = gen_ar(&spec, 4).unwrap();
        spec.burn_in = 30;
        let burned = gen_ar(&spec, 4).unwrap();
        assert_eq!(burned.values.len(), 100);
        assert_ne!(plain.values, burned.values);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn same_seed_same_values(seed in any::<u64>(), lag in 1usize..20, a in 0.8f64..0.9) {
            let spec = ProcessSpec::sparse_ar(300, lag, a, 1e-4);
            prop_assert_eq!(gen_ar(&spec, seed).unwrap(), gen_ar(&spec, seed).unwrap());
        }

        #[test]
        fn distinct_seeds_distinct_series(seed in 0u64..u64::MAX) {
            let spec = ProcessSpec::normal_noise(64, 0.0, 1.0);
            prop_assert_ne!(gen_noise(&spec, seed).unwrap().values, gen_noise(&spec, seed + 1).unwrap().values);
        }

        #[test]
        fn single_lag_ar_variance_bounded(seed in any::<u64>(), lag in 1usize..=20, a in -0.95f64..0.95) {
            let sigma2 = 0.01;
            let s = gen_ar(&ProcessSpec::sparse_ar(2000, lag, a, sigma2), seed).unwrap();
            prop_assert!(var(&s.values) <= 10.0 * sigma2 / (1.0 - a * a));
        }
    }
}
