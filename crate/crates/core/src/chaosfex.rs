//! GLS chaotic neurons and TTSS feature extraction.
//!
//! A neuron starts at activity `q` and iterates the skew-tent map
//! `T(y) = y / b` for `y < b`, `(1 - y) / (1 - b)` otherwise, until its
//! trajectory enters `(stimulus - eps, stimulus + eps)`. The TTSS feature is
//! the fraction of iterates visited before that point which lie above `b`.
//!
//! The trajectory from `q` does not depend on the stimulus, so a
//! [`GlsNeuron`] computes it once and answers every stimulus by scanning.
//! Double-precision iteration of an expanding map loses one bit per step
//! and decorrelates from the true orbit after roughly fifty iterations; the
//! orbit is therefore computed with big-integer rational arithmetic and only
//! rounded to `f64` at the end. Features are reproducible across platforms.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::data::FeatureMatrix;

/// Whether the in-neighbourhood iterate `A[N]` counts towards TTSS.
/// The window used is `A[0..N)` when false, `A[0..=N]` when true.
pub const INCLUDE_STOPPING_ITERATE: bool = false;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ChaosError {
    #[error("value {0} outside the map domain [0, 1)")]
    Domain(f64),
    #[error("threshold b = {0} outside (0, 1)")]
    BadThreshold(f64),
    #[error("initial activity q = {0} outside [0, 1)")]
    BadInitialActivity(f64),
    #[error("neighbourhood radius eps = {0} must be positive")]
    BadEpsilon(f64),
    #[error("max trajectory length must be at least 1")]
    ZeroMaxLen,
    #[error("entry ({row}, {col}) = {value} outside [0, 1)")]
    EntryDomain { row: usize, col: usize, value: f64 },
}

/// GLS neuron hyperparameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GlsParams {
    pub q: f64,
    pub b: f64,
    pub eps: f64,
    pub max_len: usize,
}

impl Default for GlsParams {
    fn default() -> Self {
        Self { q: 0.33, b: 0.499, eps: 0.01, max_len: 1000 }
    }
}

impl GlsParams {
    pub fn validate(&self) -> Result<(), ChaosError> {
        if !(self.q >= 0.0 && self.q < 1.0) {
            return Err(ChaosError::BadInitialActivity(self.q));
        }
        if !(self.b > 0.0 && self.b < 1.0) {
            return Err(ChaosError::BadThreshold(self.b));
        }
        if self.eps.is_nan() || self.eps <= 0.0 {
            return Err(ChaosError::BadEpsilon(self.eps));
        }
        if self.max_len == 0 {
            return Err(ChaosError::ZeroMaxLen);
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FiringResult {
    pub firing_time: usize,
    pub ttss: f64,
    pub timed_out: bool,
}

/// The skew-tent GLS map in double precision.
///
/// `T(b)` is 1 in exact arithmetic; results are capped at the largest
/// double below 1 so the codomain stays `[0, 1)`.
pub fn gls_map(y: f64, b: f64) -> Result<f64, ChaosError> {
    if !(0.0..1.0).contains(&y) {
        return Err(ChaosError::Domain(y));
    }
    if !(b > 0.0 && b < 1.0) {
        return Err(ChaosError::BadThreshold(b));
    }
    let next = if y < b { y / b } else { (1.0 - y) / (1.0 - b) };
    Ok(next.min(ONE_MINUS_ULP))
}

const ONE_MINUS_ULP: f64 = 1.0 - f64::EPSILON / 2.0;

/// `x = num / den` for a finite non-negative double.
fn exact_ratio(x: f64) -> (BigUint, BigUint) {
    debug_assert!(x.is_finite() && x >= 0.0);
    let bits = x.to_bits();
    let exp = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    let (mant, exp2) = if exp == 0 { (frac, -1074) } else { (frac | (1u64 << 52), exp - 1075) };
    if mant == 0 {
        return (BigUint::zero(), BigUint::from(1u8));
    }
    let tz = mant.trailing_zeros() as i64;
    let (mant, exp2) = (mant >> tz, exp2 + tz);
    if exp2 >= 0 {
        (BigUint::from(mant) << exp2 as usize, BigUint::from(1u8))
    } else {
        (BigUint::from(mant), BigUint::from(1u8) << (-exp2) as usize)
    }
}

fn ratio_to_f64(num: &BigUint, den: &BigUint) -> f64 {
    if num.is_zero() {
        return 0.0;
    }
    let shift = den.bits() as i64 - num.bits() as i64 + 64;
    let q = if shift >= 0 { (num << shift as usize) / den } else { num / (den << (-shift) as usize) };
    let mut v = q.to_f64().expect("quotient fits in f64");
    let mut s = shift;
    while s > 0 {
        let step = s.min(1000);
        v *= 2f64.powi(-(step as i32));
        s -= step;
    }
    while s < 0 {
        let step = (-s).min(1000);
        v *= 2f64.powi(step as i32);
        s += step;
    }
    v
}

/// Orbit of `q` under the GLS map, rounded to doubles.
///
/// Iterates are kept as rationals `num / den`. Once the denominator is much
/// wider than the precision the remaining steps can consume, both parts are
/// truncated; the absolute error stays below `2^-128` at every index.
fn gls_orbit(q: f64, b: f64, len: usize) -> Vec<f64> {
    let (bn, bd) = exact_ratio(b);
    let upper_bd = &bd - &bn;
    let (mut num, mut den) = exact_ratio(q);
    let expansion_bits = (1.0 / b.min(1.0 - b)).log2();
    let mut out = Vec::with_capacity(len);
    for i in 0..len {
        out.push(ratio_to_f64(&num, &den));
        let scaled = &num * &bd;
        if scaled < &bn * &den {
            num = scaled;
            den *= &bn;
        } else {
            num = (&den - &num) * &bd;
            den *= &upper_bd;
        }
        let common = num.trailing_zeros().unwrap_or(u64::MAX).min(den.trailing_zeros().unwrap_or(0));
        if common > 0 {
            num >>= common as usize;
            den >>= common as usize;
        }
        let remaining = (len - i) as f64;
        let keep = 192 + (remaining * expansion_bits).ceil() as u64;
        if den.bits() > 2 * keep {
            let drop = (den.bits() - keep) as usize;
            num >>= drop;
            den >>= drop;
        }
    }
    out
}

/// A GLS neuron with its trajectory precomputed.
#[derive(Debug, Clone)]
pub struct GlsNeuron {
    params: GlsParams,
    trajectory: Vec<f64>,
    /// `above[i]` = number of `trajectory[..i]` strictly above `b`.
    above: Vec<u32>,
}

impl GlsNeuron {
    pub fn new(params: GlsParams) -> Result<Self, ChaosError> {
        params.validate()?;
        let trajectory = gls_orbit(params.q, params.b, params.max_len);
        let mut above = Vec::with_capacity(trajectory.len() + 1);
        above.push(0u32);
        let mut count = 0u32;
        for &a in &trajectory {
            if a > params.b {
                count += 1;
            }
            above.push(count);
        }
        Ok(Self { params, trajectory, above })
    }

    pub fn params(&self) -> &GlsParams {
        &self.params
    }

    /// `[q, T(q), T^2(q), ...]`, `max_len` entries.
    pub fn trajectory(&self) -> &[f64] {
        &self.trajectory
    }

    pub fn fire(&self, stimulus: f64) -> Result<FiringResult, ChaosError> {
        if !(0.0..1.0).contains(&stimulus) {
            return Err(ChaosError::Domain(stimulus));
        }
        Ok(self.fire_unchecked(stimulus))
    }

    fn fire_unchecked(&self, stimulus: f64) -> FiringResult {
        let eps = self.params.eps;
        let hit = self.trajectory.iter().position(|&a| (a - stimulus).abs() < eps);
        let (firing_time, timed_out) = match hit {
            Some(n) => (n, false),
            None => (self.params.max_len, true),
        };
        let window = if INCLUDE_STOPPING_ITERATE && !timed_out { firing_time + 1 } else { firing_time };
        let ttss = if window == 0 { 0.0 } else { self.above[window] as f64 / window as f64 };
        FiringResult { firing_time, ttss, timed_out }
    }

    /// TTSS for every entry, preserving shape, labels and row order.
    pub fn extract_ttss(&self, matrix: &FeatureMatrix) -> Result<FeatureMatrix, ChaosError> {
        for (row, values) in matrix.rows().enumerate() {
            if let Some((col, &value)) = values.iter().enumerate().find(|(_, v)| !(**v >= 0.0 && **v < 1.0)) {
                return Err(ChaosError::EntryDomain { row, col, value });
            }
        }
        let values: Vec<f64> = matrix
            .values()
            .par_iter()
            .map(|&v| self.fire_unchecked(v).ttss)
            .collect();
        Ok(FeatureMatrix::from_flat(matrix.n_rows(), matrix.n_cols(), values, matrix.labels().to_vec())
            .expect("shape preserved"))
    }
}

/// One-off firing; builds the neuron each call.
pub fn fire(stimulus: f64, params: &GlsParams) -> Result<FiringResult, ChaosError> {
    GlsNeuron::new(*params)?.fire(stimulus)
}

pub fn extract_ttss(matrix: &FeatureMatrix, params: &GlsParams) -> Result<FeatureMatrix, ChaosError> {
    GlsNeuron::new(*params)?.extract_ttss(matrix)
}

/// Interior points that rise above (or dip below) both neighbours by more
/// than `min_excursion`. With `min_excursion = 0` this is the count of strict
/// local extrema.
pub fn count_local_extrema(curve: &[f64], min_excursion: f64) -> usize {
    curve
        .windows(3)
        .filter(|w| {
            let (l, c, r) = (w[0], w[1], w[2]);
            (c - l > min_excursion && c - r > min_excursion) || (l - c > min_excursion && r - c > min_excursion)
        })
        .count()
}
