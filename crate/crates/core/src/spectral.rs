//! One-sided DFT amplitude spectra and min-max scaling into `[0, 1)`.

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::data::FeatureMatrix;

/// Default headroom keeping scaled values strictly below 1.
pub const DEFAULT_HEADROOM: f64 = 1e-6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectralError {
    #[error("spectrum needs at least 2 samples, got {0}")]
    TooShort(usize),
    #[error("non-finite sample at index {0}")]
    NonFinite(usize),
    #[error("cannot fit a scaler on an empty matrix")]
    EmptyMatrix,
    #[error("headroom {0} outside (0, 0.1)")]
    BadHeadroom(f64),
    #[error("scaler fitted on {expected} features, matrix has {found}")]
    DimensionMismatch { expected: usize, found: usize },
}

/// Magnitudes of DFT bins `0..=N/2` of a real series of length `N`.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub amplitudes: Vec<f64>,
    pub source_length: usize,
}

impl Spectrum {
    pub fn bin_count(source_length: usize) -> usize {
        source_length / 2 + 1
    }
}

/// `|sum_t x[t] exp(-2 pi i k t / N)|` for `k = 0..=N/2`, via FFT.
pub fn amplitude_spectrum(series: &[f64]) -> Result<Spectrum, SpectralError> {
    let n = series.len();
    if n < 2 {
        return Err(SpectralError::TooShort(n));
    }
    if let Some(i) = series.iter().position(|v| !v.is_finite()) {
        return Err(SpectralError::NonFinite(i));
    }
    let fft = FftPlanner::<f64>::new().plan_fft_forward(n);
    let mut buf: Vec<Complex<f64>> = series.iter().map(|&v| Complex::new(v, 0.0)).collect();
    fft.process(&mut buf);
    let amplitudes = buf[..Spectrum::bin_count(n)].iter().map(|c| c.norm()).collect();
    Ok(Spectrum { amplitudes, source_length: n })
}

/// Subtracts the sample mean.
pub fn demean(series: &[f64]) -> Vec<f64> {
    if series.is_empty() {
        return Vec::new();
    }
    let mean = series.iter().sum::<f64>() / series.len() as f64;
    series.iter().map(|v| v - mean).collect()
}

fn check_headroom(headroom: f64) -> Result<(), SpectralError> {
    if headroom > 0.0 && headroom < 0.1 {
        Ok(())
    } else {
        Err(SpectralError::BadHeadroom(headroom))
    }
}

#[inline]
fn scale_into_unit(v: f64, lo: f64, hi: f64, ceiling: f64) -> f64 {
    if hi <= lo || v.is_nan() {
        return 0.0;
    }
    ((v - lo) / (hi - lo)).clamp(0.0, ceiling)
}

/// Per-feature min-max scaler fitted on training rows.
///
/// Transformed values are clipped into `[0, 1 - headroom]`, so unseen values
/// outside the training range are never rejected. Constant features map to 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinMaxScaler {
    pub min: Vec<f64>,
    pub max: Vec<f64>,
    pub headroom: f64,
}

pub fn fit_scaler(train: &FeatureMatrix, headroom: f64) -> Result<MinMaxScaler, SpectralError> {
    check_headroom(headroom)?;
    if train.is_empty() {
        return Err(SpectralError::EmptyMatrix);
    }
    let mut min = vec![f64::INFINITY; train.n_cols()];
    let mut max = vec![f64::NEG_INFINITY; train.n_cols()];
    for row in train.rows() {
        for (j, &v) in row.iter().enumerate() {
            min[j] = min[j].min(v);
            max[j] = max[j].max(v);
        }
    }
    Ok(MinMaxScaler { min, max, headroom })
}

pub fn apply_scaler(scaler: &MinMaxScaler, matrix: &FeatureMatrix) -> Result<FeatureMatrix, SpectralError> {
    if matrix.n_cols() != scaler.min.len() {
        return Err(SpectralError::DimensionMismatch {
            expected: scaler.min.len(),
            found: matrix.n_cols(),
        });
    }
    let ceiling = 1.0 - scaler.headroom;
    let values = matrix
        .rows()
        .flat_map(|row| {
            row.iter()
                .enumerate()
                .map(|(j, &v)| scale_into_unit(v, scaler.min[j], scaler.max[j], ceiling))
        })
        .collect();
    Ok(FeatureMatrix::from_flat(matrix.n_rows(), matrix.n_cols(), values, matrix.labels().to_vec())
        .expect("shape preserved"))
}

/// Min-max scales every row by its own range, clipped into `[0, 1 - headroom]`.
pub fn scale_per_instance(matrix: &FeatureMatrix, headroom: f64) -> Result<FeatureMatrix, SpectralError> {
    check_headroom(headroom)?;
    let ceiling = 1.0 - headroom;
    let mut values = Vec::with_capacity(matrix.values().len());
    for row in matrix.rows() {
        let lo = row.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = row.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        values.extend(row.iter().map(|&v| scale_into_unit(v, lo, hi, ceiling)));
    }
    Ok(FeatureMatrix::from_flat(matrix.n_rows(), matrix.n_cols(), values, matrix.labels().to_vec())
        .expect("shape preserved"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::Label;
    use proptest::collection::vec;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn naive_dft(x: &[f64]) -> Vec<(f64, f64)> {
        let n = x.len();
        (0..n)
            .map(|k| {
                x.iter().enumerate().fold((0.0, 0.0), |(re, im), (t, &v)| {
                    let ang = -2.0 * PI * (k * t % n) as f64 / n as f64;
                    (re + v * ang.cos(), im + v * ang.sin())
                })
            })
            .collect()
    }

    fn column(values: &[f64]) -> FeatureMatrix {
        FeatureMatrix::from_rows(
            values.iter().map(|&v| vec![v]).collect(),
            vec![Label::Causal; values.len()],
        )
        .unwrap()
    }

    #[test]
    fn zeros_give_zero_spectrum() {
        let s = amplitude_spectrum(&[0.0; 8]).unwrap();
        assert_eq!(s.amplitudes, vec![0.0; 5]);
        assert_eq!(s.source_length, 8);
    }

    #[test]
    fn single_tone_lands_in_its_bin() {
        let x: Vec<f64> = (0..8).map(|t| (2.0 * PI * 3.0 * t as f64 / 8.0).cos()).collect();
        let s = amplitude_spectrum(&x).unwrap();
        for (k, a) in s.amplitudes.iter().enumerate() {
            let want = if k == 3 { 4.0 } else { 0.0 };
            assert!((a - want).abs() < 1e-9, "bin {k}: {a}");
        }
    }

    #[test]
    fn ar15_spectrum_matches_naive_dft() {
        use crate::seriesgen::{gen_ar, ProcessSpec};
        let x = gen_ar(&ProcessSpec::sparse_ar(2000, 15, 0.85, 1e-4), 2024).unwrap().values;
        let fast = amplitude_spectrum(&x).unwrap();
        assert_eq!(fast.amplitudes.len(), 1001);
        let slow = naive_dft(&x);
        for (k, a) in fast.amplitudes.iter().enumerate() {
            let (re, im) = slow[k];
            let b = re.hypot(im);
            assert!((a - b).abs() <= 1e-6 * b.max(1e-12), "bin {k}: {a} vs {b}");
        }
    }

    #[test]
    fn bad_inputs_rejected() {
        assert_eq!(amplitude_spectrum(&[1.0]), Err(SpectralError::TooShort(1)));
        assert_eq!(amplitude_spectrum(&[1.0, f64::NAN, 2.0]), Err(SpectralError::NonFinite(1)));
    }

    #[test]
    fn odd_length_bin_count() {
        assert_eq!(amplitude_spectrum(&[1.0; 7]).unwrap().amplitudes.len(), 4);
    }

    #[test]
    fn demean_examples() {
        assert_eq!(demean(&[5.0, 5.0, 5.0]), vec![0.0, 0.0, 0.0]);
        assert_eq!(demean(&[1.0, 2.0, 3.0]), vec![-1.0, 0.0, 1.0]);
        let z = [0.5, -0.25, -0.25];
        for (a, b) in demean(&z).iter().zip(z) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn scaler_endpoints_and_degenerate_column() {
        let scaler = fit_scaler(&column(&[0.0, 1.0]), DEFAULT_HEADROOM).unwrap();
        let out = apply_scaler(&scaler, &column(&[0.0, 1.0])).unwrap();
        assert_eq!(out.values(), &[0.0, 1.0 - DEFAULT_HEADROOM]);

        let flat = fit_scaler(&column(&[3.0, 3.0, 3.0]), DEFAULT_HEADROOM).unwrap();
        let out = apply_scaler(&flat, &column(&[3.0, 3.0, 3.0])).unwrap();
        assert_eq!(out.values(), &[0.0, 0.0, 0.0]);

        let scaler = fit_scaler(&column(&[2.0, 4.0]), DEFAULT_HEADROOM).unwrap();
        let out = apply_scaler(&scaler, &column(&[1.0, 3.0, 9.0])).unwrap();
        assert_eq!(out.values(), &[0.0, 0.5, 1.0 - DEFAULT_HEADROOM]);
    }

    #[test]
    fn scaler_errors() {
        let empty = FeatureMatrix::from_rows(vec![], vec![]).unwrap();
        assert_eq!(fit_scaler(&empty, 1e-6), Err(SpectralError::EmptyMatrix));
        assert_eq!(fit_scaler(&column(&[1.0]), 0.0), Err(SpectralError::BadHeadroom(0.0)));
        let scaler = fit_scaler(&column(&[1.0, 2.0]), 1e-6).unwrap();
        let wide = FeatureMatrix::from_rows(vec![vec![1.0, 2.0]], vec![Label::Causal]).unwrap();
        assert_eq!(
            apply_scaler(&scaler, &wide),
            Err(SpectralError::DimensionMismatch { expected: 1, found: 2 })
        );
    }

    #[test]
    fn per_instance_scaling_uses_row_range() {
        let m = FeatureMatrix::from_rows(
            vec![vec![1.0, 3.0, 2.0], vec![10.0, 10.0, 10.0]],
            vec![Label::Causal, Label::NonCausal],
        )
        .unwrap();
        let out = scale_per_instance(&m, 1e-6).unwrap();
        assert_eq!(out.row(0), &[0.0, 1.0 - 1e-6, 0.5]);
        assert_eq!(out.row(1), &[0.0, 0.0, 0.0]);
    }

    proptest! {
        #[test]
        fn parseval_holds(x in vec(-10.0f64..10.0, 2..200)) {
            let n = x.len();
            let s = amplitude_spectrum(&x).unwrap();
            // Rebuild the two-sided energy from the one-sided magnitudes.
            let mut energy = 0.0;
            for k in 0..n {
                let mirrored = if k <= n / 2 { k } else { n - k };
                energy += s.amplitudes[mirrored].powi(2);
            }
            let time: f64 = x.iter().map(|v| v * v).sum();
            prop_assert!((energy / n as f64 - time).abs() <= 1e-9 * time.max(1e-300));
        }

        #[test]
        fn matches_naive_dft_length_64(x in vec(-1.0f64..1.0, 64)) {
            let fast = amplitude_spectrum(&x).unwrap();
            let slow = naive_dft(&x);
            for (k, a) in fast.amplitudes.iter().enumerate() {
                let want = slow[k].0.hypot(slow[k].1);
                prop_assert!((a - want).abs() <= 1e-9 * want.max(1.0));
            }
        }

        #[test]
        fn scaled_values_stay_in_unit_interval(
            train in vec(-1e6f64..1e6, 1..30),
            test in vec(proptest::num::f64::ANY, 1..30),
        ) {
            let scaler = fit_scaler(&column(&train), DEFAULT_HEADROOM).unwrap();
            let out = apply_scaler(&scaler, &column(&test)).unwrap();
            prop_assert!(out.values().iter().all(|v| (0.0..1.0).contains(v)));
        }
    }
}
