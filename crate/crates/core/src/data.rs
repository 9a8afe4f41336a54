//! Labels and dense feature matrices shared by every stage.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Class label. Non-causal series are class 0, causal series class 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "u8", try_from = "u8")]
pub enum Label {
    NonCausal = 0,
    Causal = 1,
}

impl Label {
    pub fn as_index(self) -> usize {
        self as usize
    }

    pub fn flipped(self) -> Self {
        match self {
            Label::NonCausal => Label::Causal,
            Label::Causal => Label::NonCausal,
        }
    }
}

impl From<Label> for u8 {
    fn from(label: Label) -> u8 {
        label as u8
    }
}

impl TryFrom<u8> for Label {
    type Error = String;

    fn try_from(v: u8) -> Result<Self, Self::Error> {
        match v {
            0 => Ok(Label::NonCausal),
            1 => Ok(Label::Causal),
            other => Err(format!("label must be 0 or 1, got {other}")),
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum MatrixError {
    #[error("row {row} has {found} columns, expected {expected}")]
    Ragged { row: usize, expected: usize, found: usize },
    #[error("{rows} rows but {labels} labels")]
    LabelCount { rows: usize, labels: usize },
    #[error("flat buffer of {len} values does not fit {rows}x{cols}")]
    Shape { len: usize, rows: usize, cols: usize },
}

/// Row-major matrix: one row per instance, one column per feature.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureMatrix {
    n_rows: usize,
    n_cols: usize,
    values: Vec<f64>,
    labels: Vec<Label>,
}

impl FeatureMatrix {
    pub fn from_rows(rows: Vec<Vec<f64>>, labels: Vec<Label>) -> Result<Self, MatrixError> {
        if rows.len() != labels.len() {
            return Err(MatrixError::LabelCount { rows: rows.len(), labels: labels.len() });
        }
        let n_cols = rows.first().map_or(0, Vec::len);
        let mut values = Vec::with_capacity(rows.len() * n_cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n_cols {
                return Err(MatrixError::Ragged { row: i, expected: n_cols, found: row.len() });
            }
            values.extend_from_slice(row);
        }
        Ok(Self { n_rows: rows.len(), n_cols, values, labels })
    }

    pub fn from_flat(
        n_rows: usize,
        n_cols: usize,
        values: Vec<f64>,
        labels: Vec<Label>,
    ) -> Result<Self, MatrixError> {
        if values.len() != n_rows * n_cols {
            return Err(MatrixError::Shape { len: values.len(), rows: n_rows, cols: n_cols });
        }
        if labels.len() != n_rows {
            return Err(MatrixError::LabelCount { rows: n_rows, labels: labels.len() });
        }
        Ok(Self { n_rows, n_cols, values, labels })
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn is_empty(&self) -> bool {
        self.n_rows == 0
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.n_cols..(i + 1) * self.n_cols]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        // chunks_exact panics on zero-width chunks
        (0..self.n_rows).map(move |i| self.row(i))
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.n_cols + col]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn with_labels(mut self, labels: Vec<Label>) -> Result<Self, MatrixError> {
        if labels.len() != self.n_rows {
            return Err(MatrixError::LabelCount { rows: self.n_rows, labels: labels.len() });
        }
        self.labels = labels;
        Ok(self)
    }

    /// New matrix holding the given rows, in the given order.
    pub fn select_rows(&self, indices: &[usize]) -> Self {
        let mut values = Vec::with_capacity(indices.len() * self.n_cols);
        let mut labels = Vec::with_capacity(indices.len());
        for &i in indices {
            values.extend_from_slice(self.row(i));
            labels.push(self.labels[i]);
        }
        Self { n_rows: indices.len(), n_cols: self.n_cols, values, labels }
    }

    /// Applies `f` to every entry, keeping shape and labels.
    pub fn map_values(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            n_rows: self.n_rows,
            n_cols: self.n_cols,
            values: self.values.iter().map(|&v| f(v)).collect(),
            labels: self.labels.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ragged_rows_rejected() {
        let err = FeatureMatrix::from_rows(
            vec![vec![1.0, 2.0], vec![3.0]],
            vec![Label::Causal, Label::NonCausal],
        )
        .unwrap_err();
        assert_eq!(err, MatrixError::Ragged { row: 1, expected: 2, found: 1 });
    }

    #[test]
    fn select_rows_keeps_labels_aligned() {
        let m = FeatureMatrix::from_rows(
            vec![vec![0.0], vec![1.0], vec![2.0]],
            vec![Label::NonCausal, Label::Causal, Label::NonCausal],
        )
        .unwrap();
        let s = m.select_rows(&[2, 1]);
        assert_eq!(s.values(), &[2.0, 1.0]);
        assert_eq!(s.labels(), &[Label::NonCausal, Label::Causal]);
    }

    #[test]
    fn label_serializes_as_integer() {
        assert_eq!(serde_json::to_string(&Label::Causal).unwrap(), "1");
        let l: Label = serde_json::from_str("0").unwrap();
        assert_eq!(l, Label::NonCausal);
        assert!(serde_json::from_str::<Label>("2").is_err());
    }
}
