//! L2-regularised binary logistic regression and per-class metrics.
//!
//! The objective is
//! `J(w, b) = C * sum_i log(1 + exp(-y_i (w.x_i + b))) + |w|^2 / 2`
//! with `y_i` in {-1, +1}; the bias is not penalised. It is minimised with
//! L-BFGS and an Armijo backtracking line search, which keeps the loss
//! non-increasing across accepted steps.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::data::{FeatureMatrix, Label};

const HISTORY: usize = 10;
const ARMIJO: f64 = 1e-4;
const MAX_BACKTRACKS: usize = 60;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ClassifyError {
    #[error("training data must contain both classes")]
    SingleClass,
    #[error("non-finite feature at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("model expects {expected} features, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("{predicted} predictions for {truth} true labels")]
    LengthMismatch { predicted: usize, truth: usize },
    #[error("cannot evaluate an empty prediction set")]
    Empty,
    #[error("invalid hyperparameters: {0}")]
    BadHyper(String),
}

/// Regularisation strength, stopping tolerance and iteration cap.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LrHyper {
    #[serde(rename = "C")]
    pub c: f64,
    pub tol: f64,
    pub max_iter: usize,
}

impl LrHyper {
    /// Conventional library defaults, used by the raw and Fourier models.
    pub fn library_default() -> Self {
        Self { c: 1.0, tol: 1e-4, max_iter: 100 }
    }

    /// Settings tuned for TTSS features.
    pub fn chaosfex() -> Self {
        Self { c: 0.001, tol: 0.001, max_iter: 1000 }
    }

    pub fn validate(&self) -> Result<(), ClassifyError> {
        if !(self.c > 0.0 && self.c.is_finite()) {
            return Err(ClassifyError::BadHyper(format!("C must be positive, got {}", self.c)));
        }
        if self.tol.is_nan() || self.tol <= 0.0 {
            return Err(ClassifyError::BadHyper(format!("tol must be positive, got {}", self.tol)));
        }
        if self.max_iter == 0 {
            return Err(ClassifyError::BadHyper("max_iter must be at least 1".into()));
        }
        Ok(())
    }
}

/// Identifies the data a model was trained on.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrainingFingerprint {
    pub master_seed: u64,
    pub spec_hash: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LrModel {
    pub weights: Vec<f64>,
    pub bias: f64,
    pub hyper: LrHyper,
    pub converged: bool,
    pub iterations: usize,
    pub final_loss: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fingerprint: Option<TrainingFingerprint>,
}

impl LrModel {
    pub fn decision(&self, x: &[f64]) -> f64 {
        dot(&self.weights, x) + self.bias
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `log(1 + exp(z))` without overflow.
fn softplus(z: f64) -> f64 {
    z.max(0.0) + (-z.abs()).exp().ln_1p()
}

fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

fn signed(label: Label) -> f64 {
    match label {
        Label::Causal => 1.0,
        Label::NonCausal => -1.0,
    }
}

/// Objective and gradient at `theta = [w..., b]`.
pub fn lr_objective(theta: &[f64], features: &FeatureMatrix, c: f64) -> (f64, Vec<f64>) {
    let d = features.n_cols();
    let (w, b) = theta.split_at(d);
    let bias = b[0];
    let mut loss = 0.5 * dot(w, w);
    let mut grad = Vec::with_capacity(d + 1);
    grad.extend_from_slice(w);
    grad.push(0.0);
    for (x, &label) in features.rows().zip(features.labels()) {
        let y = signed(label);
        let margin = y * (dot(w, x) + bias);
        loss += c * softplus(-margin);
        let coef = -c * y * sigmoid(-margin);
        for (g, xi) in grad[..d].iter_mut().zip(x) {
            *g += coef * xi;
        }
        grad[d] += coef;
    }
    (loss, grad)
}

fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn validate_training(features: &FeatureMatrix) -> Result<(), ClassifyError> {
    let labels = features.labels();
    let has = |l: Label| labels.contains(&l);
    if !has(Label::Causal) || !has(Label::NonCausal) {
        return Err(ClassifyError::SingleClass);
    }
    for (row, x) in features.rows().enumerate() {
        if let Some(col) = x.iter().position(|v| !v.is_finite()) {
            return Err(ClassifyError::NonFinite { row, col });
        }
    }
    Ok(())
}

/// Loss after each accepted iteration, starting with the initial loss.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainTrace {
    pub losses: Vec<f64>,
}

pub fn train_lr(features: &FeatureMatrix, hyper: &LrHyper) -> Result<LrModel, ClassifyError> {
    train_lr_traced(features, hyper).map(|(m, _)| m)
}

pub fn train_lr_traced(
    features: &FeatureMatrix,
    hyper: &LrHyper,
) -> Result<(LrModel, TrainTrace), ClassifyError> {
    hyper.validate()?;
    validate_training(features)?;
    let dim = features.n_cols() + 1;
    let mut theta = vec![0.0; dim];
    let (mut loss, mut grad) = lr_objective(&theta, features, hyper.c);
    let mut history: VecDeque<(Vec<f64>, Vec<f64>, f64)> = VecDeque::with_capacity(HISTORY);
    let mut losses = vec![loss];
    let mut converged = inf_norm(&grad) <= hyper.tol;
    let mut iterations = 0;

    while !converged && iterations < hyper.max_iter {
        let mut dir = two_loop_direction(&grad, &history);
        let mut slope = dot(&grad, &dir);
        if slope.is_nan() || slope >= 0.0 {
            history.clear();
            dir = grad.iter().map(|g| -g).collect();
            slope = -dot(&grad, &grad);
        }
        let mut step = if history.is_empty() { 1.0 / inf_norm(&grad).max(1.0) } else { 1.0 };

        let mut accepted = None;
        for _ in 0..MAX_BACKTRACKS {
            let trial: Vec<f64> = theta.iter().zip(&dir).map(|(t, d)| t + step * d).collect();
            let (trial_loss, trial_grad) = lr_objective(&trial, features, hyper.c);
            if trial_loss <= loss + ARMIJO * step * slope {
                accepted = Some((trial, trial_loss, trial_grad));
                break;
            }
            step *= 0.5;
        }
        let Some((next, next_loss, next_grad)) = accepted else {
            break;
        };

        let s: Vec<f64> = next.iter().zip(&theta).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = next_grad.iter().zip(&grad).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        if sy > 1e-12 * dot(&y, &y).sqrt() * dot(&s, &s).sqrt() {
            if history.len() == HISTORY {
                history.pop_front();
            }
            history.push_back((s, y, 1.0 / sy));
        }
        theta = next;
        loss = next_loss;
        grad = next_grad;
        iterations += 1;
        losses.push(loss);
        converged = inf_norm(&grad) <= hyper.tol;
    }

    let bias = theta.pop().expect("theta holds the bias");
    let model = LrModel {
        weights: theta,
        bias,
        hyper: *hyper,
        converged,
        iterations,
        final_loss: loss,
        fingerprint: None,
    };
    Ok((model, TrainTrace { losses }))
}

fn two_loop_direction(grad: &[f64], history: &VecDeque<(Vec<f64>, Vec<f64>, f64)>) -> Vec<f64> {
    let mut q: Vec<f64> = grad.to_vec();
    let mut alphas = Vec::with_capacity(history.len());
    for (s, y, rho) in history.iter().rev() {
        let a = rho * dot(s, &q);
        for (qi, yi) in q.iter_mut().zip(y) {
            *qi -= a * yi;
        }
        alphas.push(a);
    }
    if let Some((s, y, _)) = history.back() {
        let gamma = dot(s, y) / dot(y, y);
        q.iter_mut().for_each(|v| *v *= gamma);
    }
    for ((s, y, rho), a) in history.iter().zip(alphas.iter().rev()) {
        let b = rho * dot(y, &q);
        for (qi, si) in q.iter_mut().zip(s) {
            *qi += (a - b) * si;
        }
    }
    q.iter_mut().for_each(|v| *v = -*v);
    q
}

#[derive(Debug, Clone, PartialEq)]
pub struct Prediction {
    pub labels: Vec<Label>,
    pub probabilities: Vec<f64>,
}

/// `p = sigmoid(w.x + b)`; label 1 iff `p >= 0.5`.
pub fn predict(model: &LrModel, features: &FeatureMatrix) -> Result<Prediction, ClassifyError> {
    if features.n_cols() != model.weights.len() {
        return Err(ClassifyError::DimensionMismatch {
            expected: model.weights.len(),
            found: features.n_cols(),
        });
    }
    let probabilities: Vec<f64> = features.rows().map(|x| sigmoid(model.decision(x))).collect();
    let labels = probabilities
        .iter()
        .map(|&p| if p >= 0.5 { Label::Causal } else { Label::NonCausal })
        .collect();
    Ok(Prediction { labels, probabilities })
}

/// Binary confusion counts, class 1 (causal) as positive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Confusion {
    pub tn: usize,
    pub fp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
    pub tp: usize,
}

impl Confusion {
    /// Samples predicted as `class`, and how many of those are right.
    pub fn predicted(&self, class: Label) -> (usize, usize) {
        match class {
            Label::Causal => (self.tp + self.fp, self.tp),
            Label::NonCausal => (self.tn + self.fn_, self.tn),
        }
    }

    pub fn support(&self, class: Label) -> usize {
        match class {
            Label::Causal => self.tp + self.fn_,
            Label::NonCausal => self.tn + self.fp,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassMetrics {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub support: usize,
}

/// Per-class metrics; a class absent from the truth is `None` (reported NA).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassReport {
    pub class0: Option<ClassMetrics>,
    pub class1: Option<ClassMetrics>,
    pub accuracy: f64,
    pub confusion: Confusion,
}

impl ClassReport {
    pub fn class(&self, label: Label) -> Option<&ClassMetrics> {
        match label {
            Label::NonCausal => self.class0.as_ref(),
            Label::Causal => self.class1.as_ref(),
        }
    }
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

fn class_metrics(confusion: &Confusion, class: Label) -> Option<ClassMetrics> {
    let support = confusion.support(class);
    if support == 0 {
        return None;
    }
    let (predicted, correct) = confusion.predicted(class);
    let precision = ratio(correct, predicted);
    let recall = ratio(correct, support);
    let f1 = if precision + recall == 0.0 { 0.0 } else { 2.0 * precision * recall / (precision + recall) };
    Some(ClassMetrics { precision, recall, f1, support })
}

pub fn evaluate(pred: &[Label], truth: &[Label]) -> Result<ClassReport, ClassifyError> {
    if pred.len() != truth.len() {
        return Err(ClassifyError::LengthMismatch { predicted: pred.len(), truth: truth.len() });
    }
    if pred.is_empty() {
        return Err(ClassifyError::Empty);
    }
    let mut c = Confusion::default();
    for (&p, &t) in pred.iter().zip(truth) {
        match (t, p) {
            (Label::NonCausal, Label::NonCausal) => c.tn += 1,
            (Label::NonCausal, Label::Causal) => c.fp += 1,
            (Label::Causal, Label::NonCausal) => c.fn_ += 1,
            (Label::Causal, Label::Causal) => c.tp += 1,
        }
    }
    Ok(ClassReport {
        class0: class_metrics(&c, Label::NonCausal),
        class1: class_metrics(&c, Label::Causal),
        accuracy: ratio(c.tn + c.tp, pred.len()),
        confusion: c,
    })
}
