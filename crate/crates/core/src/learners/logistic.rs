//! Multinomial softmax regression trained by full-batch gradient descent on
//! the mean cross-entropy, no regularization. Features are standardized with
//! train-set statistics; the bias sits in the last weight column.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tabular::LabeledDataset;

use super::gbdt::softmax;
use super::knn::{standardization_stats, standardize_row};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogisticParams {
    pub step_size: f64,
    pub max_iters: usize,
    /// Stop when the gradient max-norm drops below this.
    pub tolerance: f64,
}

impl Default for LogisticParams {
    fn default() -> Self {
        LogisticParams {
            step_size: 0.1,
            max_iters: 500,
            tolerance: 1e-6,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogisticModel {
    /// n_classes × (d + 1); bias last.
    pub weights: Vec<Vec<f64>>,
    pub mean: Vec<f64>,
    pub std: Vec<f64>,
    pub n_classes: usize,
}

fn logits(weights: &[Vec<f64>], row: &[f64]) -> Vec<f64> {
    weights
        .iter()
        .map(|w| {
            let dot: f64 = w[..row.len()].iter().zip(row).map(|(a, b)| a * b).sum();
            dot + w[row.len()]
        })
        .collect()
}

/// Mean cross-entropy over standardized rows; the finite-difference oracle
/// differentiates this directly.
#[cfg(test)]
fn loss(weights: &[Vec<f64>], rows: &[Vec<f64>], labels: &[usize]) -> f64 {
    rows.iter()
        .zip(labels)
        .map(|(row, &y)| {
            let probs = softmax(&logits(weights, row));
            -probs[y].ln()
        })
        .sum::<f64>()
        / labels.len() as f64
}

/// Analytic gradient of the mean cross-entropy: `(1/n) Σ (p − y) ⊗ [x, 1]`.
fn gradient(weights: &[Vec<f64>], rows: &[Vec<f64>], labels: &[usize]) -> Vec<Vec<f64>> {
    let n_classes = weights.len();
    let width = weights[0].len();
    let mut grad = vec![vec![0.0; width]; n_classes];
    for (row, &y) in rows.iter().zip(labels) {
        let probs = softmax(&logits(weights, row));
        for (k, g_row) in grad.iter_mut().enumerate() {
            let delta = probs[k] - f64::from(k == y);
            for (g, x) in g_row[..row.len()].iter_mut().zip(row) {
                *g += delta * x;
            }
            g_row[width - 1] += delta;
        }
    }
    let n = labels.len() as f64;
    for g_row in grad.iter_mut() {
        for g in g_row.iter_mut() {
            *g /= n;
        }
    }
    grad
}

pub fn fit_logistic(train: &LabeledDataset, params: &LogisticParams) -> Result<LogisticModel> {
    if train.n_rows() == 0 {
        return Err(Error::invalid_data("cannot fit logistic regression on an empty dataset"));
    }
    if !params.step_size.is_finite() || params.step_size <= 0.0 {
        return Err(Error::invalid_param("step_size must be positive"));
    }
    let (mean, std) = standardization_stats(&train.features, train.n_features());
    let rows: Vec<Vec<f64>> = train
        .features
        .iter()
        .map(|r| standardize_row(r, &mean, &std))
        .collect();
    let mut weights = vec![vec![0.0; train.n_features() + 1]; train.n_classes()];
    for _ in 0..params.max_iters {
        let grad = gradient(&weights, &rows, &train.labels);
        let max_norm = grad
            .iter()
            .flatten()
            .fold(0.0f64, |acc, g| acc.max(g.abs()));
        if max_norm < params.tolerance {
            break;
        }
        for (w_row, g_row) in weights.iter_mut().zip(&grad) {
            for (w, g) in w_row.iter_mut().zip(g_row) {
                *w -= params.step_size * g;
            }
        }
    }
    Ok(LogisticModel {
        weights,
        mean,
        std,
        n_classes: train.n_classes(),
    })
}

pub fn predict_logistic(model: &LogisticModel, rows: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    for row in rows {
        if row.len() != model.mean.len() {
            return Err(Error::invalid_data(format!(
                "expected {} features, got {}",
                model.mean.len(),
                row.len()
            )));
        }
    }
    Ok(rows
        .iter()
        .map(|row| softmax(&logits(&model.weights, &standardize_row(row, &model.mean, &model.std))))
        .collect())
}
