//! k-nearest-neighbours classifier over standardized features.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::resample::k_nearest;
use crate::tabular::LabeledDataset;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct KnnParams {
    pub k: usize,
}

impl Default for KnnParams {
    fn default() -> Self {
        KnnParams { k: 5 }
    }
}

/// Stores the standardized training matrix; queries are standardized with
/// the same train-set mean/std before the exact neighbour scan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KnnModel {
    pub points: Vec<Vec<f64>>,
    pub labels: Vec<usize>,
    pub k: usize,
    pub mean: Vec<f64>,
    pub std: Vec<f64>,
    pub n_classes: usize,
}

/// Per-feature mean and population standard deviation; zero-spread features
/// get std 1 so standardization leaves them centred but unscaled.
pub(crate) fn standardization_stats(features: &[Vec<f64>], d: usize) -> (Vec<f64>, Vec<f64>) {
    let n = features.len() as f64;
    let mut mean = vec![0.0; d];
    for row in features {
        for (m, v) in mean.iter_mut().zip(row) {
            *m += v;
        }
    }
    mean.iter_mut().for_each(|m| *m /= n);
    let mut var = vec![0.0; d];
    for row in features {
        for ((s, v), m) in var.iter_mut().zip(row).zip(&mean) {
            *s += (v - m) * (v - m);
        }
    }
    let std: Vec<f64> = var
        .iter()
        .map(|s| {
            let sd = (s / n).sqrt();
            if sd == 0.0 {
                1.0
            } else {
                sd
            }
        })
        .collect();
    (mean, std)
}

pub(crate) fn standardize_row(row: &[f64], mean: &[f64], std: &[f64]) -> Vec<f64> {
    row.iter()
        .zip(mean.iter().zip(std))
        .map(|(v, (m, s))| (v - m) / s)
        .collect()
}

pub fn fit_knn(train: &LabeledDataset, params: &KnnParams) -> Result<KnnModel> {
    if train.n_rows() == 0 {
        return Err(Error::invalid_data("cannot fit kNN on an empty dataset"));
    }
    if params.k == 0 || params.k > train.n_rows() {
        return Err(Error::invalid_param(format!(
            "k must lie in 1..={}, got {}",
            train.n_rows(),
            params.k
        )));
    }
    let (mean, std) = standardization_stats(&train.features, train.n_features());
    let points = train
        .features
        .iter()
        .map(|r| standardize_row(r, &mean, &std))
        .collect();
    Ok(KnnModel {
        points,
        labels: train.labels.clone(),
        k: params.k,
        mean,
        std,
        n_classes: train.n_classes(),
    })
}

/// Neighbour label frequencies among the k nearest training rows.
pub fn predict_knn(model: &KnnModel, rows: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    for row in rows {
        if row.len() != model.mean.len() {
            return Err(Error::invalid_data(format!(
                "expected {} features, got {}",
                model.mean.len(),
                row.len()
            )));
        }
    }
    rows.par_iter()
        .map(|row| {
            let query = standardize_row(row, &model.mean, &model.std);
            let neighbors = k_nearest(&model.points, &query, model.k, None)?;
            let mut probs = vec![0.0; model.n_classes];
            for &j in &neighbors {
                probs[model.labels[j]] += 1.0;
            }
            probs.iter_mut().for_each(|p| *p /= model.k as f64);
            Ok(probs)
        })
        .collect()
}
