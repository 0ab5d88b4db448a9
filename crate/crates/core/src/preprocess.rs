//! Row-level transforms applied before training: z-score noise removal, IQR
//! outlier removal, random oversampling, and stratified splitting.
//!
//! Both filters are split into a fit step that computes per-column bounds
//! once on the input and an apply step that drops violating rows, so the
//! same fitted bounds can be replayed (applying fitted bounds twice is
//! exactly idempotent).

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seeding;
use crate::tabular::LabeledDataset;

/// Before/after bookkeeping for one filtering or resampling pass.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct FilterSummary {
    pub rows_before: usize,
    pub rows_after: usize,
    /// Rows introduced by resampling stages (0 for plain filters).
    pub rows_added: usize,
    /// Per-column violation counts; a row can violate several columns.
    pub removed_by_column: BTreeMap<String, usize>,
    pub notes: Vec<String>,
}

impl FilterSummary {
    /// Flat `key=value` rendering, one line per entry.
    pub fn to_key_value(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("rows_before={}\n", self.rows_before));
        out.push_str(&format!("rows_after={}\n", self.rows_after));
        out.push_str(&format!("rows_added={}\n", self.rows_added));
        for (col, n) in &self.removed_by_column {
            out.push_str(&format!("removed.{col}={n}\n"));
        }
        for note in &self.notes {
            out.push_str(&format!("note={note}\n"));
        }
        out
    }
}

/// Closed keep-interval for one feature column; values outside are dropped.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColumnBounds {
    pub column: String,
    pub lower: f64,
    pub upper: f64,
}

/// Per-column bounds fitted once on a dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FittedBounds {
    pub bounds: Vec<ColumnBounds>,
    pub notes: Vec<String>,
}

fn resolve_columns<'a>(ds: &'a LabeledDataset, columns: Option<&[String]>) -> Result<Vec<&'a str>> {
    match columns {
        None => Ok(ds.feature_names.iter().map(String::as_str).collect()),
        Some(names) => {
            let mut out = Vec::with_capacity(names.len());
            for name in names {
                let idx = ds.feature_index(name)?;
                out.push(ds.feature_names[idx].as_str());
            }
            Ok(out)
        }
    }
}

fn column_values(ds: &LabeledDataset, index: usize) -> Vec<f64> {
    ds.features.iter().map(|row| row[index]).collect()
}

/// Fits z-score keep-bounds `[μ − t·σ, μ + t·σ]` per selected column, with σ
/// the population standard deviation (divisor N). Zero-spread columns are
/// skipped with a note.
pub fn fit_zscore_bounds(
    ds: &LabeledDataset,
    threshold: f64,
    columns: Option<&[String]>,
) -> Result<FittedBounds> {
    if ds.n_rows() == 0 {
        return Err(Error::invalid_data("z-score filter: empty dataset"));
    }
    if !threshold.is_finite() || threshold <= 0.0 {
        return Err(Error::invalid_param(format!(
            "z-score threshold must be positive, got {threshold}"
        )));
    }
    let mut bounds = Vec::new();
    let mut notes = Vec::new();
    for name in resolve_columns(ds, columns)? {
        let idx = ds.feature_index(name)?;
        let values = column_values(ds, idx);
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
        let std = var.sqrt();
        if std == 0.0 {
            notes.push(format!("column '{name}' skipped: zero standard deviation"));
            continue;
        }
        bounds.push(ColumnBounds {
            column: name.to_string(),
            lower: mean - threshold * std,
            upper: mean + threshold * std,
        });
    }
    Ok(FittedBounds { bounds, notes })
}

/// Linear-interpolation quantile at position `p·(n−1)` over a sorted slice.
fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    let n = sorted.len();
    if n == 1 {
        return sorted[0];
    }
    let pos = p * (n as f64 - 1.0);
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let frac = pos - lo as f64;
    sorted[lo] + frac * (sorted[hi] - sorted[lo])
}

/// Fits IQR keep-bounds `[Q1 − m·IQR, Q3 + m·IQR]` per selected column.
pub fn fit_iqr_bounds(
    ds: &LabeledDataset,
    multiplier: f64,
    columns: Option<&[String]>,
) -> Result<FittedBounds> {
    if ds.n_rows() == 0 {
        return Err(Error::invalid_data("IQR filter: empty dataset"));
    }
    if !multiplier.is_finite() || multiplier <= 0.0 {
        return Err(Error::invalid_param(format!(
            "IQR multiplier must be positive, got {multiplier}"
        )));
    }
    let mut bounds = Vec::new();
    for name in resolve_columns(ds, columns)? {
        let idx = ds.feature_index(name)?;
        let mut values = column_values(ds, idx);
        values.sort_by(|a, b| a.partial_cmp(b).expect("finite features"));
        let q1 = quantile_sorted(&values, 0.25);
        let q3 = quantile_sorted(&values, 0.75);
        let iqr = q3 - q1;
        bounds.push(ColumnBounds {
            column: name.to_string(),
            lower: q1 - multiplier * iqr,
            upper: q3 + multiplier * iqr,
        });
    }
    Ok(FittedBounds {
        bounds,
        notes: Vec::new(),
    })
}

/// Drops every row with a value outside any fitted bound (bounds inclusive:
/// values equal to a bound are kept). Labels travel with their rows and the
/// surviving row order equals the input order.
pub fn apply_bounds(ds: &LabeledDataset, fitted: &FittedBounds) -> Result<(LabeledDataset, FilterSummary)> {
    let mut removed_by_column: BTreeMap<String, usize> = BTreeMap::new();
    let mut keep = Vec::with_capacity(ds.n_rows());
    let indices: Vec<usize> = fitted
        .bounds
        .iter()
        .map(|b| ds.feature_index(&b.column))
        .collect::<Result<_>>()?;
    for (row_idx, row) in ds.features.iter().enumerate() {
        let mut violated = false;
        for (bound, &col_idx) in fitted.bounds.iter().zip(&indices) {
            let v = row[col_idx];
            if v < bound.lower || v > bound.upper {
                violated = true;
                *removed_by_column.entry(bound.column.clone()).or_insert(0) += 1;
            }
        }
        if !violated {
            keep.push(row_idx);
        }
    }
    let out = ds.select_rows(&keep);
    let summary = FilterSummary {
        rows_before: ds.n_rows(),
        rows_after: out.n_rows(),
        rows_added: 0,
        removed_by_column,
        notes: fitted.notes.clone(),
    };
    Ok((out, summary))
}

/// One-pass z-score noise removal: a row is removed iff `|x − μ| / σ`
/// exceeds the threshold in any selected column, with μ and σ computed once
/// on the input.
pub fn zscore_filter(
    ds: &LabeledDataset,
    threshold: f64,
    columns: Option<&[String]>,
) -> Result<(LabeledDataset, FilterSummary)> {
    let fitted = fit_zscore_bounds(ds, threshold, columns)?;
    apply_bounds(ds, &fitted)
}

/// One-pass IQR outlier removal with bounds computed once on the input.
pub fn iqr_filter(
    ds: &LabeledDataset,
    multiplier: f64,
    columns: Option<&[String]>,
) -> Result<(LabeledDataset, FilterSummary)> {
    let fitted = fit_iqr_bounds(ds, multiplier, columns)?;
    apply_bounds(ds, &fitted)
}

/// Balances every class up to the majority count by uniform sampling with
/// replacement from that class's own rows. Original rows are all retained in
/// input order; duplicates are appended grouped by class code.
pub fn random_oversample(ds: &LabeledDataset, seed: u64) -> Result<LabeledDataset> {
    let counts = ds.class_counts();
    if let Some(empty) = counts.iter().position(|&c| c == 0) {
        return Err(Error::invalid_data(format!(
            "class '{}' has no rows to oversample",
            ds.class_names[empty]
        )));
    }
    let majority = *counts.iter().max().expect("non-empty classes");
    let mut indices: Vec<usize> = (0..ds.n_rows()).collect();
    for (class, &count) in counts.iter().enumerate() {
        let class_rows: Vec<usize> = (0..ds.n_rows()).filter(|&i| ds.labels[i] == class).collect();
        let mut rng = seeding::task_rng(seed, class as u64);
        for _ in count..majority {
            indices.push(class_rows[rng.random_range(0..class_rows.len())]);
        }
    }
    Ok(ds.select_rows(&indices))
}

/// Stratified train/test split: per class, `floor(test_fraction · count)`
/// rows go to test, chosen uniformly without replacement. Both sides keep
/// the input's relative row order.
pub fn stratified_split(
    ds: &LabeledDataset,
    test_fraction: f64,
    seed: u64,
) -> Result<(LabeledDataset, LabeledDataset)> {
    if !test_fraction.is_finite() || test_fraction <= 0.0 || test_fraction >= 1.0 {
        return Err(Error::invalid_param(format!(
            "test fraction must lie in (0, 1), got {test_fraction}"
        )));
    }
    let counts = ds.class_counts();
    for (class, &count) in counts.iter().enumerate() {
        if count < 2 {
            return Err(Error::invalid_data(format!(
                "class '{}' has {count} row(s); stratified split needs at least 2",
                ds.class_names[class]
            )));
        }
    }
    let mut test_idx = Vec::new();
    let mut train_idx = Vec::new();
    for class in 0..ds.n_classes() {
        let mut class_rows: Vec<usize> =
            (0..ds.n_rows()).filter(|&i| ds.labels[i] == class).collect();
        let n_test = (test_fraction * class_rows.len() as f64).floor() as usize;
        let mut rng = seeding::task_rng(seed, class as u64);
        class_rows.shuffle(&mut rng);
        test_idx.extend_from_slice(&class_rows[..n_test]);
        train_idx.extend_from_slice(&class_rows[n_test..]);
    }
    test_idx.sort_unstable();
    train_idx.sort_unstable();
    Ok((ds.select_rows(&train_idx), ds.select_rows(&test_idx)))
}
