//! CART classification tree: exact greedy splits over midpoints between
//! consecutive distinct feature values, gini or entropy impurity, leaves
//! holding class-frequency distributions.

use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seeding;
use crate::tabular::LabeledDataset;

/// One tree node. Rows with `x[feature] <= threshold` route left.
/// Classification leaves hold probability distributions; boosting trees
/// reuse the same shape with single-element raw-score leaves.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum TreeNode {
    Split {
        feature: usize,
        threshold: f64,
        left: Box<TreeNode>,
        right: Box<TreeNode>,
    },
    Leaf {
        values: Vec<f64>,
    },
}

impl TreeNode {
    /// Routes one row to its leaf values.
    pub fn route<'a>(&'a self, row: &[f64]) -> &'a [f64] {
        let mut node = self;
        loop {
            match node {
                TreeNode::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    node = if row[*feature] <= *threshold { left } else { right };
                }
                TreeNode::Leaf { values } => return values,
            }
        }
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            TreeNode::Leaf { .. } => 1,
            TreeNode::Split { left, right, .. } => left.leaf_count() + right.leaf_count(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Criterion {
    Gini,
    Entropy,
}

impl Criterion {
    fn impurity(&self, counts: &[usize], total: f64) -> f64 {
        match self {
            Criterion::Gini => {
                1.0 - counts
                    .iter()
                    .map(|&c| {
                        let p = c as f64 / total;
                        p * p
                    })
                    .sum::<f64>()
            }
            Criterion::Entropy => counts
                .iter()
                .filter(|&&c| c > 0)
                .map(|&c| {
                    let p = c as f64 / total;
                    -p * p.log2()
                })
                .sum(),
        }
    }
}

/// Gini impurity `1 − Σ pᵢ²` of a class-count vector.
pub fn gini(counts: &[usize]) -> Result<f64> {
    let total: usize = counts.iter().sum();
    if total == 0 {
        return Err(Error::invalid_data("impurity of all-zero counts is undefined"));
    }
    Ok(Criterion::Gini.impurity(counts, total as f64))
}

/// Shannon entropy (base 2) of a class-count vector.
pub fn entropy(counts: &[usize]) -> Result<f64> {
    let total: usize = counts.iter().sum();
    if total == 0 {
        return Err(Error::invalid_data("impurity of all-zero counts is undefined"));
    }
    Ok(Criterion::Entropy.impurity(counts, total as f64))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TreeParams {
    /// 0 collapses the tree to a single prior leaf.
    pub max_depth: usize,
    pub min_samples_leaf: usize,
    pub criterion: Criterion,
    /// Fraction of features drawn as split candidates at each node.
    pub feature_subsample: f64,
}

impl Default for TreeParams {
    fn default() -> Self {
        TreeParams {
            max_depth: 8,
            min_samples_leaf: 5,
            criterion: Criterion::Gini,
            feature_subsample: 1.0,
        }
    }
}

impl TreeParams {
    pub fn validate(&self) -> Result<()> {
        if self.min_samples_leaf == 0 {
            return Err(Error::invalid_param("min_samples_leaf must be at least 1"));
        }
        if !self.feature_subsample.is_finite()
            || self.feature_subsample <= 0.0
            || self.feature_subsample > 1.0
        {
            return Err(Error::invalid_param(format!(
                "feature_subsample must lie in (0, 1], got {}",
                self.feature_subsample
            )));
        }
        Ok(())
    }

    pub(crate) fn candidate_count(&self, n_features: usize) -> usize {
        ((self.feature_subsample * n_features as f64).ceil() as usize).clamp(1, n_features)
    }
}

/// Winning split of one node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Split {
    pub feature: usize,
    pub threshold: f64,
    pub decrease: f64,
}

/// Exhaustive scan over the candidate features: thresholds are midpoints
/// between consecutive distinct values, the winner maximizes the weighted
/// impurity decrease, ties go to the lowest feature index then the lowest
/// threshold. Returns `None` when no split has positive decrease or every
/// split would leave a child below `min_samples_leaf`.
pub fn best_split(
    features: &[Vec<f64>],
    labels: &[usize],
    rows: &[usize],
    candidates: &[usize],
    n_classes: usize,
    criterion: Criterion,
    min_samples_leaf: usize,
) -> Option<Split> {
    let n = rows.len();
    if n < 2 * min_samples_leaf {
        return None;
    }
    let mut parent_counts = vec![0usize; n_classes];
    for &r in rows {
        parent_counts[labels[r]] += 1;
    }
    let nf = n as f64;
    let parent_impurity = criterion.impurity(&parent_counts, nf);

    let mut best: Option<Split> = None;
    let mut best_decrease = 0.0;
    let mut left_counts = vec![0usize; n_classes];
    let mut right_counts = vec![0usize; n_classes];
    for &f in candidates {
        let mut vals: Vec<(f64, usize)> =
            rows.iter().map(|&r| (features[r][f], labels[r])).collect();
        vals.sort_unstable_by(|a, b| a.0.partial_cmp(&b.0).expect("finite features"));
        left_counts.iter_mut().for_each(|c| *c = 0);
        for i in 0..n - 1 {
            left_counts[vals[i].1] += 1;
            if vals[i + 1].0 <= vals[i].0 {
                continue;
            }
            let n_left = i + 1;
            let n_right = n - n_left;
            if n_left < min_samples_leaf || n_right < min_samples_leaf {
                continue;
            }
            for (r, (&p, &l)) in right_counts
                .iter_mut()
                .zip(parent_counts.iter().zip(&left_counts))
            {
                *r = p - l;
            }
            let decrease = parent_impurity
                - (n_left as f64 / nf) * criterion.impurity(&left_counts, n_left as f64)
                - (n_right as f64 / nf) * criterion.impurity(&right_counts, n_right as f64);
            if decrease > best_decrease {
                best_decrease = decrease;
                best = Some(Split {
                    feature: f,
                    threshold: (vals[i].0 + vals[i + 1].0) / 2.0,
                    decrease,
                });
            }
        }
    }
    best
}

fn leaf_from_counts(counts: &[usize]) -> TreeNode {
    let total: usize = counts.iter().sum();
    TreeNode::Leaf {
        values: counts.iter().map(|&c| c as f64 / total as f64).collect(),
    }
}

#[allow(clippy::too_many_arguments)]
pub(crate) fn grow_classification_tree(
    features: &[Vec<f64>],
    labels: &[usize],
    rows: Vec<usize>,
    n_classes: usize,
    params: &TreeParams,
    n_candidates: usize,
    depth: usize,
    rng: &mut ChaCha8Rng,
) -> TreeNode {
    let mut counts = vec![0usize; n_classes];
    for &r in &rows {
        counts[labels[r]] += 1;
    }
    let pure = counts.iter().filter(|&&c| c > 0).count() <= 1;
    if depth >= params.max_depth || pure || rows.len() < 2 * params.min_samples_leaf {
        return leaf_from_counts(&counts);
    }
    let d = features[rows[0]].len();
    let candidates: Vec<usize> = if n_candidates >= d {
        (0..d).collect()
    } else {
        let mut sampled = rand::seq::index::sample(rng, d, n_candidates).into_vec();
        sampled.sort_unstable();
        sampled
    };
    match best_split(
        features,
        labels,
        &rows,
        &candidates,
        n_classes,
        params.criterion,
        params.min_samples_leaf,
    ) {
        None => leaf_from_counts(&counts),
        Some(split) => {
            let (left_rows, right_rows): (Vec<usize>, Vec<usize>) = rows
                .into_iter()
                .partition(|&r| features[r][split.feature] <= split.threshold);
            TreeNode::Split {
                feature: split.feature,
                threshold: split.threshold,
                left: Box::new(grow_classification_tree(
                    features,
                    labels,
                    left_rows,
                    n_classes,
                    params,
                    n_candidates,
                    depth + 1,
                    rng,
                )),
                right: Box::new(grow_classification_tree(
                    features,
                    labels,
                    right_rows,
                    n_classes,
                    params,
                    n_candidates,
                    depth + 1,
                    rng,
                )),
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeModel {
    pub root: TreeNode,
    pub params: TreeParams,
    pub n_classes: usize,
    pub n_features: usize,
}

/// Fits a single CART tree by recursive greedy growth.
pub fn fit_tree(train: &LabeledDataset, params: &TreeParams, seed: u64) -> Result<TreeModel> {
    if train.n_rows() == 0 {
        return Err(Error::invalid_data("cannot fit a tree on an empty dataset"));
    }
    params.validate()?;
    let mut rng = seeding::task_rng(seed, 0);
    let n_candidates = params.candidate_count(train.n_features());
    let root = grow_classification_tree(
        &train.features,
        &train.labels,
        (0..train.n_rows()).collect(),
        train.n_classes(),
        params,
        n_candidates,
        0,
        &mut rng,
    );
    Ok(TreeModel {
        root,
        params: *params,
        n_classes: train.n_classes(),
        n_features: train.n_features(),
    })
}

/// Per-row leaf distributions.
pub fn predict_tree(model: &TreeModel, rows: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    for row in rows {
        if row.len() != model.n_features {
            return Err(Error::invalid_data(format!(
                "expected {} features, got {}",
                model.n_features,
                row.len()
            )));
        }
    }
    Ok(rows.iter().map(|r| model.root.route(r).to_vec()).collect())
}
