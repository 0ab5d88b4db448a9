//! Gradient-boosted decision trees with a softmax objective.
//!
//! One regression tree per class per round. Gradients and hessians come from
//! the second-order expansion of the multiclass cross-entropy; split gain and
//! leaf weights use L1/L2 regularization:
//!
//! gain = ½·(G_L²/(H_L+λ) + G_R²/(H_R+λ) − (G_L+G_R)²/(H_L+H_R+λ)) − γ,
//! w* = −soft_threshold(G, α)/(H + λ).
//!
//! Trees grow level-wise by default; setting `max_leaves` switches to
//! best-first (leaf-wise) growth with the same split scoring.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tabular::LabeledDataset;

use super::tree::TreeNode;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GbdtParams {
    pub n_rounds: usize,
    pub learning_rate: f64,
    /// L2 penalty on leaf weights.
    pub lambda: f64,
    /// L1 penalty on leaf weights.
    pub alpha: f64,
    /// Flat penalty per split; a split must clear it to be accepted.
    pub gamma: f64,
    pub max_depth: usize,
    pub min_samples_leaf: usize,
    /// When set, trees grow best-first up to this many leaves.
    pub max_leaves: Option<usize>,
}

impl Default for GbdtParams {
    fn default() -> Self {
        GbdtParams {
            n_rounds: 100,
            learning_rate: 0.1,
            lambda: 1.0,
            alpha: 0.0,
            gamma: 0.0,
            max_depth: 6,
            min_samples_leaf: 1,
            max_leaves: None,
        }
    }
}

impl GbdtParams {
    pub fn validate(&self) -> Result<()> {
        if !self.learning_rate.is_finite() || self.learning_rate <= 0.0 || self.learning_rate > 1.0 {
            return Err(Error::invalid_param(format!(
                "learning_rate must lie in (0, 1], got {}",
                self.learning_rate
            )));
        }
        if self.lambda < 0.0 || self.alpha < 0.0 || self.gamma < 0.0 {
            return Err(Error::invalid_param(
                "lambda, alpha and gamma must be nonnegative",
            ));
        }
        if self.min_samples_leaf == 0 {
            return Err(Error::invalid_param("min_samples_leaf must be at least 1"));
        }
        if self.max_leaves == Some(0) {
            return Err(Error::invalid_param("max_leaves must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoostModel {
    /// rounds[r][k] is round r's tree for class k; leaves hold raw scores.
    pub rounds: Vec<Vec<TreeNode>>,
    pub params: GbdtParams,
    /// Log class priors.
    pub base_score: Vec<f64>,
    pub n_classes: usize,
    pub n_features: usize,
    /// Mean training cross-entropy, entry 0 before any round.
    pub train_loss: Vec<f64>,
}

/// Numerically stable softmax.
pub fn softmax(scores: &[f64]) -> Vec<f64> {
    let max = scores.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let exps: Vec<f64> = scores.iter().map(|s| (s - max).exp()).collect();
    let sum: f64 = exps.iter().sum();
    exps.into_iter().map(|e| e / sum).collect()
}

/// Cross-entropy −ln p_label of one row's raw scores.
pub fn cross_entropy(scores: &[f64], label: usize) -> f64 {
    let max = scores.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let log_sum: f64 = scores.iter().map(|s| (s - max).exp()).sum::<f64>().ln();
    log_sum - (scores[label] - max)
}

/// Per-class gradient `p_k − 1[y=k]` and diagonal hessian `p_k (1 − p_k)`
/// of the softmax cross-entropy at one row's raw scores.
pub fn softmax_gradient_hessian(scores: &[f64], label: usize) -> (Vec<f64>, Vec<f64>) {
    let probs = softmax(scores);
    let grad: Vec<f64> = probs
        .iter()
        .enumerate()
        .map(|(k, p)| p - f64::from(k == label))
        .collect();
    let hess: Vec<f64> = probs.iter().map(|p| p * (1.0 - p)).collect();
    (grad, hess)
}

fn soft_threshold(g: f64, alpha: f64) -> f64 {
    g.signum() * (g.abs() - alpha).max(0.0)
}

/// Regularized leaf optimum `w* = −soft_threshold(G, α)/(H + λ)`.
pub fn leaf_weight(g_sum: f64, h_sum: f64, lambda: f64, alpha: f64) -> f64 {
    -soft_threshold(g_sum, alpha) / (h_sum + lambda)
}

fn score_term(g: f64, h: f64, lambda: f64) -> f64 {
    g * g / (h + lambda)
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct GainSplit {
    feature: usize,
    threshold: f64,
    gain: f64,
}

/// Exact greedy gain scan; ties go to the lowest feature index then the
/// lowest threshold. Returns `None` unless some admissible split has
/// strictly positive gain.
fn best_gain_split(
    features: &[Vec<f64>],
    grad: &[f64],
    hess: &[f64],
    rows: &[usize],
    params: &GbdtParams,
) -> Option<GainSplit> {
    let n = rows.len();
    if n < 2 * params.min_samples_leaf {
        return None;
    }
    let g_total: f64 = rows.iter().map(|&r| grad[r]).sum();
    let h_total: f64 = rows.iter().map(|&r| hess[r]).sum();
    let parent_term = score_term(g_total, h_total, params.lambda);
    let d = features[rows[0]].len();

    let mut best: Option<GainSplit> = None;
    let mut best_gain = 0.0;
    for f in 0..d {
        let mut vals: Vec<(f64, f64, f64)> = rows
            .iter()
            .map(|&r| (features[r][f], grad[r], hess[r]))
            .collect();
        vals.sort_unstable_by(|a, b| a.0.partial_cmp(&b.0).expect("finite features"));
        let mut g_left = 0.0;
        let mut h_left = 0.0;
        for i in 0..n - 1 {
            g_left += vals[i].1;
            h_left += vals[i].2;
            if vals[i + 1].0 <= vals[i].0 {
                continue;
            }
            let n_left = i + 1;
            let n_right = n - n_left;
            if n_left < params.min_samples_leaf || n_right < params.min_samples_leaf {
                continue;
            }
            let gain = 0.5
                * (score_term(g_left, h_left, params.lambda)
                    + score_term(g_total - g_left, h_total - h_left, params.lambda)
                    - parent_term)
                - params.gamma;
            if gain > best_gain {
                best_gain = gain;
                best = Some(GainSplit {
                    feature: f,
                    threshold: (vals[i].0 + vals[i + 1].0) / 2.0,
                    gain,
                });
            }
        }
    }
    best
}

fn leaf_of(rows: &[usize], grad: &[f64], hess: &[f64], params: &GbdtParams) -> TreeNode {
    let g: f64 = rows.iter().map(|&r| grad[r]).sum();
    let h: f64 = rows.iter().map(|&r| hess[r]).sum();
    TreeNode::Leaf {
        values: vec![leaf_weight(g, h, params.lambda, params.alpha)],
    }
}

fn grow_level_wise(
    features: &[Vec<f64>],
    grad: &[f64],
    hess: &[f64],
    rows: Vec<usize>,
    depth: usize,
    params: &GbdtParams,
) -> TreeNode {
    if depth >= params.max_depth {
        return leaf_of(&rows, grad, hess, params);
    }
    match best_gain_split(features, grad, hess, &rows, params) {
        None => leaf_of(&rows, grad, hess, params),
        Some(split) => {
            let (left, right): (Vec<usize>, Vec<usize>) = rows
                .into_iter()
                .partition(|&r| features[r][split.feature] <= split.threshold);
            TreeNode::Split {
                feature: split.feature,
                threshold: split.threshold,
                left: Box::new(grow_level_wise(features, grad, hess, left, depth + 1, params)),
                right: Box::new(grow_level_wise(features, grad, hess, right, depth + 1, params)),
            }
        }
    }
}

struct PendingLeaf {
    rows: Vec<usize>,
    depth: usize,
}

enum BuildSlot {
    Pending(PendingLeaf),
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
}

/// Best-first growth: repeatedly split the pending leaf with the highest
/// gain until `max_leaves` is reached or no pending leaf has positive gain.
/// Gain ties resolve toward the earliest-created leaf.
fn grow_leaf_wise(
    features: &[Vec<f64>],
    grad: &[f64],
    hess: &[f64],
    rows: Vec<usize>,
    params: &GbdtParams,
    max_leaves: usize,
) -> TreeNode {
    let mut slots: Vec<BuildSlot> = vec![BuildSlot::Pending(PendingLeaf { rows, depth: 0 })];
    // Outer None = not evaluated yet; inner None = no admissible split.
    let mut cached: Vec<Option<Option<GainSplit>>> = vec![None];
    let mut n_leaves = 1;
    while n_leaves < max_leaves {
        for id in 0..slots.len() {
            if cached[id].is_some() {
                continue;
            }
            let split = match &slots[id] {
                BuildSlot::Pending(p) if p.depth < params.max_depth => {
                    best_gain_split(features, grad, hess, &p.rows, params)
                }
                _ => None,
            };
            cached[id] = Some(split);
        }
        let next = (0..slots.len())
            .filter(|&id| matches!(slots[id], BuildSlot::Pending(_)))
            .filter_map(|id| cached[id].flatten().map(|s| (id, s)))
            .max_by(|a, b| {
                a.1.gain
                    .partial_cmp(&b.1.gain)
                    .expect("finite gains")
                    .then(b.0.cmp(&a.0))
            });
        let Some((id, split)) = next else { break };
        let BuildSlot::Pending(pending) = std::mem::replace(
            &mut slots[id],
            BuildSlot::Split {
                feature: split.feature,
                threshold: split.threshold,
                left: usize::MAX,
                right: usize::MAX,
            },
        ) else {
            unreachable!("chosen slot is pending");
        };
        let (left_rows, right_rows): (Vec<usize>, Vec<usize>) = pending
            .rows
            .into_iter()
            .partition(|&r| features[r][split.feature] <= split.threshold);
        let left_id = slots.len();
        slots.push(BuildSlot::Pending(PendingLeaf {
            rows: left_rows,
            depth: pending.depth + 1,
        }));
        cached.push(None);
        let right_id = slots.len();
        slots.push(BuildSlot::Pending(PendingLeaf {
            rows: right_rows,
            depth: pending.depth + 1,
        }));
        cached.push(None);
        if let BuildSlot::Split { left, right, .. } = &mut slots[id] {
            *left = left_id;
            *right = right_id;
        }
        n_leaves += 1;
    }
    fn assemble(
        slots: &[BuildSlot],
        id: usize,
        grad: &[f64],
        hess: &[f64],
        params: &GbdtParams,
    ) -> TreeNode {
        match &slots[id] {
            BuildSlot::Pending(p) => leaf_of(&p.rows, grad, hess, params),
            BuildSlot::Split {
                feature,
                threshold,
                left,
                right,
            } => TreeNode::Split {
                feature: *feature,
                threshold: *threshold,
                left: Box::new(assemble(slots, *left, grad, hess, params)),
                right: Box::new(assemble(slots, *right, grad, hess, params)),
            },
        }
    }
    assemble(&slots, 0, grad, hess, params)
}

fn mean_cross_entropy(scores: &[Vec<f64>], labels: &[usize]) -> f64 {
    scores
        .iter()
        .zip(labels)
        .map(|(s, &y)| cross_entropy(s, y))
        .sum::<f64>()
        / labels.len() as f64
}

/// Fits the boosted ensemble. Training is deterministic: no subsampling, so
/// the seed parameter is accepted for interface uniformity and ignored.
pub fn fit_gbdt(train: &LabeledDataset, params: &GbdtParams, _seed: u64) -> Result<BoostModel> {
    if train.n_rows() == 0 {
        return Err(Error::invalid_data("cannot fit GBDT on an empty dataset"));
    }
    params.validate()?;
    let n = train.n_rows();
    let n_classes = train.n_classes();
    if n_classes < 2 {
        return Err(Error::invalid_data("GBDT needs at least 2 classes"));
    }
    let counts = train.class_counts();
    for (class, &count) in counts.iter().enumerate() {
        if count == 0 {
            return Err(Error::invalid_data(format!(
                "class '{}' absent from training data",
                train.class_names[class]
            )));
        }
    }
    let base_score: Vec<f64> = counts
        .iter()
        .map(|&c| (c as f64 / n as f64).ln())
        .collect();

    let mut scores: Vec<Vec<f64>> = vec![base_score.clone(); n];
    let mut train_loss = vec![mean_cross_entropy(&scores, &train.labels)];
    let mut rounds = Vec::with_capacity(params.n_rounds);
    for _ in 0..params.n_rounds {
        let probs: Vec<Vec<f64>> = scores.iter().map(|s| softmax(s)).collect();
        let round_trees: Vec<TreeNode> = (0..n_classes)
            .into_par_iter()
            .map(|k| {
                let grad: Vec<f64> = (0..n)
                    .map(|i| probs[i][k] - f64::from(train.labels[i] == k))
                    .collect();
                let hess: Vec<f64> = (0..n).map(|i| probs[i][k] * (1.0 - probs[i][k])).collect();
                let rows: Vec<usize> = (0..n).collect();
                match params.max_leaves {
                    Some(max_leaves) => {
                        grow_leaf_wise(&train.features, &grad, &hess, rows, params, max_leaves)
                    }
                    None => grow_level_wise(&train.features, &grad, &hess, rows, 0, params),
                }
            })
            .collect();
        for (k, tree) in round_trees.iter().enumerate() {
            for (i, row) in train.features.iter().enumerate() {
                scores[i][k] += params.learning_rate * tree.route(row)[0];
            }
        }
        rounds.push(round_trees);
        train_loss.push(mean_cross_entropy(&scores, &train.labels));
    }
    Ok(BoostModel {
        rounds,
        params: *params,
        base_score,
        n_classes,
        n_features: train.n_features(),
        train_loss,
    })
}

/// Raw scores `base + Σ η·leaf` put through a softmax, row by row.
pub fn predict_gbdt(model: &BoostModel, rows: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    for row in rows {
        if row.len() != model.n_features {
            return Err(Error::invalid_data(format!(
                "expected {} features, got {}",
                model.n_features,
                row.len()
            )));
        }
    }
    Ok(rows
        .iter()
        .map(|row| {
            let mut scores = model.base_score.clone();
            for round in &model.rounds {
                for (k, tree) in round.iter().enumerate() {
                    scores[k] += model.params.learning_rate * tree.route(row)[0];
                }
            }
            softmax(&scores)
        })
        .collect())
}
