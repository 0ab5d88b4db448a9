//! Random forest: bagged CART trees with per-split feature subsampling.
//!
//! Trees are fit in parallel; each tree draws its bootstrap sample and split
//! candidates from a sub-seed derived from (master seed, tree index), so
//! parallel and serial training produce identical models.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seeding;
use crate::tabular::LabeledDataset;

use super::tree::{grow_classification_tree, TreeNode, TreeParams};

/// How many features each split considers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeatureMode {
    All,
    /// ⌈√d⌉ features per split; the bagging default.
    Sqrt,
    Fraction(f64),
}

impl FeatureMode {
    fn candidate_count(&self, n_features: usize) -> usize {
        match self {
            FeatureMode::All => n_features,
            FeatureMode::Sqrt => ((n_features as f64).sqrt().ceil() as usize).clamp(1, n_features),
            FeatureMode::Fraction(f) => {
                ((f * n_features as f64).ceil() as usize).clamp(1, n_features)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ForestParams {
    pub n_trees: usize,
    pub bootstrap: bool,
    pub feature_mode: FeatureMode,
}

impl Default for ForestParams {
    fn default() -> Self {
        ForestParams {
            n_trees: 200,
            bootstrap: true,
            feature_mode: FeatureMode::Sqrt,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForestModel {
    pub trees: Vec<TreeNode>,
    pub tree_params: TreeParams,
    pub params: ForestParams,
    pub n_classes: usize,
    pub n_features: usize,
    pub seed: u64,
}

/// Fits `n_trees` trees, each on a bootstrap sample of n rows (unless
/// bootstrap is disabled) with `feature_mode` split candidates.
pub fn fit_forest(
    train: &LabeledDataset,
    tree_params: &TreeParams,
    params: &ForestParams,
    seed: u64,
) -> Result<ForestModel> {
    if params.n_trees == 0 {
        return Err(Error::invalid_param("a forest needs at least one tree"));
    }
    if train.n_rows() == 0 {
        return Err(Error::invalid_data("cannot fit a forest on an empty dataset"));
    }
    tree_params.validate()?;
    let n = train.n_rows();
    let n_candidates = params.feature_mode.candidate_count(train.n_features());
    let trees: Vec<TreeNode> = (0..params.n_trees)
        .into_par_iter()
        .map(|t| {
            let mut rng = seeding::task_rng(seed, t as u64);
            let rows: Vec<usize> = if params.bootstrap {
                (0..n).map(|_| rng.random_range(0..n)).collect()
            } else {
                (0..n).collect()
            };
            grow_classification_tree(
                &train.features,
                &train.labels,
                rows,
                train.n_classes(),
                tree_params,
                n_candidates,
                0,
                &mut rng,
            )
        })
        .collect();
    Ok(ForestModel {
        trees,
        tree_params: *tree_params,
        params: *params,
        n_classes: train.n_classes(),
        n_features: train.n_features(),
        seed,
    })
}

/// Unweighted mean of the per-tree leaf distributions, summed in tree order.
pub fn predict_forest(model: &ForestModel, rows: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    for row in rows {
        if row.len() != model.n_features {
            return Err(Error::invalid_data(format!(
                "expected {} features, got {}",
                model.n_features,
                row.len()
            )));
        }
    }
    let n_trees = model.trees.len() as f64;
    Ok(rows
        .iter()
        .map(|row| {
            let mut acc = vec![0.0; model.n_classes];
            for tree in &model.trees {
                for (a, v) in acc.iter_mut().zip(tree.route(row)) {
                    *a += v;
                }
            }
            acc.iter_mut().for_each(|a| *a /= n_trees);
            acc
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::learners::tree::{fit_tree, predict_tree};
    use crate::synth::{self, SynthConfig};

    fn fixture(seed: u64) -> LabeledDataset {
        synth::gaussian_mixture(&SynthConfig {
            n_rows: 300,
            n_features: 4,
            n_informative: 3,
            class_weights: vec![0.34, 0.33, 0.33],
            separation: 2.2,
            spread: 1.0,
            label_noise: 0.05,
            ordinal_noise: false,
            seed,
            geometry_seed: None,
            clusters_per_class: 2,
            class_names: vec!["a".into(), "b".into(), "c".into()],
        })
        .unwrap()
    }

    #[test]
    fn degenerate_forest_equals_single_tree() {
        let ds = fixture(1);
        let tree_params = TreeParams {
            min_samples_leaf: 1,
            ..TreeParams::default()
        };
        let forest_params = ForestParams {
            n_trees: 1,
            bootstrap: false,
            feature_mode: FeatureMode::All,
        };
        let forest = fit_forest(&ds, &tree_params, &forest_params, 5).unwrap();
        let tree = fit_tree(&ds, &tree_params, 5).unwrap();
        assert_eq!(forest.trees[0], tree.root);
        assert_eq!(
            predict_forest(&forest, &ds.features).unwrap(),
            predict_tree(&tree, &ds.features).unwrap()
        );
    }

    #[test]
    fn predictions_are_distributions() {
        let ds = fixture(2);
        let forest = fit_forest(&ds, &TreeParams::default(), &ForestParams {
            n_trees: 12,
            ..ForestParams::default()
        }, 7)
        .unwrap();
        for p in predict_forest(&forest, &ds.features).unwrap() {
            let sum: f64 = p.iter().sum();
            assert!((sum - 1.0).abs() < 1e-9);
            assert!(p.iter().all(|&v| v >= 0.0));
        }
    }

    #[test]
    fn prediction_invariant_to_tree_order() {
        let ds = fixture(3);
        let mut forest = fit_forest(&ds, &TreeParams::default(), &ForestParams {
            n_trees: 9,
            ..ForestParams::default()
        }, 11)
        .unwrap();
        let before = predict_forest(&forest, &ds.features).unwrap();
        forest.trees.reverse();
        forest.trees.rotate_left(3);
        let after = predict_forest(&forest, &ds.features).unwrap();
        for (a, b) in before.iter().flatten().zip(after.iter().flatten()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn forest_tracks_single_tree_accuracy() {
        // Over five seeds the forest's holdout accuracy stays within 0.02 of
        // a single tree's.
        let mut margins = Vec::new();
        for seed in 0..5 {
            let ds = fixture(100 + seed);
            let (train, test) = crate::preprocess::stratified_split(&ds, 0.3, seed).unwrap();
            let tree_params = TreeParams::default();
            let tree = fit_tree(&train, &tree_params, seed).unwrap();
            let forest = fit_forest(
                &train,
                &tree_params,
                &ForestParams {
                    n_trees: 25,
                    ..ForestParams::default()
                },
                seed,
            )
            .unwrap();
            let acc = |probs: Vec<Vec<f64>>| {
                let correct = probs
                    .iter()
                    .zip(&test.labels)
                    .filter(|(p, &y)| {
                        let am = p
                            .iter()
                            .enumerate()
                            .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
                            .unwrap()
                            .0;
                        am == y
                    })
                    .count();
                correct as f64 / test.n_rows() as f64
            };
            let tree_acc = acc(predict_tree(&tree, &test.features).unwrap());
            let forest_acc = acc(predict_forest(&forest, &test.features).unwrap());
            margins.push(forest_acc - tree_acc);
        }
        for margin in margins {
            assert!(margin >= -0.02, "forest fell behind: margin {margin}");
        }
    }

    #[test]
    fn fit_is_deterministic() {
        let ds = fixture(4);
        let params = ForestParams {
            n_trees: 8,
            ..ForestParams::default()
        };
        let a = fit_forest(&ds, &TreeParams::default(), &params, 21).unwrap();
        let b = fit_forest(&ds, &TreeParams::default(), &params, 21).unwrap();
        assert_eq!(a, b);
    }
}
