//! Base classifiers: CART tree, random forest, gradient-boosted trees, kNN
//! and softmax logistic regression, plus a seeded random baseline.
//!
//! Every fitted model is an immutable value that predicts per-row class
//! probability distributions, serializes to a versioned JSON document, and
//! reproduces bit for bit from (dataset, params, seed).

pub mod forest;
pub mod gbdt;
pub mod knn;
pub mod logistic;
pub mod tree;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tabular::LabeledDataset;

pub use forest::{fit_forest, predict_forest, FeatureMode, ForestModel, ForestParams};
pub use gbdt::{
    cross_entropy, fit_gbdt, leaf_weight, predict_gbdt, softmax, softmax_gradient_hessian,
    BoostModel, GbdtParams,
};
pub use knn::{fit_knn, predict_knn, KnnModel, KnnParams};
pub use logistic::{fit_logistic, predict_logistic, LogisticModel, LogisticParams};
pub use tree::{best_split, entropy, fit_tree, gini, predict_tree, Criterion, Split, TreeModel, TreeNode, TreeParams};

/// Anything that predicts per-row class-probability vectors.
pub trait Classifier {
    fn n_classes(&self) -> usize;
    fn predict_proba(&self, rows: &[Vec<f64>]) -> Result<Vec<Vec<f64>>>;
}

/// Null baseline: emits a pseudo-random distribution derived from the row
/// content and a stored seed, so predictions are deterministic yet carry no
/// signal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RandomModel {
    pub seed: u64,
    pub n_classes: usize,
    pub n_features: usize,
}

fn fnv1a(bytes: &[u8], mut state: u64) -> u64 {
    for &b in bytes {
        state ^= u64::from(b);
        state = state.wrapping_mul(0x0000_0100_0000_01b3);
    }
    state
}

impl RandomModel {
    fn row_distribution(&self, row: &[f64]) -> Vec<f64> {
        let mut state = fnv1a(&self.seed.to_le_bytes(), 0xcbf2_9ce4_8422_2325);
        for v in row {
            state = fnv1a(&v.to_le_bytes(), state);
        }
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(state);
        let raw: Vec<f64> = (0..self.n_classes)
            .map(|_| 1.0 - rng.random::<f64>())
            .collect();
        let sum: f64 = raw.iter().sum();
        raw.into_iter().map(|v| v / sum).collect()
    }
}

pub fn fit_random(train: &LabeledDataset, seed: u64) -> Result<RandomModel> {
    if train.n_classes() == 0 {
        return Err(Error::invalid_data("dataset has no classes"));
    }
    Ok(RandomModel {
        seed,
        n_classes: train.n_classes(),
        n_features: train.n_features(),
    })
}

/// Hyperparameter spec for one fittable model kind.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModelKind {
    Tree(TreeParams),
    Forest {
        tree: TreeParams,
        forest: ForestParams,
    },
    Gbdt(GbdtParams),
    Knn(KnnParams),
    Logistic(LogisticParams),
    Random,
}

impl ModelKind {
    pub fn kind_name(&self) -> &'static str {
        match self {
            ModelKind::Tree(_) => "tree",
            ModelKind::Forest { .. } => "forest",
            ModelKind::Gbdt(_) => "gbdt",
            ModelKind::Knn(_) => "knn",
            ModelKind::Logistic(_) => "logistic",
            ModelKind::Random => "random",
        }
    }

    pub fn fit(&self, train: &LabeledDataset, seed: u64) -> Result<Model> {
        Ok(match self {
            ModelKind::Tree(params) => Model::Tree(fit_tree(train, params, seed)?),
            ModelKind::Forest { tree, forest } => {
                Model::Forest(fit_forest(train, tree, forest, seed)?)
            }
            ModelKind::Gbdt(params) => Model::Gbdt(fit_gbdt(train, params, seed)?),
            ModelKind::Knn(params) => Model::Knn(fit_knn(train, params)?),
            ModelKind::Logistic(params) => Model::Logistic(fit_logistic(train, params)?),
            ModelKind::Random => Model::Random(fit_random(train, seed)?),
        })
    }
}

/// A fitted model of any kind.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model_type", rename_all = "snake_case")]
pub enum Model {
    Tree(TreeModel),
    Forest(ForestModel),
    Gbdt(BoostModel),
    Knn(KnnModel),
    Logistic(LogisticModel),
    Random(RandomModel),
}

impl Model {
    pub fn kind_name(&self) -> &'static str {
        match self {
            Model::Tree(_) => "tree",
            Model::Forest(_) => "forest",
            Model::Gbdt(_) => "gbdt",
            Model::Knn(_) => "knn",
            Model::Logistic(_) => "logistic",
            Model::Random(_) => "random",
        }
    }
}

impl Classifier for Model {
    fn n_classes(&self) -> usize {
        match self {
            Model::Tree(m) => m.n_classes,
            Model::Forest(m) => m.n_classes,
            Model::Gbdt(m) => m.n_classes,
            Model::Knn(m) => m.n_classes,
            Model::Logistic(m) => m.n_classes,
            Model::Random(m) => m.n_classes,
        }
    }

    fn predict_proba(&self, rows: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
        match self {
            Model::Tree(m) => predict_tree(m, rows),
            Model::Forest(m) => predict_forest(m, rows),
            Model::Gbdt(m) => predict_gbdt(m, rows),
            Model::Knn(m) => predict_knn(m, rows),
            Model::Logistic(m) => predict_logistic(m, rows),
            Model::Random(m) => Ok(rows.iter().map(|r| m.row_distribution(r)).collect()),
        }
    }
}

pub const MODEL_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
struct ModelFile {
    format_version: u32,
    #[serde(flatten)]
    model: Model,
}

/// Versioned JSON document for one fitted model.
pub fn model_to_json(model: &Model) -> Result<String> {
    Ok(serde_json::to_string_pretty(&ModelFile {
        format_version: MODEL_FORMAT_VERSION,
        model: model.clone(),
    })?)
}

pub fn model_from_json(text: &str) -> Result<Model> {
    let file: ModelFile = serde_json::from_str(text)?;
    if file.format_version != MODEL_FORMAT_VERSION {
        return Err(Error::invalid_data(format!(
            "unsupported model format_version {}, expected {MODEL_FORMAT_VERSION}",
            file.format_version
        )));
    }
    Ok(file.model)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fixture() -> LabeledDataset {
        crate::synth::gaussian_mixture(&crate::synth::SynthConfig {
            n_rows: 120,
            n_features: 4,
            n_informative: 3,
            seed: 77,
            ..crate::synth::SynthConfig::default()
        })
        .unwrap()
    }

    #[test]
    fn every_kind_fits_and_predicts_distributions() {
        let ds = fixture();
        let kinds = vec![
            ModelKind::Tree(TreeParams::default()),
            ModelKind::Forest {
                tree: TreeParams::default(),
                forest: ForestParams {
                    n_trees: 5,
                    ..ForestParams::default()
                },
            },
            ModelKind::Gbdt(GbdtParams {
                n_rounds: 3,
                max_depth: 3,
                ..GbdtParams::default()
            }),
            ModelKind::Knn(KnnParams::default()),
            ModelKind::Logistic(LogisticParams {
                max_iters: 50,
                ..LogisticParams::default()
            }),
            ModelKind::Random,
        ];
        for kind in kinds {
            let model = kind.fit(&ds, 1).unwrap();
            assert_eq!(model.kind_name(), kind.kind_name());
            let preds = model.predict_proba(&ds.features[..10]).unwrap();
            assert_eq!(preds.len(), 10);
            for p in preds {
                assert_eq!(p.len(), 3);
                assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-9);
                assert!(p.iter().all(|&v| v >= 0.0));
            }
        }
    }

    #[test]
    fn model_json_round_trip() {
        let ds = fixture();
        let model = ModelKind::Forest {
            tree: TreeParams::default(),
            forest: ForestParams {
                n_trees: 3,
                ..ForestParams::default()
            },
        }
        .fit(&ds, 9)
        .unwrap();
        let json = model_to_json(&model).unwrap();
        assert!(json.contains("\"format_version\": 1"));
        assert!(json.contains("\"model_type\": \"forest\""));
        let back = model_from_json(&json).unwrap();
        assert_eq!(back, model);
        assert_eq!(
            back.predict_proba(&ds.features[..5]).unwrap(),
            model.predict_proba(&ds.features[..5]).unwrap()
        );
    }

    #[test]
    fn wrong_format_version_rejected() {
        let ds = fixture();
        let model = ModelKind::Tree(TreeParams::default()).fit(&ds, 1).unwrap();
        let json = model_to_json(&model)
            .unwrap()
            .replace("\"format_version\": 1", "\"format_version\": 99");
        assert!(model_from_json(&json).is_err());
    }

    #[test]
    fn random_baseline_is_deterministic_per_row() {
        let ds = fixture();
        let model = ModelKind::Random.fit(&ds, 5).unwrap();
        let a = model.predict_proba(&ds.features[..8]).unwrap();
        let b = model.predict_proba(&ds.features[..8]).unwrap();
        assert_eq!(a, b);
        // Different rows get different distributions.
        assert_ne!(a[0], a[1]);
    }
}
