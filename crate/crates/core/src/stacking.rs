//! Stacked generalization: base classifiers feed a random-forest meta-model
//! through the combined feature matrix Z = [X | base probability vectors].
//!
//! Meta-features default to out-of-fold predictions from a stratified K-fold
//! scheme so the meta-model never sees a base prediction made by a model
//! trained on that row; the in-sample mode (base models predict their own
//! training data) is kept for comparison. After the meta-features are built,
//! every base model is refit on the full training set for inference.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::learners::{
    fit_forest, predict_forest, Classifier, ForestModel, ForestParams, Model, ModelKind, TreeParams,
};
use crate::seeding;
use crate::tabular::LabeledDataset;

/// One named base model in the ensemble.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaseSpec {
    pub name: String,
    pub kind: ModelKind,
}

/// The default roster: random forest, boosted trees, kNN.
pub fn default_base_specs() -> Vec<BaseSpec> {
    vec![
        BaseSpec {
            name: "random_forest".into(),
            kind: ModelKind::Forest {
                tree: TreeParams::default(),
                forest: ForestParams::default(),
            },
        },
        BaseSpec {
            name: "gbdt".into(),
            kind: ModelKind::Gbdt(Default::default()),
        },
        BaseSpec {
            name: "knn".into(),
            kind: ModelKind::Knn(Default::default()),
        },
    ]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum MetaFeatureMode {
    /// Stratified K-fold out-of-fold predictions (leak-free).
    OutOfFold { n_folds: usize },
    /// Base models predict their own training rows (the literal combined
    /// feature set; leaks memorized labels).
    InSample,
}

/// Out-of-fold base predictions: rows × (n_bases · n_classes), plus the fold
/// each row belonged to.
#[derive(Debug, Clone, PartialEq)]
pub struct OofMatrix {
    pub values: Vec<Vec<f64>>,
    pub fold_of: Vec<usize>,
}

/// One block of Z after the raw features: `n_classes` probability columns
/// from the named base.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayoutEntry {
    pub base: String,
    pub n_classes: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StackingModel {
    /// Fitted base models, refit on the full training set.
    pub base_models: Vec<(String, Model)>,
    pub meta_model: ForestModel,
    /// Z column blocks after the `n_features` raw columns, in order.
    pub layout: Vec<LayoutEntry>,
    pub n_features: usize,
    pub n_classes: usize,
    pub mode: MetaFeatureMode,
    pub seed: u64,
}

const FOLD_TAG: u64 = 1;
const FULL_TAG: u64 = 2;
const META_TAG: u64 = 3;

fn validate_bases(bases: &[BaseSpec]) -> Result<()> {
    if bases.is_empty() {
        return Err(Error::invalid_data("stacking needs at least one base model"));
    }
    let mut seen = std::collections::BTreeSet::new();
    for base in bases {
        if !seen.insert(base.name.as_str()) {
            return Err(Error::invalid_data(format!(
                "duplicate base model name '{}'",
                base.name
            )));
        }
    }
    Ok(())
}

/// Stratified fold assignment: per class, rows are shuffled under a
/// class-specific stream and dealt round-robin, so every fold holds each
/// class as evenly as possible.
pub fn stratified_folds(ds: &LabeledDataset, n_folds: usize, seed: u64) -> Result<Vec<usize>> {
    if n_folds < 2 {
        return Err(Error::invalid_param("stratified folding needs n_folds >= 2"));
    }
    let counts = ds.class_counts();
    for (class, &count) in counts.iter().enumerate() {
        if count < n_folds {
            return Err(Error::invalid_data(format!(
                "class '{}' has {count} row(s); stratified {n_folds}-fold needs at least {n_folds}",
                ds.class_names[class]
            )));
        }
    }
    let mut fold_of = vec![0usize; ds.n_rows()];
    for class in 0..ds.n_classes() {
        let mut rows: Vec<usize> = (0..ds.n_rows()).filter(|&i| ds.labels[i] == class).collect();
        use rand::seq::SliceRandom;
        let mut rng = seeding::task_rng(seed, class as u64);
        rows.shuffle(&mut rng);
        for (i, &row) in rows.iter().enumerate() {
            fold_of[row] = i % n_folds;
        }
    }
    Ok(fold_of)
}

/// Builds the out-of-fold meta-feature matrix: for each fold f and base b,
/// fit b on everything outside f and predict the fold's rows. Blocks follow
/// `bases` order; fits run in parallel and merge by (fold, base) key.
pub fn oof_meta_features(
    train: &LabeledDataset,
    bases: &[BaseSpec],
    n_folds: usize,
    seed: u64,
) -> Result<OofMatrix> {
    validate_bases(bases)?;
    let fold_of = stratified_folds(train, n_folds, seed)?;
    let n_classes = train.n_classes();
    let width = bases.len() * n_classes;
    let jobs: Vec<(usize, usize)> = (0..n_folds)
        .flat_map(|f| (0..bases.len()).map(move |b| (f, b)))
        .collect();
    type FoldBlock = (usize, usize, Vec<usize>, Vec<Vec<f64>>);
    let results: Vec<FoldBlock> = jobs
        .into_par_iter()
        .map(|(fold, b)| {
            let train_rows: Vec<usize> =
                (0..train.n_rows()).filter(|&i| fold_of[i] != fold).collect();
            let fold_rows: Vec<usize> =
                (0..train.n_rows()).filter(|&i| fold_of[i] == fold).collect();
            let sub_train = train.select_rows(&train_rows);
            let fit_seed = seeding::child_seed2(
                seeding::child_seed(seed, FOLD_TAG),
                fold as u64,
                b as u64,
            );
            let model = bases[b].kind.fit(&sub_train, fit_seed)?;
            let fold_features: Vec<Vec<f64>> =
                fold_rows.iter().map(|&i| train.features[i].clone()).collect();
            let probs = model.predict_proba(&fold_features)?;
            Ok((fold, b, fold_rows, probs))
        })
        .collect::<Result<_>>()?;
    let mut values = vec![vec![0.0; width]; train.n_rows()];
    for (_, b, fold_rows, probs) in results {
        for (&row, prob) in fold_rows.iter().zip(&probs) {
            values[row][b * n_classes..(b + 1) * n_classes].copy_from_slice(prob);
        }
    }
    Ok(OofMatrix { values, fold_of })
}

/// Meta-features in the in-sample mode: every base fits the full training
/// set and predicts it. Returns the fitted bases alongside so they are not
/// trained twice.
type MetaValuesAndBases = (Vec<Vec<f64>>, Vec<(String, Model)>);

fn in_sample_meta_features(
    train: &LabeledDataset,
    bases: &[BaseSpec],
    seed: u64,
) -> Result<MetaValuesAndBases> {
    validate_bases(bases)?;
    let fitted = fit_bases(train, bases, seed)?;
    let n_classes = train.n_classes();
    let width = bases.len() * n_classes;
    let mut values = vec![vec![0.0; width]; train.n_rows()];
    for (b, (_, model)) in fitted.iter().enumerate() {
        let probs = model.predict_proba(&train.features)?;
        for (row, prob) in probs.iter().enumerate() {
            values[row][b * n_classes..(b + 1) * n_classes].copy_from_slice(prob);
        }
    }
    Ok((values, fitted))
}

/// Fits every base on the full training set under per-base sub-seeds; the
/// same stream `fit_stacking` uses for its inference-time refits.
pub fn fit_bases(
    train: &LabeledDataset,
    bases: &[BaseSpec],
    seed: u64,
) -> Result<Vec<(String, Model)>> {
    validate_bases(bases)?;
    bases
        .par_iter()
        .enumerate()
        .map(|(b, base)| {
            let fit_seed = seeding::child_seed2(seed, FULL_TAG, b as u64);
            Ok((base.name.clone(), base.kind.fit(train, fit_seed)?))
        })
        .collect()
}

/// Z = [X | meta blocks]: raw features first, bitwise untouched.
fn assemble_meta_rows(x: &[Vec<f64>], meta: &[Vec<f64>]) -> Vec<Vec<f64>> {
    x.iter()
        .zip(meta)
        .map(|(raw, extra)| {
            let mut row = Vec::with_capacity(raw.len() + extra.len());
            row.extend_from_slice(raw);
            row.extend_from_slice(extra);
            row
        })
        .collect()
}

fn meta_feature_names(train: &LabeledDataset, bases: &[BaseSpec]) -> Vec<String> {
    let mut names = train.feature_names.clone();
    for base in bases {
        for class in &train.class_names {
            names.push(format!("{}.p_{}", base.name, class));
        }
    }
    names
}

/// Fits the whole stack: meta-features per `mode`, random-forest meta-model
/// on (Z, Y), bases refit on the full training set for inference.
pub fn fit_stacking(
    train: &LabeledDataset,
    bases: &[BaseSpec],
    meta_tree: &TreeParams,
    meta_forest: &ForestParams,
    mode: MetaFeatureMode,
    seed: u64,
) -> Result<StackingModel> {
    let (meta_values, prefitted) = match mode {
        MetaFeatureMode::OutOfFold { n_folds } => {
            let oof = oof_meta_features(train, bases, n_folds, seed)?;
            (oof.values, None)
        }
        MetaFeatureMode::InSample => {
            let (values, fitted) = in_sample_meta_features(train, bases, seed)?;
            (values, Some(fitted))
        }
    };
    let meta_dataset = LabeledDataset {
        features: assemble_meta_rows(&train.features, &meta_values),
        labels: train.labels.clone(),
        feature_names: meta_feature_names(train, bases),
        class_names: train.class_names.clone(),
    };
    let meta_model = fit_forest(
        &meta_dataset,
        meta_tree,
        meta_forest,
        seeding::child_seed(seed, META_TAG),
    )?;
    let base_models = match prefitted {
        Some(fitted) => fitted,
        None => fit_bases(train, bases, seed)?,
    };
    let layout = bases
        .iter()
        .map(|b| LayoutEntry {
            base: b.name.clone(),
            n_classes: train.n_classes(),
        })
        .collect();
    Ok(StackingModel {
        base_models,
        meta_model,
        layout,
        n_features: train.n_features(),
        n_classes: train.n_classes(),
        mode,
        seed,
    })
}

impl StackingModel {
    /// Width of the meta-model's input.
    pub fn meta_width(&self) -> usize {
        self.n_features + self.layout.iter().map(|l| l.n_classes).sum::<usize>()
    }

    fn base_by_name(&self, name: &str) -> Result<&Model> {
        self.base_models
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, m)| m)
            .ok_or_else(|| Error::invalid_data(format!("layout references unknown base '{name}'")))
    }

    /// Assembles Z for new rows following the stored layout (lookups go by
    /// base name, so the storage order of `base_models` is irrelevant).
    pub fn meta_rows(&self, rows: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
        for row in rows {
            if row.len() != self.n_features {
                return Err(Error::invalid_data(format!(
                    "expected {} features, got {}",
                    self.n_features,
                    row.len()
                )));
            }
        }
        let mut meta = vec![Vec::with_capacity(self.meta_width() - self.n_features); rows.len()];
        for entry in &self.layout {
            let model = self.base_by_name(&entry.base)?;
            let probs = model.predict_proba(rows)?;
            for (m, p) in meta.iter_mut().zip(&probs) {
                m.extend_from_slice(p);
            }
        }
        Ok(assemble_meta_rows(rows, &meta))
    }
}

/// Base probabilities assembled per layout, then the meta-model's verdict.
pub fn predict_stacking(model: &StackingModel, rows: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    let z = model.meta_rows(rows)?;
    predict_forest(&model.meta_model, &z)
}

impl Classifier for StackingModel {
    fn n_classes(&self) -> usize {
        self.n_classes
    }

    fn predict_proba(&self, rows: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
        predict_stacking(self, rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::learners::{GbdtParams, KnnParams};
    use crate::metrics;
    use crate::synth::{gaussian_mixture, SynthConfig};

    fn small_forest() -> (TreeParams, ForestParams) {
        (
            TreeParams {
                min_samples_leaf: 1,
                ..TreeParams::default()
            },
            ForestParams {
                n_trees: 15,
                ..ForestParams::default()
            },
        )
    }

    fn tree_base(name: &str, max_depth: usize) -> BaseSpec {
        BaseSpec {
            name: name.into(),
            kind: ModelKind::Tree(TreeParams {
                max_depth,
                min_samples_leaf: 1,
                ..TreeParams::default()
            }),
        }
    }

    fn fixture(seed: u64, n_rows: usize) -> LabeledDataset {
        gaussian_mixture(&SynthConfig {
            n_rows,
            n_features: 5,
            n_informative: 4,
            seed,
            label_noise: 0.05,
            ..SynthConfig::default()
        })
        .unwrap()
    }

    #[test]
    fn oof_width_is_bases_times_classes() {
        let ds = fixture(1, 60);
        let oof = oof_meta_features(&ds, &[tree_base("t", 3)], 3, 7).unwrap();
        assert_eq!(oof.values[0].len(), 3);
        assert_eq!(oof.values.len(), ds.n_rows());
    }

    #[test]
    fn prior_base_yields_fold_priors() {
        // Depth-0 trees predict class priors of their training fold. With
        // two classes of 4 rows each and 2 folds, every fold complement has
        // priors (0.5, 0.5) exactly.
        let ds = LabeledDataset {
            features: (0..8).map(|i| vec![i as f64]).collect(),
            labels: vec![0, 0, 0, 0, 1, 1, 1, 1],
            feature_names: vec!["x".into()],
            class_names: vec!["a".into(), "b".into()],
        };
        let oof = oof_meta_features(&ds, &[tree_base("priors", 0)], 2, 3).unwrap();
        for row in &oof.values {
            assert_eq!(row, &vec![0.5, 0.5]);
        }
    }

    #[test]
    fn stratified_folds_reject_small_classes() {
        let ds = LabeledDataset {
            features: (0..5).map(|i| vec![i as f64]).collect(),
            labels: vec![0, 0, 0, 1, 1],
            feature_names: vec!["x".into()],
            class_names: vec!["big".into(), "small".into()],
        };
        let err = stratified_folds(&ds, 3, 1).unwrap_err();
        assert!(err.to_string().contains("small"));
    }

    #[test]
    fn meta_width_and_x_block_bitwise() {
        let ds = fixture(2, 80);
        let bases = vec![
            tree_base("t1", 2),
            tree_base("t2", 4),
            BaseSpec {
                name: "knn".into(),
                kind: ModelKind::Knn(KnnParams { k: 3 }),
            },
        ];
        let (tree, forest) = small_forest();
        let model = fit_stacking(
            &ds,
            &bases,
            &tree,
            &forest,
            MetaFeatureMode::OutOfFold { n_folds: 4 },
            11,
        )
        .unwrap();
        assert_eq!(model.meta_width(), 5 + 3 * 3);
        let z = model.meta_rows(&ds.features[..7]).unwrap();
        for (zrow, xrow) in z.iter().zip(&ds.features) {
            assert_eq!(zrow.len(), model.meta_width());
            for (a, b) in zrow[..5].iter().zip(xrow) {
                assert_eq!(a.to_bits(), b.to_bits());
            }
        }
    }

    #[test]
    fn perfect_base_gives_perfect_train_accuracy() {
        let ds = fixture(3, 90);
        // A deep unrestricted tree memorizes the training set.
        let bases = vec![tree_base("deep", 30)];
        let (tree, forest) = small_forest();
        let model = fit_stacking(
            &ds,
            &bases,
            &tree,
            &forest,
            MetaFeatureMode::InSample,
            5,
        )
        .unwrap();
        let probs = predict_stacking(&model, &ds.features).unwrap();
        let correct = probs
            .iter()
            .zip(&ds.labels)
            .filter(|(p, &y)| metrics::argmax(p) == y)
            .count();
        assert_eq!(correct, ds.n_rows());
    }

    #[test]
    fn base_storage_order_does_not_matter() {
        let ds = fixture(4, 70);
        let bases = vec![tree_base("a", 3), tree_base("b", 5)];
        let (tree, forest) = small_forest();
        let mut model = fit_stacking(
            &ds,
            &bases,
            &tree,
            &forest,
            MetaFeatureMode::OutOfFold { n_folds: 3 },
            13,
        )
        .unwrap();
        let before = predict_stacking(&model, &ds.features[..9]).unwrap();
        model.base_models.reverse();
        let after = predict_stacking(&model, &ds.features[..9]).unwrap();
        assert_eq!(before, after);
    }

    #[test]
    fn fit_is_byte_deterministic() {
        let ds = fixture(5, 60);
        let bases = vec![tree_base("t", 3), BaseSpec {
            name: "gbdt".into(),
            kind: ModelKind::Gbdt(GbdtParams {
                n_rounds: 3,
                max_depth: 2,
                ..GbdtParams::default()
            }),
        }];
        let (tree, forest) = small_forest();
        let fit = || {
            fit_stacking(
                &ds,
                &bases,
                &tree,
                &forest,
                MetaFeatureMode::OutOfFold { n_folds: 3 },
                21,
            )
            .unwrap()
        };
        let a = serde_json::to_vec(&fit()).unwrap();
        let b = serde_json::to_vec(&fit()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn oof_blocks_leakage_that_in_sample_mode_exhibits() {
        // Random labels on well-spread points: a 1-NN base memorizes its
        // training rows, so in-sample meta-features reconstruct the labels
        // perfectly while out-of-fold ones cannot.
        let mut state = 0xDEAD_BEEFu64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        let n = 60;
        let ds = LabeledDataset {
            features: (0..n)
                .map(|i| vec![i as f64, (next() % 1000) as f64 / 10.0])
                .collect(),
            labels: (0..n).map(|_| (next() % 2) as usize).collect(),
            feature_names: vec!["x".into(), "y".into()],
            class_names: vec!["a".into(), "b".into()],
        };
        let knn_base = vec![BaseSpec {
            name: "memorizer".into(),
            kind: ModelKind::Knn(KnnParams { k: 1 }),
        }];

        let oof = oof_meta_features(&ds, &knn_base, 5, 3).unwrap();
        let oof_correct = oof
            .values
            .iter()
            .zip(&ds.labels)
            .filter(|(p, &y)| metrics::argmax(p) == y)
            .count();
        assert!(
            oof_correct < n,
            "out-of-fold 1-NN should not reach 100% on random labels"
        );

        let (in_sample, _) = in_sample_meta_features(&ds, &knn_base, 3).unwrap();
        let in_correct = in_sample
            .iter()
            .zip(&ds.labels)
            .filter(|(p, &y)| metrics::argmax(p) == y)
            .count();
        assert_eq!(in_correct, n, "in-sample 1-NN memorizes its labels");
    }

    #[test]
    fn useless_random_base_degrades_gracefully() {
        let ds = fixture(6, 400);
        let (train, test) = crate::preprocess::stratified_split(&ds, 0.25, 1).unwrap();
        let (tree, forest) = small_forest();
        let core_bases = vec![tree_base("t", 6), BaseSpec {
            name: "knn".into(),
            kind: ModelKind::Knn(KnnParams { k: 5 }),
        }];
        let mut with_random = core_bases.clone();
        with_random.push(BaseSpec {
            name: "noise".into(),
            kind: ModelKind::Random,
        });
        let mode = MetaFeatureMode::OutOfFold { n_folds: 4 };
        let clean = fit_stacking(&train, &core_bases, &tree, &forest, mode, 7).unwrap();
        let noisy = fit_stacking(&train, &with_random, &tree, &forest, mode, 7).unwrap();
        assert_eq!(noisy.meta_width(), clean.meta_width() + 3);
        let f1_clean = metrics::evaluate(&clean, &test, "clean").unwrap().f1_macro;
        let f1_noisy = metrics::evaluate(&noisy, &test, "noisy").unwrap().f1_macro;
        assert!(
            f1_noisy >= f1_clean - 0.02,
            "random base degraded macro-F1 too much: {f1_clean} -> {f1_noisy}"
        );
    }

    #[test]
    fn duplicate_base_names_rejected() {
        let ds = fixture(7, 40);
        let bases = vec![tree_base("same", 2), tree_base("same", 3)];
        assert!(oof_meta_features(&ds, &bases, 2, 1).is_err());
    }

    #[test]
    fn predict_rejects_width_mismatch() {
        let ds = fixture(8, 50);
        let (tree, forest) = small_forest();
        let model = fit_stacking(
            &ds,
            &[tree_base("t", 3)],
            &tree,
            &forest,
            MetaFeatureMode::OutOfFold { n_folds: 3 },
            2,
        )
        .unwrap();
        assert!(predict_stacking(&model, &[vec![1.0, 2.0]]).is_err());
    }
}
