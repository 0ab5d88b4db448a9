//! Flat `key = value` configuration files with dotted sections
//! (`base.0.kind = gbdt`). One parser serves both the pipeline config and
//! standalone ensemble spec files.

use std::collections::BTreeMap;
use std::path::PathBuf;

use credit_core::learners::{
    Criterion, FeatureMode, ForestParams, GbdtParams, KnnParams, LogisticParams, ModelKind,
    TreeParams,
};
use credit_core::metrics::Averaging;
use credit_core::stacking::{BaseSpec, MetaFeatureMode};
use credit_core::tabular::DEFAULT_CLASS_ORDER;

use crate::CliError;

/// Parsed key/value file. Keys are unique; `#` starts a comment; blank
/// lines are skipped.
#[derive(Debug, Clone, Default)]
pub struct KeyValues {
    entries: BTreeMap<String, String>,
}

impl KeyValues {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut entries = BTreeMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = match raw.find('#') {
                Some(pos) => &raw[..pos],
                None => raw,
            };
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(CliError::Data(format!(
                    "config line {}: expected 'key = value', got '{raw}'",
                    lineno + 1
                )));
            };
            let key = key.trim().to_string();
            if entries
                .insert(key.clone(), value.trim().to_string())
                .is_some()
            {
                return Err(CliError::Data(format!(
                    "config line {}: duplicate key '{key}'",
                    lineno + 1
                )));
            }
        }
        Ok(KeyValues { entries })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    pub fn require(&self, key: &str) -> Result<&str, CliError> {
        self.get(key)
            .ok_or_else(|| CliError::Data(format!("config is missing required key '{key}'")))
    }

    fn parse_as<T: std::str::FromStr>(&self, key: &str, value: &str) -> Result<T, CliError> {
        value.parse().map_err(|_| {
            CliError::Data(format!(
                "config key '{key}': cannot parse '{value}' as {}",
                std::any::type_name::<T>()
            ))
        })
    }

    pub fn get_or<T: std::str::FromStr>(&self, key: &str, default: T) -> Result<T, CliError> {
        match self.get(key) {
            None => Ok(default),
            Some(v) => self.parse_as(key, v),
        }
    }

    pub fn require_parsed<T: std::str::FromStr>(&self, key: &str) -> Result<T, CliError> {
        let v = self.require(key)?;
        self.parse_as(key, v)
    }

    pub fn get_bool(&self, key: &str, default: bool) -> Result<bool, CliError> {
        match self.get(key) {
            None => Ok(default),
            Some("true") | Some("1") | Some("yes") => Ok(true),
            Some("false") | Some("0") | Some("no") => Ok(false),
            Some(other) => Err(CliError::Data(format!(
                "config key '{key}': expected a boolean, got '{other}'"
            ))),
        }
    }

    pub fn get_list(&self, key: &str) -> Option<Vec<String>> {
        self.get(key).map(|v| {
            v.split(',')
                .map(|s| s.trim().to_string())
                .filter(|s| !s.is_empty())
                .collect()
        })
    }

    /// Keys under `prefix.`, with the prefix stripped.
    fn section(&self, prefix: &str) -> KeyValues {
        let lead = format!("{prefix}.");
        KeyValues {
            entries: self
                .entries
                .iter()
                .filter_map(|(k, v)| {
                    k.strip_prefix(&lead).map(|rest| (rest.to_string(), v.clone()))
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResampleMethod {
    None,
    Ros,
    Smote,
    Enn,
    SmoteEnn,
}

impl ResampleMethod {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        Ok(match text {
            "none" => ResampleMethod::None,
            "ros" => ResampleMethod::Ros,
            "smote" => ResampleMethod::Smote,
            "enn" => ResampleMethod::Enn,
            "smoteenn" => ResampleMethod::SmoteEnn,
            other => {
                return Err(CliError::Usage(format!(
                    "unknown resample method '{other}' (expected none|ros|smote|enn|smoteenn)"
                )))
            }
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            ResampleMethod::None => "none",
            ResampleMethod::Ros => "ros",
            ResampleMethod::Smote => "smote",
            ResampleMethod::Enn => "enn",
            ResampleMethod::SmoteEnn => "smoteenn",
        }
    }
}

pub fn parse_averaging(text: &str) -> Result<Averaging, CliError> {
    match text {
        "macro" => Ok(Averaging::Macro),
        "weighted" => Ok(Averaging::Weighted),
        other => Err(CliError::Usage(format!(
            "unknown averaging '{other}' (expected macro|weighted)"
        ))),
    }
}

fn parse_tree_params(kv: &KeyValues) -> Result<TreeParams, CliError> {
    let defaults = TreeParams::default();
    let criterion = match kv.get("criterion") {
        None => defaults.criterion,
        Some("gini") => Criterion::Gini,
        Some("entropy") => Criterion::Entropy,
        Some(other) => {
            return Err(CliError::Data(format!(
                "unknown criterion '{other}' (expected gini|entropy)"
            )))
        }
    };
    Ok(TreeParams {
        max_depth: kv.get_or("max_depth", defaults.max_depth)?,
        min_samples_leaf: kv.get_or("min_samples_leaf", defaults.min_samples_leaf)?,
        criterion,
        feature_subsample: kv.get_or("feature_subsample", defaults.feature_subsample)?,
    })
}

fn parse_feature_mode(kv: &KeyValues) -> Result<FeatureMode, CliError> {
    match kv.get("feature_mode") {
        None => Ok(FeatureMode::Sqrt),
        Some("all") => Ok(FeatureMode::All),
        Some("sqrt") => Ok(FeatureMode::Sqrt),
        Some(other) => match other.strip_prefix("fraction:") {
            Some(frac) => Ok(FeatureMode::Fraction(frac.parse().map_err(|_| {
                CliError::Data(format!("bad feature_mode fraction '{other}'"))
            })?)),
            None => Err(CliError::Data(format!(
                "unknown feature_mode '{other}' (expected all|sqrt|fraction:<f>)"
            ))),
        },
    }
}

fn parse_forest_params(kv: &KeyValues) -> Result<ForestParams, CliError> {
    let defaults = ForestParams::default();
    Ok(ForestParams {
        n_trees: kv.get_or("n_trees", defaults.n_trees)?,
        bootstrap: kv.get_bool("bootstrap", defaults.bootstrap)?,
        feature_mode: parse_feature_mode(kv)?,
    })
}

fn parse_gbdt_params(kv: &KeyValues) -> Result<GbdtParams, CliError> {
    let defaults = GbdtParams::default();
    let max_leaves = match kv.get("max_leaves") {
        None => None,
        Some(v) => Some(v.parse().map_err(|_| {
            CliError::Data(format!("config key 'max_leaves': cannot parse '{v}'"))
        })?),
    };
    Ok(GbdtParams {
        n_rounds: kv.get_or("n_rounds", defaults.n_rounds)?,
        learning_rate: kv.get_or("learning_rate", defaults.learning_rate)?,
        lambda: kv.get_or("lambda", defaults.lambda)?,
        alpha: kv.get_or("alpha", defaults.alpha)?,
        gamma: kv.get_or("gamma", defaults.gamma)?,
        max_depth: kv.get_or("max_depth", defaults.max_depth)?,
        min_samples_leaf: kv.get_or("min_samples_leaf", defaults.min_samples_leaf)?,
        max_leaves,
    })
}

fn parse_base_kind(kv: &KeyValues) -> Result<ModelKind, CliError> {
    Ok(match kv.require("kind")? {
        "tree" => ModelKind::Tree(parse_tree_params(kv)?),
        "forest" => ModelKind::Forest {
            tree: parse_tree_params(kv)?,
            forest: parse_forest_params(kv)?,
        },
        "gbdt" => ModelKind::Gbdt(parse_gbdt_params(kv)?),
        "knn" => ModelKind::Knn(KnnParams {
            k: kv.get_or("k", KnnParams::default().k)?,
        }),
        "logistic" => {
            let defaults = LogisticParams::default();
            ModelKind::Logistic(LogisticParams {
                step_size: kv.get_or("step_size", defaults.step_size)?,
                max_iters: kv.get_or("max_iters", defaults.max_iters)?,
                tolerance: kv.get_or("tolerance", defaults.tolerance)?,
            })
        }
        "random" => ModelKind::Random,
        other => {
            return Err(CliError::Data(format!(
                "unknown base kind '{other}' (expected tree|forest|gbdt|knn|logistic|random)"
            )))
        }
    })
}

/// Reads `base.N.*` sections in index order.
pub fn parse_base_specs(kv: &KeyValues) -> Result<Vec<BaseSpec>, CliError> {
    let mut bases = Vec::new();
    for index in 0.. {
        let section = kv.section(&format!("base.{index}"));
        if section.entries.is_empty() {
            break;
        }
        let name = section
            .get("name")
            .map(str::to_string)
            .unwrap_or_else(|| format!("base_{index}"));
        bases.push(BaseSpec {
            name,
            kind: parse_base_kind(&section)?,
        });
    }
    Ok(bases)
}

/// Ensemble settings shared by `train` and `run`.
#[derive(Debug, Clone)]
pub struct EnsembleConfig {
    pub enabled: bool,
    pub mode: MetaFeatureMode,
    pub meta_tree: TreeParams,
    pub meta_forest: ForestParams,
    pub bases: Vec<BaseSpec>,
}

pub fn parse_ensemble(kv: &KeyValues) -> Result<EnsembleConfig, CliError> {
    let mut bases = parse_base_specs(kv)?;
    if bases.is_empty() {
        // No base.N sections: fall back to the default roster.
        bases = credit_core::stacking::default_base_specs();
    }
    let enabled = kv.get_bool("ensemble.enabled", true)?;
    let n_folds: usize = kv.get_or("ensemble.n_folds", 5)?;
    let mode = match kv.get("ensemble.meta_features") {
        None | Some("oof") => MetaFeatureMode::OutOfFold { n_folds },
        Some("in_sample") => MetaFeatureMode::InSample,
        Some(other) => {
            return Err(CliError::Data(format!(
                "unknown ensemble.meta_features '{other}' (expected oof|in_sample)"
            )))
        }
    };
    let meta = kv.section("ensemble.meta");
    Ok(EnsembleConfig {
        enabled,
        mode,
        meta_tree: parse_tree_params(&meta)?,
        meta_forest: parse_forest_params(&meta)?,
        bases,
    })
}

/// Everything `run` needs, parsed up front.
#[derive(Debug, Clone)]
pub struct PipelineConfig {
    pub input: PathBuf,
    pub label: String,
    pub classes: Vec<String>,
    pub seed: u64,
    pub output_dir: PathBuf,
    pub test_fraction: f64,
    pub filter_enabled: bool,
    pub z_threshold: f64,
    pub iqr_multiplier: f64,
    pub filter_columns: Option<Vec<String>>,
    pub resample_method: ResampleMethod,
    pub smote_k: usize,
    pub enn_k: usize,
    pub resample_compare: bool,
    pub resample_before_split: bool,
    pub ensemble: EnsembleConfig,
    pub average: Averaging,
    /// Raw key/value snapshot embedded in the manifest.
    pub raw: BTreeMap<String, String>,
}

pub fn default_classes() -> Vec<String> {
    DEFAULT_CLASS_ORDER.iter().map(|s| s.to_string()).collect()
}

impl PipelineConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let kv = KeyValues::parse(text)?;
        let classes = kv.get_list("classes").unwrap_or_else(default_classes);
        let method = ResampleMethod::parse(kv.get("resample.method").unwrap_or("none"))?;
        let compare = kv.get_bool("resample.compare", false)?;
        if compare && method == ResampleMethod::None {
            return Err(CliError::Data(
                "resample.compare = true needs resample.method != none".into(),
            ));
        }
        let test_fraction: f64 = kv.get_or("test_fraction", 0.2)?;
        Ok(PipelineConfig {
            input: PathBuf::from(kv.require("input")?),
            label: kv.require("label")?.to_string(),
            classes,
            seed: kv.require_parsed("seed")?,
            output_dir: PathBuf::from(kv.get("output_dir").unwrap_or("out")),
            test_fraction,
            filter_enabled: kv.get_bool("filter.enabled", true)?,
            z_threshold: kv.get_or("filter.z_threshold", 3.0)?,
            iqr_multiplier: kv.get_or("filter.iqr_multiplier", 1.5)?,
            filter_columns: kv.get_list("filter.columns"),
            resample_method: method,
            smote_k: kv.get_or("resample.smote_k", 5)?,
            enn_k: kv.get_or("resample.enn_k", 3)?,
            resample_compare: compare,
            resample_before_split: kv.get_bool("resample.before_split", false)?,
            ensemble: parse_ensemble(&kv)?,
            average: parse_averaging(kv.get("metrics.average").unwrap_or("macro"))?,
            raw: kv.entries.clone(),
        })
    }
}
