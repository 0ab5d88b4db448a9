//! Model bundle on disk: a directory of per-model JSON files, the fitted
//! cleaning transform, and a layout manifest that stitches the stacking
//! model back together.
//!
//! ```text
//! bundle/
//!   layout.json        meta-feature layout, base roster, class codebook
//!   cleaning.json      means + category codebooks for predict-time replay
//!   models/<base>.json one versioned document per refit base model
//!   models/__meta__.json  the random-forest meta-model (when stacked)
//! ```

use std::fs;
use std::path::Path;

use credit_core::learners::{model_from_json, model_to_json, Model};
use credit_core::stacking::{BaseSpec, LayoutEntry, MetaFeatureMode, StackingModel};
use credit_core::tabular::CleaningModel;
use serde::{Deserialize, Serialize};

use crate::pipeline::FitOutcome;
use crate::CliError;

pub const BUNDLE_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BundleManifest {
    pub format_version: u32,
    pub label_column: String,
    pub class_names: Vec<String>,
    /// Cleaned feature columns, in model input order.
    pub feature_names: Vec<String>,
    pub bases: Vec<BaseSpec>,
    pub layout: Vec<LayoutEntry>,
    /// Absent when the ensemble was disabled and only bases were trained.
    pub mode: Option<MetaFeatureMode>,
    pub seed: u64,
}

#[derive(Debug)]
pub struct Bundle {
    pub manifest: BundleManifest,
    pub cleaning: CleaningModel,
    pub base_models: Vec<(String, Model)>,
    pub stacking: Option<StackingModel>,
}

impl Bundle {
    pub fn base_by_name(&self, name: &str) -> Option<&Model> {
        self.base_models
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, m)| m)
    }
}

fn model_file_name(base_name: &str) -> String {
    let safe: String = base_name
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
        .collect();
    format!("{safe}.json")
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path)
        .map_err(|e| CliError::Data(format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents)
        .map_err(|e| CliError::Data(format!("cannot write {}: {e}", path.display())))
}

pub fn save_bundle(
    dir: &Path,
    cleaning: &CleaningModel,
    bases: &[BaseSpec],
    outcome: &FitOutcome,
    feature_names: &[String],
    seed: u64,
) -> Result<(), CliError> {
    let models_dir = dir.join("models");
    fs::create_dir_all(&models_dir)
        .map_err(|e| CliError::Data(format!("cannot create {}: {e}", models_dir.display())))?;
    let mut seen = std::collections::BTreeSet::new();
    for (name, _) in &outcome.base_models {
        if !seen.insert(model_file_name(name)) {
            return Err(CliError::Data(format!(
                "base model names '{name}' collide after file-name sanitization"
            )));
        }
    }
    let manifest = BundleManifest {
        format_version: BUNDLE_FORMAT_VERSION,
        label_column: cleaning.label_column.clone(),
        class_names: cleaning.class_names.clone(),
        feature_names: feature_names.to_vec(),
        bases: bases.to_vec(),
        layout: outcome
            .stacking
            .as_ref()
            .map(|s| s.layout.clone())
            .unwrap_or_default(),
        mode: outcome.stacking.as_ref().map(|s| s.mode),
        seed,
    };
    write(
        &dir.join("layout.json"),
        &serde_json::to_string_pretty(&manifest).expect("manifest serializes"),
    )?;
    write(
        &dir.join("cleaning.json"),
        &serde_json::to_string_pretty(cleaning).expect("cleaning model serializes"),
    )?;
    for (name, model) in &outcome.base_models {
        write(&models_dir.join(model_file_name(name)), &model_to_json(model)?)?;
    }
    if let Some(stacking) = &outcome.stacking {
        let meta = Model::Forest(stacking.meta_model.clone());
        write(&models_dir.join("__meta__.json"), &model_to_json(&meta)?)?;
    }
    Ok(())
}

pub fn load_bundle(dir: &Path) -> Result<Bundle, CliError> {
    let manifest: BundleManifest = serde_json::from_str(&read(&dir.join("layout.json"))?)
        .map_err(|e| CliError::Data(format!("bad layout.json: {e}")))?;
    if manifest.format_version != BUNDLE_FORMAT_VERSION {
        return Err(CliError::Data(format!(
            "unsupported bundle format_version {}",
            manifest.format_version
        )));
    }
    let cleaning: CleaningModel = serde_json::from_str(&read(&dir.join("cleaning.json"))?)
        .map_err(|e| CliError::Data(format!("bad cleaning.json: {e}")))?;
    let models_dir = dir.join("models");
    let mut base_models = Vec::with_capacity(manifest.bases.len());
    for base in &manifest.bases {
        let model = model_from_json(&read(&models_dir.join(model_file_name(&base.name)))?)?;
        base_models.push((base.name.clone(), model));
    }
    let stacking = match manifest.mode {
        None => None,
        Some(mode) => {
            let meta = model_from_json(&read(&models_dir.join("__meta__.json"))?)?;
            let Model::Forest(meta_model) = meta else {
                return Err(CliError::Data("__meta__.json is not a forest model".into()));
            };
            Some(StackingModel {
                base_models: base_models.clone(),
                meta_model,
                layout: manifest.layout.clone(),
                n_features: manifest.feature_names.len(),
                n_classes: manifest.class_names.len(),
                mode,
                seed: manifest.seed,
            })
        }
    };
    Ok(Bundle {
        manifest,
        cleaning,
        base_models,
        stacking,
    })
}
