//! `credit run`: the full experiment. Executes the pipeline once per pass
//! (twice under `resample.compare`), persists fitted model bundles, filter
//! summaries, rendered tables, the deterministic manifest and a wall-clock
//! sidecar.

use std::fs;
use std::path::Path;

use credit_core::metrics::{render_markdown, render_text, reports_to_csv};

use super::{read_file, write_file};
use crate::commands::resample::provenance_to_csv;
use crate::config::{PipelineConfig, ResampleMethod};
use crate::manifest::{timings_to_text, RunManifest};
use crate::{bundle, pipeline, CliError};

/// Flag-level overrides for config keys; the manifest snapshot records the
/// effective values.
#[derive(Debug, Default, Clone)]
pub struct RunOverrides {
    pub z_threshold: Option<f64>,
    pub iqr_multiplier: Option<f64>,
    pub test_fraction: Option<f64>,
    pub seed: Option<u64>,
    pub resample_before_split: bool,
    pub meta_features: Option<String>,
}

fn apply_overrides(cfg: &mut PipelineConfig, over: &RunOverrides) -> Result<(), CliError> {
    if let Some(z) = over.z_threshold {
        cfg.z_threshold = z;
        cfg.raw.insert("filter.z_threshold".into(), z.to_string());
    }
    if let Some(m) = over.iqr_multiplier {
        cfg.iqr_multiplier = m;
        cfg.raw.insert("filter.iqr_multiplier".into(), m.to_string());
    }
    if let Some(f) = over.test_fraction {
        cfg.test_fraction = f;
        cfg.raw.insert("test_fraction".into(), f.to_string());
    }
    if let Some(s) = over.seed {
        cfg.seed = s;
        cfg.raw.insert("seed".into(), s.to_string());
    }
    if over.resample_before_split {
        cfg.resample_before_split = true;
        cfg.raw.insert("resample.before_split".into(), "true".into());
    }
    match over.meta_features.as_deref() {
        None => {}
        Some("oof") => {
            let n_folds = cfg
                .raw
                .get("ensemble.n_folds")
                .and_then(|v| v.parse().ok())
                .unwrap_or(5);
            cfg.ensemble.mode = credit_core::stacking::MetaFeatureMode::OutOfFold { n_folds };
            cfg.raw.insert("ensemble.meta_features".into(), "oof".into());
        }
        Some("in_sample") => {
            cfg.ensemble.mode = credit_core::stacking::MetaFeatureMode::InSample;
            cfg.raw
                .insert("ensemble.meta_features".into(), "in_sample".into());
        }
        Some(other) => {
            return Err(CliError::Usage(format!(
                "unknown --meta-features '{other}' (expected oof|in_sample)"
            )))
        }
    }
    Ok(())
}

pub fn run(config_path: &Path, overrides: &RunOverrides) -> Result<(), CliError> {
    let mut cfg = PipelineConfig::parse(&read_file(config_path)?)?;
    apply_overrides(&mut cfg, overrides)?;
    let cfg = cfg;
    fs::create_dir_all(&cfg.output_dir)
        .map_err(|e| CliError::Data(format!("cannot create {}: {e}", cfg.output_dir.display())))?;
    let raw = super::load_table(&cfg.input)?;

    let passes: Vec<(String, ResampleMethod)> = if cfg.resample_compare {
        vec![
            ("baseline".to_string(), ResampleMethod::None),
            (cfg.resample_method.name().to_string(), cfg.resample_method),
        ]
    } else if cfg.resample_method == ResampleMethod::None {
        vec![("baseline".to_string(), ResampleMethod::None)]
    } else {
        vec![(cfg.resample_method.name().to_string(), cfg.resample_method)]
    };

    let mut manifest = RunManifest::new(cfg.raw.clone());
    let mut timings = Vec::new();
    for (pass_name, method) in &passes {
        let mut stages = Vec::new();
        let result = pipeline::run_pass(&cfg, pass_name, *method, &raw, &mut stages);
        let pass = match result {
            Ok(pass) => pass,
            Err(err) => {
                // Record what completed before aborting.
                manifest.passes.push(crate::manifest::PassRecord {
                    name: pass_name.clone(),
                    stages,
                    reports: Vec::new(),
                });
                write_file(&cfg.output_dir.join("manifest.json"), &manifest.to_json())?;
                return Err(err);
            }
        };
        timings.extend(pass.timings.iter().cloned());

        let dir = &cfg.output_dir;
        write_file(
            &dir.join(format!("table_{pass_name}.txt")),
            &render_text(&pass.record.reports),
        )?;
        write_file(
            &dir.join(format!("table_{pass_name}.md")),
            &render_markdown(&pass.record.reports),
        )?;
        write_file(
            &dir.join(format!("metrics_{pass_name}.csv")),
            &reports_to_csv(&pass.record.reports),
        )?;
        for (stage, summary) in &pass.filter_summaries {
            write_file(
                &dir.join(format!("{stage}_summary_{pass_name}.txt")),
                &summary.to_key_value(),
            )?;
        }
        if !pass.provenance.is_empty() {
            write_file(
                &dir.join(format!("smote_provenance_{pass_name}.csv")),
                &provenance_to_csv(&pass.provenance),
            )?;
        }
        bundle::save_bundle(
            &dir.join(format!("bundle_{pass_name}")),
            &pass.cleaning,
            &cfg.ensemble.bases,
            &pass.outcome,
            &pass.feature_names,
            cfg.seed,
        )?;

        println!("[pass: {pass_name}]");
        print!("{}", render_text(&pass.record.reports));
        println!();
        manifest.passes.push(pass.record);
    }

    write_file(&cfg.output_dir.join("manifest.json"), &manifest.to_json())?;
    write_file(&cfg.output_dir.join("timings.txt"), &timings_to_text(&timings))?;
    eprintln!("run complete -> {}", cfg.output_dir.display());
    Ok(())
}
