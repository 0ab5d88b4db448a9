//! The fixed pipeline behind `run`:
//! clean → z-score → IQR → split → (resample the train side) → fit → score.
//!
//! Resampling never touches the test split unless `resample.before_split`
//! deliberately reproduces the leaky ordering for comparison. Both passes of
//! a comparison run share the same split, so the resampling effect is
//! measured on identical test rows.

use std::time::Instant;

use credit_core::metrics::{evaluate_with_averaging, Averaging, MetricsReport};
use credit_core::preprocess::{iqr_filter, random_oversample, zscore_filter, FilterSummary};
use credit_core::resample::{smote, smote_enn, enn, ResampleParams, SyntheticProvenance};
use credit_core::seeding;
use credit_core::stacking::{fit_bases, fit_stacking, StackingModel};
use credit_core::learners::Model;
use credit_core::tabular::{clean_fit_transform, to_dataset, CleaningModel, LabeledDataset, Table};

use crate::config::{EnsembleConfig, PipelineConfig, ResampleMethod};
use crate::manifest::{PassRecord, StageRecord};
use crate::CliError;

const SPLIT_TAG: u64 = 10;
const RESAMPLE_TAG: u64 = 11;
const FIT_TAG: u64 = 12;

/// Fitted models of one pass: the refit bases plus the stack when enabled.
#[derive(Debug)]
pub struct FitOutcome {
    pub base_models: Vec<(String, Model)>,
    pub stacking: Option<StackingModel>,
}

pub fn fit_models(
    train: &LabeledDataset,
    ens: &EnsembleConfig,
    seed: u64,
) -> Result<FitOutcome, CliError> {
    if ens.enabled {
        let stacking = fit_stacking(
            train,
            &ens.bases,
            &ens.meta_tree,
            &ens.meta_forest,
            ens.mode,
            seed,
        )?;
        Ok(FitOutcome {
            base_models: stacking.base_models.clone(),
            stacking: Some(stacking),
        })
    } else {
        Ok(FitOutcome {
            base_models: fit_bases(train, &ens.bases, seed)?,
            stacking: None,
        })
    }
}

/// One comparison-table row per base model, then the ensemble.
pub fn evaluate_outcome(
    outcome: &FitOutcome,
    test: &LabeledDataset,
    average: Averaging,
) -> Result<Vec<MetricsReport>, CliError> {
    let mut reports = Vec::new();
    for (name, model) in &outcome.base_models {
        reports.push(evaluate_with_averaging(model, test, name, average)?);
    }
    if let Some(stacking) = &outcome.stacking {
        reports.push(evaluate_with_averaging(
            stacking,
            test,
            "Ensemble Model",
            average,
        )?);
    }
    Ok(reports)
}

/// Everything one pass leaves behind.
pub struct PassResult {
    pub record: PassRecord,
    pub outcome: FitOutcome,
    pub cleaning: CleaningModel,
    pub feature_names: Vec<String>,
    pub timings: Vec<(String, f64)>,
    pub filter_summaries: Vec<(String, FilterSummary)>,
    pub provenance: Vec<SyntheticProvenance>,
}

struct ResampleStage {
    dataset: LabeledDataset,
    detail: Vec<(String, String)>,
    summary: Option<FilterSummary>,
    provenance: Vec<SyntheticProvenance>,
}

fn apply_resample(
    ds: &LabeledDataset,
    method: ResampleMethod,
    cfg: &PipelineConfig,
) -> Result<ResampleStage, CliError> {
    let seed = seeding::child_seed(cfg.seed, RESAMPLE_TAG);
    let params = ResampleParams {
        smote_k: cfg.smote_k,
        enn_k: cfg.enn_k,
        seed,
    };
    let mut detail = vec![("method".to_string(), method.name().to_string())];
    Ok(match method {
        ResampleMethod::None => ResampleStage {
            dataset: ds.clone(),
            detail,
            summary: None,
            provenance: Vec::new(),
        },
        ResampleMethod::Ros => {
            let out = random_oversample(ds, seed)?;
            detail.push(("rows_added".into(), (out.n_rows() - ds.n_rows()).to_string()));
            ResampleStage {
                dataset: out,
                detail,
                summary: None,
                provenance: Vec::new(),
            }
        }
        ResampleMethod::Smote => {
            let out = smote(ds, &params)?;
            detail.push((
                "rows_added".into(),
                (out.dataset.n_rows() - ds.n_rows()).to_string(),
            ));
            ResampleStage {
                dataset: out.dataset,
                detail,
                summary: None,
                provenance: out.provenance,
            }
        }
        ResampleMethod::Enn => {
            let (out, report) = enn(ds, cfg.enn_k)?;
            detail.push(("rows_removed".into(), report.removed.to_string()));
            ResampleStage {
                dataset: out,
                detail,
                summary: None,
                provenance: Vec::new(),
            }
        }
        ResampleMethod::SmoteEnn => {
            let (out, summary, provenance) = smote_enn(ds, &params)?;
            detail.push(("rows_added".into(), summary.rows_added.to_string()));
            detail.push((
                "rows_removed".into(),
                summary.removed_by_column.get("enn").copied().unwrap_or(0).to_string(),
            ));
            ResampleStage {
                dataset: out,
                detail,
                summary: Some(summary),
                provenance,
            }
        }
    })
}

/// Runs one pass. Completed stage records accumulate in `stages` so an
/// aborted run still leaves an honest manifest.
pub fn run_pass(
    cfg: &PipelineConfig,
    pass_name: &str,
    method: ResampleMethod,
    raw: &Table,
    stages: &mut Vec<StageRecord>,
) -> Result<PassResult, CliError> {
    let mut timings = Vec::new();
    let mut filter_summaries = Vec::new();
    let timed = |name: &str, start: Instant, timings: &mut Vec<(String, f64)>| {
        timings.push((format!("{pass_name}.{name}"), start.elapsed().as_secs_f64()));
    };

    let start = Instant::now();
    let (cleaned, cleaning, clean_report) = clean_fit_transform(raw, &cfg.label, &cfg.classes)?;
    let mut ds = to_dataset(&cleaned, &cfg.label, &cfg.classes)?;
    let coerced: usize = clean_report.coerced_cells.values().sum();
    let imputed: usize = clean_report.imputed_cells.values().sum();
    stages.push(
        StageRecord::new("clean", raw.row_count(), ds.n_rows())
            .with("coerced_cells", coerced)
            .with("imputed_cells", imputed),
    );
    timed("clean", start, &mut timings);

    if cfg.filter_enabled {
        let start = Instant::now();
        let before = ds.n_rows();
        let (filtered, summary) =
            zscore_filter(&ds, cfg.z_threshold, cfg.filter_columns.as_deref())?;
        ds = filtered;
        stages.push(
            StageRecord::new("zscore", before, ds.n_rows())
                .with("threshold", cfg.z_threshold)
                .with("columns_skipped", summary.notes.len()),
        );
        filter_summaries.push(("zscore".to_string(), summary));
        timed("zscore", start, &mut timings);

        let start = Instant::now();
        let before = ds.n_rows();
        let (filtered, summary) =
            iqr_filter(&ds, cfg.iqr_multiplier, cfg.filter_columns.as_deref())?;
        ds = filtered;
        stages.push(
            StageRecord::new("iqr", before, ds.n_rows()).with("multiplier", cfg.iqr_multiplier),
        );
        filter_summaries.push(("iqr".to_string(), summary));
        timed("iqr", start, &mut timings);
    }

    let provenance: Vec<SyntheticProvenance>;
    let split_seed = seeding::child_seed(cfg.seed, SPLIT_TAG);

    let (train, test) = if cfg.resample_before_split {
        let start = Instant::now();
        let before = ds.n_rows();
        let stage = apply_resample(&ds, method, cfg)?;
        let mut record = StageRecord::new("resample", before, stage.dataset.n_rows());
        for (k, v) in stage.detail {
            record = record.with(&k, v);
        }
        stages.push(record);
        if let Some(summary) = stage.summary {
            filter_summaries.push(("resample".to_string(), summary));
        }
        provenance = stage.provenance;
        let resampled = stage.dataset;
        timed("resample", start, &mut timings);

        let start = Instant::now();
        let before_split = resampled.n_rows();
        let (train, test) = credit_core::preprocess::stratified_split(
            &resampled,
            cfg.test_fraction,
            split_seed,
        )?;
        stages.push(
            StageRecord::new("split", before_split, train.n_rows())
                .with("test_rows", test.n_rows()),
        );
        timed("split", start, &mut timings);
        (train, test)
    } else {
        let start = Instant::now();
        let before = ds.n_rows();
        let (train, test) =
            credit_core::preprocess::stratified_split(&ds, cfg.test_fraction, split_seed)?;
        stages.push(
            StageRecord::new("split", before, train.n_rows()).with("test_rows", test.n_rows()),
        );
        timed("split", start, &mut timings);

        let start = Instant::now();
        let before = train.n_rows();
        let stage = apply_resample(&train, method, cfg)?;
        let mut record = StageRecord::new("resample", before, stage.dataset.n_rows());
        for (k, v) in stage.detail {
            record = record.with(&k, v);
        }
        stages.push(record);
        if let Some(summary) = stage.summary {
            filter_summaries.push(("resample".to_string(), summary));
        }
        provenance = stage.provenance;
        timed("resample", start, &mut timings);
        (stage.dataset, test)
    };

    let start = Instant::now();
    let fit_seed = seeding::child_seed(cfg.seed, FIT_TAG);
    let outcome = fit_models(&train, &cfg.ensemble, fit_seed)?;
    stages.push(
        StageRecord::new("fit", train.n_rows(), train.n_rows())
            .with("models", outcome.base_models.len())
            .with("ensemble", outcome.stacking.is_some()),
    );
    timed("fit", start, &mut timings);

    let start = Instant::now();
    let reports = evaluate_outcome(&outcome, &test, cfg.average)?;
    timed("evaluate", start, &mut timings);

    let feature_names = train.feature_names.clone();
    Ok(PassResult {
        record: PassRecord {
            name: pass_name.to_string(),
            stages: stages.clone(),
            reports,
        },
        outcome,
        cleaning,
        feature_names,
        timings,
        filter_summaries,
        provenance,
    })
}

