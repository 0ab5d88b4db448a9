//! `credit evaluate`: score every model of a bundle on a labeled CSV and
//! render the comparison table.

use std::path::Path;

use credit_core::metrics::{
    evaluate_with_averaging, render_text, reports_to_csv, Averaging,
};
use credit_core::tabular::{clean_apply, to_dataset};

use super::{load_table, write_file};
use crate::{bundle, CliError};

pub fn run(
    bundle_dir: &Path,
    average: Averaging,
    out: Option<&Path>,
    input: &Path,
) -> Result<(), CliError> {
    let bundle = bundle::load_bundle(bundle_dir)?;
    let table = load_table(input)?;
    let (cleaned, warnings) = clean_apply(&bundle.cleaning, &table)?;
    for w in warnings {
        eprintln!("warning: {w}");
    }
    let ds = to_dataset(
        &cleaned,
        &bundle.manifest.label_column,
        &bundle.manifest.class_names,
    )?;
    let mut reports = Vec::new();
    for (name, model) in &bundle.base_models {
        reports.push(evaluate_with_averaging(model, &ds, name, average)?);
    }
    if let Some(stacking) = &bundle.stacking {
        reports.push(evaluate_with_averaging(
            stacking,
            &ds,
            "Ensemble Model",
            average,
        )?);
    }
    print!("{}", render_text(&reports));
    if let Some(path) = out {
        write_file(path, &reports_to_csv(&reports))?;
    }
    Ok(())
}
