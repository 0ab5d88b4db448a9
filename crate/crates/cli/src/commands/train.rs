//! `credit train`: clean a training CSV, fit the configured base models (and
//! the stacking ensemble unless disabled), and save everything as a bundle.

use std::path::Path;

use credit_core::tabular::{clean_fit_transform, to_dataset};

use super::{classes_from_flag, load_table, read_file};
use crate::config::{parse_ensemble, KeyValues};
use crate::{bundle, pipeline, CliError};

pub fn run(
    ensemble_cfg: &Path,
    label: &str,
    classes: Option<&str>,
    seed: u64,
    out_dir: &Path,
    input: &Path,
) -> Result<(), CliError> {
    let kv = KeyValues::parse(&read_file(ensemble_cfg)?)?;
    let ens = parse_ensemble(&kv)?;
    let classes = classes_from_flag(classes);
    let table = load_table(input)?;
    let (cleaned, cleaning, _) = clean_fit_transform(&table, label, &classes)?;
    let ds = to_dataset(&cleaned, label, &classes)?;
    let outcome = pipeline::fit_models(&ds, &ens, seed)?;
    bundle::save_bundle(out_dir, &cleaning, &ens.bases, &outcome, &ds.feature_names, seed)?;
    eprintln!(
        "trained {} base model(s){} on {} rows -> {}",
        outcome.base_models.len(),
        if outcome.stacking.is_some() {
            " + stacking ensemble"
        } else {
            ""
        },
        ds.n_rows(),
        out_dir.display()
    );
    Ok(())
}
