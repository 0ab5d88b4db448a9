//! `credit predict`: replay the bundle's cleaning statistics on new rows,
//! then emit per-class probabilities and the argmax label name.

use std::path::Path;

use credit_core::learners::Classifier;
use credit_core::metrics::argmax;
use credit_core::tabular::{clean_apply, fmt_f64};

use super::{load_table, table_to_features, write_file};
use crate::{bundle, CliError};

pub fn run(
    bundle_dir: &Path,
    model_name: Option<&str>,
    out: Option<&Path>,
    input: &Path,
) -> Result<(), CliError> {
    let bundle = bundle::load_bundle(bundle_dir)?;
    let table = load_table(input)?;
    let (cleaned, warnings) = clean_apply(&bundle.cleaning, &table)?;
    for w in warnings {
        eprintln!("warning: {w}");
    }
    let features = table_to_features(&cleaned, &bundle.cleaning.feature_columns)?;

    let classifier: &dyn Classifier = match model_name {
        None | Some("ensemble") => match &bundle.stacking {
            Some(stacking) => stacking,
            None => match model_name {
                Some(_) => return Err(CliError::Data("bundle has no ensemble".into())),
                None => {
                    return Err(CliError::Data(
                        "bundle has no ensemble; choose a base with --model".into(),
                    ))
                }
            },
        },
        Some(name) => bundle
            .base_by_name(name)
            .ok_or_else(|| CliError::Data(format!("bundle has no model named '{name}'")))?,
    };

    let probs = classifier.predict_proba(&features)?;
    let classes = &bundle.manifest.class_names;
    let mut csv = String::from("row");
    for class in classes {
        csv.push_str(&format!(",p_{class}"));
    }
    csv.push_str(",label\n");
    for (i, p) in probs.iter().enumerate() {
        csv.push_str(&i.to_string());
        for v in p {
            csv.push(',');
            csv.push_str(&fmt_f64(*v));
        }
        csv.push(',');
        csv.push_str(&classes[argmax(p)]);
        csv.push('\n');
    }
    match out {
        Some(path) => write_file(path, &csv)?,
        None => print!("{csv}"),
    }
    Ok(())
}
