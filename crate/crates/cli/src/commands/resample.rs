//! `credit resample`: rebalance a cleaned CSV with ros/smote/enn/smoteenn.
//! SMOTE-backed methods can write a provenance sidecar (one line per
//! synthetic row: seed_row, neighbor_row, u).

use std::path::Path;

use credit_core::preprocess::{random_oversample, FilterSummary};
use credit_core::resample::{enn, smote, smote_enn, ResampleParams, SyntheticProvenance};
use credit_core::tabular::{dataset_to_table, fmt_f64, serialize_csv};

use super::{classes_from_flag, load_clean_dataset, write_file};
use crate::config::ResampleMethod;
use crate::CliError;

pub fn provenance_to_csv(rows: &[SyntheticProvenance]) -> String {
    let mut out = String::from("seed_row,neighbor_row,u\n");
    for p in rows {
        out.push_str(&format!("{},{},{}\n", p.seed_row, p.neighbor_row, fmt_f64(p.u)));
    }
    out
}

#[allow(clippy::too_many_arguments)]
pub fn run(
    method: ResampleMethod,
    smote_k: usize,
    enn_k: usize,
    seed: u64,
    label: &str,
    classes: Option<&str>,
    provenance_path: Option<&Path>,
    input: &Path,
    output: &Path,
) -> Result<(), CliError> {
    let classes = classes_from_flag(classes);
    let ds = load_clean_dataset(input, label, &classes)?;
    let params = ResampleParams {
        smote_k,
        enn_k,
        seed,
    };

    let mut provenance = Vec::new();
    let (out_ds, summary) = match method {
        ResampleMethod::None => {
            return Err(CliError::Usage(
                "resample needs --method ros|smote|enn|smoteenn".into(),
            ))
        }
        ResampleMethod::Ros => {
            let out = random_oversample(&ds, seed)?;
            let summary = FilterSummary {
                rows_before: ds.n_rows(),
                rows_after: out.n_rows(),
                rows_added: out.n_rows() - ds.n_rows(),
                ..FilterSummary::default()
            };
            (out, summary)
        }
        ResampleMethod::Smote => {
            let out = smote(&ds, &params)?;
            let summary = FilterSummary {
                rows_before: ds.n_rows(),
                rows_after: out.dataset.n_rows(),
                rows_added: out.dataset.n_rows() - ds.n_rows(),
                ..FilterSummary::default()
            };
            provenance = out.provenance;
            (out.dataset, summary)
        }
        ResampleMethod::Enn => {
            let (out, report) = enn(&ds, enn_k)?;
            let mut summary = FilterSummary {
                rows_before: ds.n_rows(),
                rows_after: out.n_rows(),
                rows_added: 0,
                ..FilterSummary::default()
            };
            summary.removed_by_column.insert("enn".into(), report.removed);
            summary.notes = report.warnings;
            (out, summary)
        }
        ResampleMethod::SmoteEnn => {
            let (out, summary, prov) = smote_enn(&ds, &params)?;
            provenance = prov;
            (out, summary)
        }
    };

    write_file(output, &serialize_csv(&dataset_to_table(&out_ds, label)?))?;
    if let Some(path) = provenance_path {
        write_file(path, &provenance_to_csv(&provenance))?;
    }
    print!("{}", summary.to_key_value());
    Ok(())
}
