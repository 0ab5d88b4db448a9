//! `credit clean`: coerce → impute → encode, then write the dense CSV and
//! an optional key=value cleaning report. Rerunning on its own output is a
//! byte-identical no-op.

use std::path::Path;

use credit_core::tabular::{clean_fit_transform, serialize_csv};

use super::{classes_from_flag, load_table, write_file};
use crate::CliError;

pub fn run(
    label: &str,
    classes: Option<&str>,
    report: Option<&Path>,
    input: &Path,
    output: &Path,
) -> Result<(), CliError> {
    let table = load_table(input)?;
    let classes = classes_from_flag(classes);
    let (cleaned, _, cleaning_report) = clean_fit_transform(&table, label, &classes)?;
    write_file(output, &serialize_csv(&cleaned))?;
    if let Some(path) = report {
        write_file(path, &cleaning_report.to_key_value())?;
    }
    eprintln!(
        "cleaned {} rows x {} columns -> {}",
        cleaned.row_count(),
        cleaned.column_names().len(),
        output.display()
    );
    Ok(())
}
