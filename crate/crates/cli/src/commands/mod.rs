//! One module per subcommand.

pub mod clean;
pub mod evaluate;
pub mod predict;
pub mod render;
pub mod resample;
pub mod run;
pub mod train;

use std::path::Path;

use credit_core::tabular::{parse_csv, Cell, Table};

use crate::config::default_classes;
use crate::CliError;

pub(crate) fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::Data(format!("cannot read {}: {e}", path.display())))
}

pub(crate) fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents)
        .map_err(|e| CliError::Data(format!("cannot write {}: {e}", path.display())))
}

pub(crate) fn load_table(path: &Path) -> Result<Table, CliError> {
    Ok(parse_csv(&read_file(path)?)?)
}

/// Loads an already-cleaned CSV into a dataset: every non-label column is
/// coerced to numbers (junk surfaces as a missing-cell error downstream),
/// labels looked up in the class order.
pub(crate) fn load_clean_dataset(
    path: &Path,
    label: &str,
    classes: &[String],
) -> Result<credit_core::tabular::LabeledDataset, CliError> {
    let mut table = load_table(path)?;
    for name in table.column_names().to_vec() {
        if name != label {
            table = credit_core::tabular::coerce_numeric(&table, &name)?;
        }
    }
    Ok(credit_core::tabular::to_dataset(&table, label, classes)?)
}

/// `--classes a,b,c` or the default Poor/Standard/Good codebook.
pub(crate) fn classes_from_flag(flag: Option<&str>) -> Vec<String> {
    match flag {
        None => default_classes(),
        Some(list) => list
            .split(',')
            .map(|s| s.trim().to_string())
            .filter(|s| !s.is_empty())
            .collect(),
    }
}

/// Dense feature matrix from a cleaned table, columns in the given order.
/// The label column (or any extra column) is simply not selected.
pub(crate) fn table_to_features(
    table: &Table,
    feature_columns: &[String],
) -> Result<Vec<Vec<f64>>, CliError> {
    let mut columns = Vec::with_capacity(feature_columns.len());
    for name in feature_columns {
        let cells = table.column(name)?;
        let mut values = Vec::with_capacity(cells.len());
        for (row, cell) in cells.iter().enumerate() {
            match cell {
                Cell::Number(v) => values.push(*v),
                _ => {
                    return Err(CliError::Data(format!(
                        "column '{name}' is not numeric at row {row}"
                    )))
                }
            }
        }
        columns.push(values);
    }
    let n_rows = columns.first().map_or(0, Vec::len);
    Ok((0..n_rows)
        .map(|r| columns.iter().map(|c| c[r]).collect())
        .collect())
}
