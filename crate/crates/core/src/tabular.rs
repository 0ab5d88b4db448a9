//! Raw CSV ingestion and cleaning.
//!
//! The raw credit file arrives as text: numeric columns are corrupted with
//! stray underscores and junk strings, cells are missing, and several columns
//! are categorical. This module parses the CSV into a [`Table`] of typed
//! cells, coerces numeric columns, imputes missing values with column means,
//! ordinal-encodes categoricals, and assembles a dense [`LabeledDataset`].
//!
//! Cleaning statistics (means, category codebooks) are captured in a
//! [`CleaningModel`] so the exact same transform can be replayed on unseen
//! rows at prediction time.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default label codebook: Poor=0, Standard=1, Good=2.
pub const DEFAULT_CLASS_ORDER: [&str; 3] = ["Poor", "Standard", "Good"];

/// One parsed CSV cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Cell {
    Number(f64),
    Text(String),
    Missing,
}

impl Cell {
    pub fn is_missing(&self) -> bool {
        matches!(self, Cell::Missing)
    }

    pub fn as_number(&self) -> Option<f64> {
        match self {
            Cell::Number(v) => Some(*v),
            _ => None,
        }
    }
}

/// Column-oriented raw table. Every column holds exactly `row_count` cells
/// and column names are unique and non-empty.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    column_names: Vec<String>,
    columns: Vec<Vec<Cell>>,
    row_count: usize,
}

impl Table {
    pub fn new(column_names: Vec<String>, columns: Vec<Vec<Cell>>) -> Result<Self> {
        if column_names.len() != columns.len() {
            return Err(Error::invalid_data(format!(
                "{} column names for {} columns",
                column_names.len(),
                columns.len()
            )));
        }
        let mut seen = std::collections::BTreeSet::new();
        for name in &column_names {
            if name.is_empty() {
                return Err(Error::invalid_data("empty column name"));
            }
            if !seen.insert(name.clone()) {
                return Err(Error::invalid_data(format!(
                    "duplicate column name '{name}'"
                )));
            }
        }
        let row_count = columns.first().map_or(0, Vec::len);
        for (name, col) in column_names.iter().zip(&columns) {
            if col.len() != row_count {
                return Err(Error::invalid_data(format!(
                    "column '{name}' has {} cells, expected {row_count}",
                    col.len()
                )));
            }
        }
        Ok(Table {
            column_names,
            columns,
            row_count,
        })
    }

    pub fn column_names(&self) -> &[String] {
        &self.column_names
    }

    pub fn row_count(&self) -> usize {
        self.row_count
    }

    pub fn column_index(&self, name: &str) -> Result<usize> {
        self.column_names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownColumn(name.to_string()))
    }

    pub fn column(&self, name: &str) -> Result<&[Cell]> {
        Ok(&self.columns[self.column_index(name)?])
    }

    pub fn columns(&self) -> &[Vec<Cell>] {
        &self.columns
    }

    fn column_mut(&mut self, index: usize) -> &mut Vec<Cell> {
        &mut self.columns[index]
    }

    /// Sub-table with the named columns, in the given order.
    pub fn select_columns(&self, names: &[String]) -> Result<Table> {
        let mut cols = Vec::with_capacity(names.len());
        for name in names {
            cols.push(self.column(name)?.to_vec());
        }
        Table::new(names.to_vec(), cols)
    }
}

/// Dense numeric feature matrix plus integer class labels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledDataset {
    pub features: Vec<Vec<f64>>,
    pub labels: Vec<usize>,
    pub feature_names: Vec<String>,
    pub class_names: Vec<String>,
}

impl LabeledDataset {
    pub fn n_rows(&self) -> usize {
        self.features.len()
    }

    pub fn n_features(&self) -> usize {
        self.feature_names.len()
    }

    pub fn n_classes(&self) -> usize {
        self.class_names.len()
    }

    /// Rows per class, indexed by label code.
    pub fn class_counts(&self) -> Vec<usize> {
        let mut counts = vec![0usize; self.n_classes()];
        for &label in &self.labels {
            counts[label] += 1;
        }
        counts
    }

    /// New dataset holding the given rows, in the given order.
    pub fn select_rows(&self, indices: &[usize]) -> LabeledDataset {
        LabeledDataset {
            features: indices.iter().map(|&i| self.features[i].clone()).collect(),
            labels: indices.iter().map(|&i| self.labels[i]).collect(),
            feature_names: self.feature_names.clone(),
            class_names: self.class_names.clone(),
        }
    }

    pub fn feature_index(&self, name: &str) -> Result<usize> {
        self.feature_names
            .iter()
            .position(|n| n == name)
            .ok_or_else(|| Error::UnknownColumn(name.to_string()))
    }

    /// Checks the density/label invariants: finite features, aligned lengths,
    /// labels < n_classes.
    pub fn validate(&self) -> Result<()> {
        if self.labels.len() != self.features.len() {
            return Err(Error::invalid_data(format!(
                "{} labels for {} feature rows",
                self.labels.len(),
                self.features.len()
            )));
        }
        for (i, row) in self.features.iter().enumerate() {
            if row.len() != self.feature_names.len() {
                return Err(Error::invalid_data(format!(
                    "row {i} has {} features, expected {}",
                    row.len(),
                    self.feature_names.len()
                )));
            }
            if let Some(j) = row.iter().position(|v| !v.is_finite()) {
                return Err(Error::invalid_data(format!(
                    "non-finite feature at row {i}, column '{}'",
                    self.feature_names[j]
                )));
            }
        }
        for (i, &label) in self.labels.iter().enumerate() {
            if label >= self.class_names.len() {
                return Err(Error::invalid_data(format!(
                    "label {label} at row {i} exceeds {} classes",
                    self.class_names.len()
                )));
            }
        }
        Ok(())
    }
}

/// Per-column cleaning bookkeeping: how many cells were coerced away from
/// text, how many were imputed, and the means used.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CleaningReport {
    pub coerced_cells: BTreeMap<String, usize>,
    pub imputed_cells: BTreeMap<String, usize>,
    pub column_means: BTreeMap<String, f64>,
}

impl CleaningReport {
    fn merge(&mut self, other: CleaningReport) {
        self.coerced_cells.extend(other.coerced_cells);
        self.imputed_cells.extend(other.imputed_cells);
        self.column_means.extend(other.column_means);
    }

    /// Flat `key=value` rendering, one line per entry.
    pub fn to_key_value(&self) -> String {
        let mut out = String::new();
        for (col, n) in &self.coerced_cells {
            out.push_str(&format!("coerced.{col}={n}\n"));
        }
        for (col, n) in &self.imputed_cells {
            out.push_str(&format!("imputed.{col}={n}\n"));
        }
        for (col, m) in &self.column_means {
            out.push_str(&format!("mean.{col}={}\n", fmt_f64(*m)));
        }
        out
    }
}

/// Shortest representation that parses back to the identical f64.
pub fn fmt_f64(v: f64) -> String {
    format!("{v}")
}

/// Parses RFC-4180-style CSV text (header row required, double-quote
/// quoting) into a [`Table`]. Empty fields become [`Cell::Missing`]; every
/// other cell starts as [`Cell::Text`].
pub fn parse_csv(text: &str) -> Result<Table> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(text.as_bytes());
    let headers: Vec<String> = reader
        .headers()
        .map_err(|_| Error::EmptyInput)?
        .iter()
        .map(str::to_string)
        .collect();
    if headers.is_empty() || (headers.len() == 1 && headers[0].is_empty()) {
        return Err(Error::EmptyInput);
    }
    let width = headers.len();
    let mut columns: Vec<Vec<Cell>> = vec![Vec::new(); width];
    for (i, record) in reader.records().enumerate() {
        let record = record?;
        if record.len() != width {
            return Err(Error::RaggedRow {
                row: i + 1,
                expected: width,
                got: record.len(),
            });
        }
        for (col, field) in columns.iter_mut().zip(record.iter()) {
            col.push(if field.is_empty() {
                Cell::Missing
            } else {
                Cell::Text(field.to_string())
            });
        }
    }
    Table::new(headers, columns)
}

/// Writes a [`Table`] back to CSV. Missing cells become empty fields; numbers
/// use their shortest round-trip representation.
pub fn serialize_csv(table: &Table) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer
        .write_record(table.column_names())
        .expect("in-memory csv write");
    for row in 0..table.row_count() {
        let record: Vec<String> = table
            .columns()
            .iter()
            .map(|col| match &col[row] {
                Cell::Number(v) => fmt_f64(*v),
                Cell::Text(s) => s.clone(),
                Cell::Missing => String::new(),
            })
            .collect();
        writer.write_record(&record).expect("in-memory csv write");
    }
    String::from_utf8(writer.into_inner().expect("in-memory csv flush"))
        .expect("csv output is utf-8")
}

/// Attempts to parse one text cell as a number: surrounding whitespace is
/// stripped, then a single trailing underscore (the raw file's "345_"-style
/// corruption), then `f64::parse`. Non-finite parses count as failures.
fn coerce_cell(s: &str) -> Option<f64> {
    let trimmed = s.trim();
    let trimmed = trimmed.strip_suffix('_').unwrap_or(trimmed);
    match trimmed.parse::<f64>() {
        Ok(v) if v.is_finite() => Some(v),
        _ => None,
    }
}

/// Coerces a column to numeric cells; unparseable text becomes Missing.
pub fn coerce_numeric(table: &Table, column: &str) -> Result<Table> {
    Ok(coerce_numeric_counted(table, column)?.0)
}

/// As [`coerce_numeric`], also reporting how many text cells were touched.
pub fn coerce_numeric_counted(table: &Table, column: &str) -> Result<(Table, usize)> {
    let idx = table.column_index(column)?;
    let mut out = table.clone();
    let mut coerced = 0usize;
    for cell in out.column_mut(idx).iter_mut() {
        if let Cell::Text(s) = cell {
            coerced += 1;
            *cell = match coerce_cell(s) {
                Some(v) => Cell::Number(v),
                None => Cell::Missing,
            };
        }
    }
    Ok((out, coerced))
}

/// Replaces Missing cells in numeric columns by the column mean. A column is
/// targeted when it holds no text cells; a targeted column with zero observed
/// values is an error.
pub fn impute_mean(table: &Table) -> Result<(Table, CleaningReport)> {
    let mut out = table.clone();
    let mut report = CleaningReport::default();
    for idx in 0..out.columns.len() {
        let name = out.column_names[idx].clone();
        let col = &out.columns[idx];
        if col.iter().any(|c| matches!(c, Cell::Text(_))) {
            continue;
        }
        if col.is_empty() {
            continue;
        }
        let observed: Vec<f64> = col.iter().filter_map(Cell::as_number).collect();
        let missing = col.len() - observed.len();
        if observed.is_empty() {
            return Err(Error::NoObservedValues(name));
        }
        let mean = observed.iter().sum::<f64>() / observed.len() as f64;
        if missing > 0 {
            for cell in out.column_mut(idx).iter_mut() {
                if cell.is_missing() {
                    *cell = Cell::Number(mean);
                }
            }
        }
        report.imputed_cells.insert(name.clone(), missing);
        report.column_means.insert(name, mean);
    }
    Ok((out, report))
}

/// Ordinal codebook for one categorical column. Codes follow first-appearance
/// order; Missing maps to `categories.len()`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CategoryEncoding {
    pub column: String,
    pub categories: Vec<String>,
}

impl CategoryEncoding {
    pub fn missing_code(&self) -> usize {
        self.categories.len()
    }

    pub fn code_of(&self, value: &str) -> Option<usize> {
        self.categories.iter().position(|c| c == value)
    }
}

/// Scans a text column top to bottom and assigns codes by first appearance.
pub fn fit_encoding(table: &Table, column: &str) -> Result<CategoryEncoding> {
    let col = table.column(column)?;
    let mut categories: Vec<String> = Vec::new();
    for (row, cell) in col.iter().enumerate() {
        match cell {
            Cell::Text(s) => {
                if !categories.contains(s) {
                    categories.push(s.clone());
                }
            }
            Cell::Missing => {}
            Cell::Number(_) => {
                return Err(Error::invalid_data(format!(
                    "column '{column}' is not categorical: numeric cell at row {row}"
                )));
            }
        }
    }
    Ok(CategoryEncoding {
        column: column.to_string(),
        categories,
    })
}

/// Replaces a text column by its codes under `encoding`. Unseen values map to
/// the missing code; the count of such cells is returned.
pub fn apply_encoding(table: &Table, encoding: &CategoryEncoding) -> Result<(Table, usize)> {
    let idx = table.column_index(&encoding.column)?;
    let mut out = table.clone();
    let mut unseen = 0usize;
    for (row, cell) in out.column_mut(idx).iter_mut().enumerate() {
        let code = match cell {
            Cell::Text(s) => match encoding.code_of(s) {
                Some(code) => code,
                None => {
                    unseen += 1;
                    encoding.missing_code()
                }
            },
            Cell::Missing => encoding.missing_code(),
            Cell::Number(_) => {
                return Err(Error::invalid_data(format!(
                    "column '{}' is not categorical: numeric cell at row {row}",
                    encoding.column
                )));
            }
        };
        *cell = Cell::Number(code as f64);
    }
    Ok((out, unseen))
}

/// First-appearance ordinal encoding of one text column.
pub fn encode_categorical(table: &Table, column: &str) -> Result<Table> {
    let encoding = fit_encoding(table, column)?;
    Ok(apply_encoding(table, &encoding)?.0)
}

fn label_text(cell: &Cell) -> Result<String> {
    match cell {
        Cell::Text(s) => Ok(s.clone()),
        Cell::Number(v) => Ok(fmt_f64(*v)),
        Cell::Missing => Err(Error::invalid_data("label column has a missing cell")),
    }
}

/// Assembles the dense dataset: all non-label columns (in table order) become
/// features, label values are looked up in `class_order`.
pub fn to_dataset(table: &Table, label_column: &str, class_order: &[String]) -> Result<LabeledDataset> {
    let label_idx = table.column_index(label_column)?;
    let mut feature_names = Vec::new();
    let mut feature_cols = Vec::new();
    for (idx, name) in table.column_names.iter().enumerate() {
        if idx == label_idx {
            continue;
        }
        let mut values = Vec::with_capacity(table.row_count());
        for (row, cell) in table.columns[idx].iter().enumerate() {
            match cell {
                Cell::Number(v) if v.is_finite() => values.push(*v),
                Cell::Number(_) => {
                    return Err(Error::invalid_data(format!(
                        "column '{name}' has a non-finite value at row {row}"
                    )));
                }
                Cell::Text(_) => {
                    return Err(Error::invalid_data(format!(
                        "column '{name}' is not numeric at row {row}"
                    )));
                }
                Cell::Missing => {
                    return Err(Error::invalid_data(format!(
                        "column '{name}' still has a missing cell at row {row}"
                    )));
                }
            }
        }
        feature_names.push(name.clone());
        feature_cols.push(values);
    }
    let mut labels = Vec::with_capacity(table.row_count());
    for cell in &table.columns[label_idx] {
        let value = label_text(cell)?;
        let code = class_order
            .iter()
            .position(|c| *c == value)
            .ok_or_else(|| Error::UnknownClass(value.clone()))?;
        labels.push(code);
    }
    let features: Vec<Vec<f64>> = (0..table.row_count())
        .map(|row| feature_cols.iter().map(|col| col[row]).collect())
        .collect();
    Ok(LabeledDataset {
        features,
        labels,
        feature_names,
        class_names: class_order.to_vec(),
    })
}

/// Rebuilds a [`Table`] from a dataset: numeric feature columns plus a text
/// label column holding class names.
pub fn dataset_to_table(ds: &LabeledDataset, label_column: &str) -> Result<Table> {
    let mut names = ds.feature_names.clone();
    names.push(label_column.to_string());
    let mut columns: Vec<Vec<Cell>> = vec![Vec::with_capacity(ds.n_rows()); names.len()];
    for (row, label) in ds.features.iter().zip(&ds.labels) {
        for (j, v) in row.iter().enumerate() {
            columns[j].push(Cell::Number(*v));
        }
        columns[ds.n_features()].push(Cell::Text(ds.class_names[*label].clone()));
    }
    Table::new(names, columns)
}

/// Replayable cleaning transform fitted on the training file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CleaningModel {
    pub format_version: u32,
    pub label_column: String,
    pub class_names: Vec<String>,
    /// Feature columns in output order (label excluded).
    pub feature_columns: Vec<String>,
    pub numeric_columns: Vec<String>,
    pub column_means: BTreeMap<String, f64>,
    pub encodings: Vec<CategoryEncoding>,
}

pub const CLEANING_FORMAT_VERSION: u32 = 1;

impl CleaningModel {
    fn is_numeric(&self, column: &str) -> bool {
        self.numeric_columns.iter().any(|c| c == column)
    }
}

/// Fits the cleaning transform on a raw table and applies it.
///
/// A non-label column is classified numeric when at least half of its
/// non-missing cells coerce to numbers (the raw file's numeric columns carry
/// scattered junk strings); everything else is categorical.
pub fn clean_fit_transform(
    table: &Table,
    label_column: &str,
    class_order: &[String],
) -> Result<(Table, CleaningModel, CleaningReport)> {
    table.column_index(label_column)?;
    let mut out = table.clone();
    let mut report = CleaningReport::default();
    let mut numeric_columns = Vec::new();
    let mut encodings = Vec::new();
    let feature_columns: Vec<String> = table
        .column_names()
        .iter()
        .filter(|n| *n != label_column)
        .cloned()
        .collect();

    for name in &feature_columns {
        let col = out.column(name)?;
        let informative = col.iter().filter(|c| !c.is_missing()).count();
        let parseable = col
            .iter()
            .filter(|c| match c {
                Cell::Number(_) => true,
                Cell::Text(s) => coerce_cell(s).is_some(),
                Cell::Missing => false,
            })
            .count();
        if informative == 0 || parseable * 2 >= informative {
            let (coerced_table, coerced) = coerce_numeric_counted(&out, name)?;
            out = coerced_table;
            report.coerced_cells.insert(name.clone(), coerced);
            numeric_columns.push(name.clone());
        }
    }

    // Mean imputation covers exactly the numeric columns: categorical columns
    // still hold text at this point and are skipped. The label column is
    // snapshotted and restored so it is never imputed.
    let label_cells = out.column(label_column)?.to_vec();
    let (imputed, impute_report) = impute_mean(&out)?;
    out = imputed;
    report.merge(impute_report);
    // Imputation must never rewrite the label column.
    let label_idx = out.column_index(label_column)?;
    out.columns[label_idx] = label_cells;
    report.imputed_cells.remove(label_column);
    report.column_means.remove(label_column);
    report.coerced_cells.remove(label_column);

    for name in &feature_columns {
        if numeric_columns.contains(name) {
            continue;
        }
        let encoding = fit_encoding(&out, name)?;
        let (encoded, _) = apply_encoding(&out, &encoding)?;
        out = encoded;
        encodings.push(encoding);
    }

    let model = CleaningModel {
        format_version: CLEANING_FORMAT_VERSION,
        label_column: label_column.to_string(),
        class_names: class_order.to_vec(),
        feature_columns,
        numeric_columns,
        column_means: report.column_means.clone(),
        encodings,
    };
    Ok((out, model, report))
}

/// Replays a fitted cleaning transform on new raw rows using the stored
/// means and codebooks. Returns the cleaned table (label column carried
/// through when present) and any warnings.
pub fn clean_apply(model: &CleaningModel, table: &Table) -> Result<(Table, Vec<String>)> {
    let mut warnings = Vec::new();
    for name in &model.feature_columns {
        if table.column_index(name).is_err() {
            return Err(Error::UnknownColumn(name.clone()));
        }
    }
    for name in table.column_names() {
        if name != &model.label_column && !model.feature_columns.contains(name) {
            warnings.push(format!("ignoring unexpected column '{name}'"));
        }
    }

    let mut keep = model.feature_columns.clone();
    let has_label = table.column_index(&model.label_column).is_ok();
    if has_label {
        keep.push(model.label_column.clone());
    }
    let mut out = table.select_columns(&keep)?;

    for name in &model.feature_columns {
        if model.is_numeric(name) {
            out = coerce_numeric(&out, name)?;
            let mean = *model.column_means.get(name).ok_or_else(|| {
                Error::invalid_data(format!("cleaning model has no mean for column '{name}'"))
            })?;
            let idx = out.column_index(name)?;
            for cell in out.column_mut(idx).iter_mut() {
                if cell.is_missing() {
                    *cell = Cell::Number(mean);
                }
            }
        } else {
            let encoding = model
                .encodings
                .iter()
                .find(|e| &e.column == name)
                .ok_or_else(|| {
                    Error::invalid_data(format!("cleaning model has no encoding for column '{name}'"))
                })?;
            let (encoded, unseen) = apply_encoding(&out, encoding)?;
            out = encoded;
            if unseen > 0 {
                warnings.push(format!(
                    "column '{name}': {unseen} unseen value(s) mapped to code {}",
                    encoding.missing_code()
                ));
            }
        }
    }
    Ok((out, warnings))
}
