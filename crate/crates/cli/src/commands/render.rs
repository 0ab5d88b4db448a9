//! `credit render-report`: turn a metrics CSV (possibly hand-extended with
//! external model scores) into a text, markdown or normalized CSV table.

use std::path::Path;

use credit_core::metrics::{render_markdown, render_text, reports_from_csv, reports_to_csv};

use super::read_file;
use crate::CliError;

pub fn run(format: &str, input: &Path) -> Result<(), CliError> {
    let reports = reports_from_csv(&read_file(input)?)?;
    let rendered = match format {
        "text" => render_text(&reports),
        "markdown" => render_markdown(&reports),
        "csv" => reports_to_csv(&reports),
        other => {
            return Err(CliError::Usage(format!(
                "unknown format '{other}' (expected text|markdown|csv)"
            )))
        }
    };
    print!("{rendered}");
    Ok(())
}
